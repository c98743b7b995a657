#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "torusflow/jet.hpp"

namespace torusflow {

// Parsed arithmetic expression over named variables.
//
// Grammar: + - * / ^ (right-assoc), unary minus, parentheses, numeric
// literals, `pi`, and the functions sin, cos, exp. Exponents must be
// constant subexpressions.
class Expr {
 public:
  static Expr parse(const std::string& text);

  Jet2 eval2(const std::map<std::string, Jet2>& vars) const;
  Jet1 eval1(const std::map<std::string, Jet1>& vars) const;
  double eval(const std::map<std::string, double>& vars) const;

  // Variable names referenced by the expression.
  std::vector<std::string> variables() const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace torusflow
