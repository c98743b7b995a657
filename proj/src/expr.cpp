#include "torusflow/expr.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace torusflow {

enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

struct Expr::Node {
  Op op;
  double num = 0.0;
  std::string name;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double const_fold(const Expr::Node& n);

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " + std::to_string(pos_) + ": " + what +
                                " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = make(Op::Add, lhs, term());
      } else if (eat('-')) {
        lhs = make(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) {
        lhs = make(Op::Mul, lhs, unary());
      } else if (eat('/')) {
        lhs = make(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) {
      NodePtr expo = unary();  // right associative
      const_fold(*expo);       // validates at parse time
      return make(Op::Pow, base, expo);
    }
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail("unexpected character");
  }

  NodePtr number() {
    size_t end = pos_;
    while (end < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' || s_[end] == 'e' ||
            s_[end] == 'E' ||
            ((s_[end] == '+' || s_[end] == '-') && end > pos_ && (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
      ++end;
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Num;
    try {
      size_t used = 0;
      n->num = std::stod(s_.substr(pos_, end - pos_), &used);
      pos_ += used;
    } catch (const std::exception&) {
      fail("bad number literal");
    }
    return n;
  }

  NodePtr identifier() {
    size_t end = pos_;
    while (end < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      ++end;
    std::string name = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (name == "pi") {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::Num;
      n->num = M_PI;
      return n;
    }
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!eat('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!eat(')')) fail("expected ')'");
      Op op = name == "sin" ? Op::Sin : name == "cos" ? Op::Cos : Op::Exp;
      return make(op, arg);
    }
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Var;
    n->name = name;
    return n;
  }
};

// Exponents must reduce to numbers so that jets stay polynomially exact.
double const_fold(const Expr::Node& n) {
  switch (n.op) {
    case Op::Num: return n.num;
    case Op::Add: return const_fold(*n.a) + const_fold(*n.b);
    case Op::Sub: return const_fold(*n.a) - const_fold(*n.b);
    case Op::Mul: return const_fold(*n.a) * const_fold(*n.b);
    case Op::Div: return const_fold(*n.a) / const_fold(*n.b);
    case Op::Pow: return std::pow(const_fold(*n.a), const_fold(*n.b));
    case Op::Neg: return -const_fold(*n.a);
    default:
      throw std::invalid_argument("exponent must be a constant expression");
  }
}

template <typename J, typename VarMap>
J eval_node(const Expr::Node& n, const VarMap& vars) {
  switch (n.op) {
    case Op::Num: return J::constant(n.num);
    case Op::Var: {
      auto it = vars.find(n.name);
      if (it == vars.end()) throw std::invalid_argument("unbound variable: " + n.name);
      return it->second;
    }
    case Op::Add: return eval_node<J>(*n.a, vars) + eval_node<J>(*n.b, vars);
    case Op::Sub: return eval_node<J>(*n.a, vars) - eval_node<J>(*n.b, vars);
    case Op::Mul: return eval_node<J>(*n.a, vars) * eval_node<J>(*n.b, vars);
    case Op::Div: return eval_node<J>(*n.a, vars) / eval_node<J>(*n.b, vars);
    case Op::Pow: return pow(eval_node<J>(*n.a, vars), const_fold(*n.b));
    case Op::Neg: return -eval_node<J>(*n.a, vars);
    case Op::Sin: return sin(eval_node<J>(*n.a, vars));
    case Op::Cos: return cos(eval_node<J>(*n.a, vars));
    case Op::Exp: return exp(eval_node<J>(*n.a, vars));
  }
  throw std::logic_error("bad node");
}

void collect_vars(const Expr::Node& n, std::set<std::string>& out) {
  if (n.op == Op::Var) out.insert(n.name);
  if (n.a) collect_vars(*n.a, out);
  if (n.b) collect_vars(*n.b, out);
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

Jet2 Expr::eval2(const std::map<std::string, Jet2>& vars) const { return eval_node<Jet2>(*root_, vars); }
Jet1 Expr::eval1(const std::map<std::string, Jet1>& vars) const { return eval_node<Jet1>(*root_, vars); }

double Expr::eval(const std::map<std::string, double>& vars) const {
  std::map<std::string, Jet1> jvars;
  for (const auto& [k, v] : vars) jvars[k] = Jet1::constant(v);
  return eval1(jvars).v;
}

std::vector<std::string> Expr::variables() const {
  std::set<std::string> s;
  collect_vars(*root_, s);
  return {s.begin(), s.end()};
}

}  // namespace torusflow
