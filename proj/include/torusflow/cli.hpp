#pragma once

#include <string>

#include "torusflow/integral.hpp"
#include "torusflow/metric.hpp"

namespace torusflow {

// Exit codes: 0 success, 1 verification failure, 2 usage/config error.
int cli_run(int argc, const char* const* argv);

// JSON config loaders shared by the CLI and tests.
Metric load_metric_file(const std::string& path);
IntegralCoeffs load_integral_file(const std::string& path);

}  // namespace torusflow
