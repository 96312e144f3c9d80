#pragma once

#include <string>
#include <vector>

#include "slfv/config.hpp"

namespace slfv {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 1, kBudgetExceeded = 2, kInvariantViolation = 3 };

struct RunResult {
    int status = kOk;
    std::vector<std::string> files;  // written outputs, relative to config.out
    std::string message;
};

/// Validate, run and write outputs (CSV, summary.json, optional SVG).
/// Worker count never changes the outputs. Exceptions from the modules
/// propagate; invariant failures detected after a run set status 3.
RunResult run(const ExperimentConfig& config, int workers = 1);

/// Map an exception from `run` to an exit code.
int exit_code_for(const std::exception& e);

struct SvgSeries {
    std::vector<double> x, y;
    double slope = 0.0, intercept = 0.0;
};

/// Minimal scatter plot with a fitted line.
std::string scatter_svg(const SvgSeries& s, const std::string& x_label, const std::string& y_label);

}  // namespace slfv
