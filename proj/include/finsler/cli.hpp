#pragma once

#include "finsler/verify.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace finsler::cli {

struct RunConfig {
    std::string metric;
    std::map<std::string, double> params;
    std::string f_expr = "exp(x1)";
    /// Preset name or a row-major comma list; empty selects the entry's default.
    std::string quadratic;
    std::optional<int> dim;
    verify::SamplePlan plan;
    std::optional<std::string> expect;
    /// Report destination; empty writes to the output stream.
    std::string out;
    bool csv = false;
    bool oracle_ad = false;
    bool unchecked = false;
};

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kMismatch = 2;

struct RunResult {
    int exit_code = kError;
    std::optional<verify::ClassificationReport> report;
    std::string message;
};

/// Validates the configuration, classifies and writes the report.
RunResult run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line: `classify ...` or `list`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finsler::cli
