#pragma once

#include "rabi/cli/config.hpp"
#include "rabi/cli/table.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rabi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct ExtraFile {
    std::string suffix;  // appended to the output path
    std::string content;
};

struct RunOutcome {
    ResultTable table;
    bool all_ok = true;
    std::vector<ExtraFile> extra;
};

/// Computes the table for a parsed config. Per-point failures are recorded in
/// the row's error column and clear `all_ok`.
RunOutcome execute(const RunConfig& config);

/// Full front end: parse, check the output path, execute, write. Returns the
/// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rabi::cli
