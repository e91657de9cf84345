#pragma once

#include "rabi/cli/grid.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rabi::cli {

/// Bad command line or config file; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// --help was requested; carries the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Effective, Ed, Quench, Sweep, Fit, Kzm };

const char* to_string(Command command);

struct RunConfig {
    Command command = Command::Effective;

    double omega0 = 1.0;
    std::optional<GridSpec> g;
    GridSpec ratio = GridSpec::parse("inf");
    std::optional<GridSpec> tauq;
    double gf = 1.0;

    // ed
    std::size_t levels = 2;
    bool quartic = false;
    double ed_tol = 1e-9;
    int max_cutoff = 1 << 16;

    // quench / sweep
    double rtol = 1e-12;
    double atol = 1e-14;
    std::size_t sample_stride = 0;

    // fit
    std::string input;
    std::string x_col = "tau_q";
    std::string y_col = "E_r";
    std::optional<std::pair<double, double>> window;
    double sliding = 0.0;  // log10 half-width; 0 disables
    double min_x = 1.0;

    std::string output;  // empty: standard output
    unsigned workers = 1;

    /// Effective key = value pairs, in a fixed order, for the metadata echo.
    std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses `args` (without the program name). A `--config FILE` option loads
/// a flat key = value file whose keys are the long flag names (plus
/// `command`); command-line flags override file values.
RunConfig parse_config(const std::vector<std::string>& args);

/// Reads a key = value file: `#` starts a comment, blank lines are ignored.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace rabi::cli
