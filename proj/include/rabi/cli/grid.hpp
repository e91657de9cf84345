#pragma once

#include "rabi/params.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rabi::cli {

/// Grid specification "start:stop:count[log]", a single value, or "inf"
/// (ratio grids only).
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;
    bool log = false;
    bool infinite = false;

    /// Throws UsageError on malformed text, count = 0, start > stop with
    /// count > 1, or a non-positive start on a log grid.
    static GridSpec parse(std::string_view text);

    std::vector<double> values() const;
    std::vector<Ratio> ratios() const;
    std::string to_string() const;
};

/// Parses a number, accepting "inf"; throws UsageError naming `what`.
double parse_number(std::string_view text, std::string_view what);

}  // namespace rabi::cli
