#include "rabi/cli/grid.hpp"

#include "rabi/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace rabi::cli {

double parse_number(std::string_view text, std::string_view what) {
    const std::string s(text);
    if (s == "inf" || s == "Inf") {
        return INFINITY;
    }
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || std::isnan(v)) {
        throw UsageError("malformed number '" + s + "' for " + std::string(what));
    }
    return v;
}

GridSpec GridSpec::parse(std::string_view text) {
    GridSpec spec;
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon == std::string_view::npos ? text.npos : colon - pos));
        if (colon == std::string_view::npos) break;
        pos = colon + 1;
    }

    if (parts.size() == 1) {
        const double v = parse_number(parts[0], "grid value");
        if (std::isinf(v)) {
            if (v < 0) throw UsageError("grid value cannot be -inf");
            spec.infinite = true;
            return spec;
        }
        spec.start = spec.stop = v;
        return spec;
    }
    if (parts.size() != 3) {
        throw UsageError("grid must be 'start:stop:count[log]', got '" + std::string(text) + "'");
    }

    spec.start = parse_number(parts[0], "grid start");
    spec.stop = parse_number(parts[1], "grid stop");
    auto count_text = std::string(parts[2]);
    if (count_text.size() > 3 && count_text.ends_with("log")) {
        spec.log = true;
        count_text.resize(count_text.size() - 3);
    }
    char* end = nullptr;
    const long n = std::strtol(count_text.c_str(), &end, 10);
    if (count_text.empty() || end != count_text.c_str() + count_text.size() || n < 1) {
        throw UsageError("grid count must be a positive integer, got '" + std::string(parts[2]) + "'");
    }
    spec.count = static_cast<std::size_t>(n);
    if (!std::isfinite(spec.start) || !std::isfinite(spec.stop)) {
        throw UsageError("grid endpoints must be finite");
    }
    if (spec.count > 1 && spec.start > spec.stop) {
        throw UsageError("contradictory grid: start > stop with count > 1");
    }
    if (spec.log && !(spec.start > 0.0)) {
        throw UsageError("log grid needs a positive start");
    }
    return spec;
}

std::vector<double> GridSpec::values() const {
    if (infinite) {
        throw UsageError("'inf' is only accepted for the frequency ratio");
    }
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = start;
        return out;
    }
    const double n = double(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        if (log) {
            const double l0 = std::log10(start);
            const double l1 = std::log10(stop);
            out[i] = std::pow(10.0, l0 + (l1 - l0) * double(i) / n);
        } else {
            out[i] = start + (stop - start) * double(i) / n;
        }
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

std::vector<Ratio> GridSpec::ratios() const {
    if (infinite) {
        return {Ratio::infinite()};
    }
    std::vector<Ratio> out;
    for (double v : values()) {
        try {
            out.push_back(Ratio::finite(v));
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

std::string GridSpec::to_string() const {
    if (infinite) return "inf";
    std::ostringstream os;
    os.precision(17);
    if (count == 1) {
        os << start;
    } else {
        os << start << ':' << stop << ':' << count << (log ? "log" : "");
    }
    return os.str();
}

}  // namespace rabi::cli
