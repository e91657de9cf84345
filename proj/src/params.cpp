#include "rabi/params.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace rabi {

Ratio Ratio::finite(double value) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw DomainError("frequency ratio must be finite and positive");
    }
    Ratio r;
    r.infinite_ = false;
    r.value_ = value;
    return r;
}

Ratio Ratio::parse(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "infinity") {
        return infinite();
    }
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw DomainError("malformed frequency ratio '" + text + "'");
    }
    if (std::isinf(v) && v > 0) {
        return infinite();
    }
    return finite(v);
}

double Ratio::value() const {
    if (infinite_) {
        throw DomainError("operation requires a finite frequency ratio");
    }
    return value_;
}

std::string Ratio::to_string() const {
    if (infinite_) {
        return "inf";
    }
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

const char* to_string(Phase phase) {
    switch (phase) {
    case Phase::Normal: return "normal";
    case Phase::Critical: return "critical";
    case Phase::Superradiant: return "superradiant";
    }
    return "?";
}

ModelParams::ModelParams(double omega0, Ratio ratio, double g)
    : omega0_(omega0), ratio_(ratio), g_(g) {
    if (!std::isfinite(omega0) || omega0 <= 0.0) {
        throw DomainError("omega0 must be finite and positive");
    }
    if (!std::isfinite(g) || g < 0.0) {
        throw DomainError("coupling g must be finite and non-negative");
    }
}

double ModelParams::Omega() const { return omega0_ * ratio_.value(); }

double ModelParams::lambda() const {
    return g_ * std::sqrt(omega0_ * omega0_ * ratio_.value()) / 2.0;
}

Phase ModelParams::phase() const {
    if (g_ < kCriticalCoupling) return Phase::Normal;
    if (g_ > kCriticalCoupling) return Phase::Superradiant;
    return Phase::Critical;
}

ModelParams from_lambda(double omega0, double ratio, double lambda) {
    const double g = 2.0 * lambda / std::sqrt(omega0 * omega0 * ratio);
    return {omega0, Ratio::finite(ratio), g};
}

}  // namespace rabi
