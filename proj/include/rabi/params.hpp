#pragma once

// Parameters of a single Rabi Hamiltonian instance.
//
// All energies are measured in units of the cavity frequency omega0 unless a
// function says otherwise. The coupling is carried in its dimensionless form
// g = 2*lambda / sqrt(omega0 * Omega); lambda is derived on demand.

#include <stdexcept>
#include <string>

namespace rabi {

/// Critical coupling of the normal/superradiant transition.
inline constexpr double kCriticalCoupling = 1.0;

/// Raised when an input lies outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a quantity diverges at the requested point (e.g. squeezing at g = 1).
class DivergentError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an iterative numerical procedure fails.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Frequency ratio Omega/omega0: either a finite positive real or the
/// Omega/omega0 -> infinity limit.
class Ratio {
public:
    static Ratio infinite() { return Ratio{}; }
    static Ratio finite(double value);

    /// Parses a decimal number or the literal "inf".
    static Ratio parse(const std::string& text);

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    /// Throws DomainError for the infinite ratio.
    double value() const;

    std::string to_string() const;

    friend bool operator==(const Ratio&, const Ratio&) = default;

private:
    Ratio() = default;
    bool infinite_ = true;
    double value_ = 0.0;
};

enum class Phase { Normal, Critical, Superradiant };

const char* to_string(Phase phase);

class ModelParams {
public:
    /// Validates omega0 > 0 and g >= 0 (both finite).
    ModelParams(double omega0, Ratio ratio, double g);

    double omega0() const { return omega0_; }
    const Ratio& ratio() const { return ratio_; }
    double g() const { return g_; }

    /// Atomic transition frequency Omega; requires a finite ratio.
    double Omega() const;

    /// Bare coupling lambda = g * sqrt(omega0^2 * ratio) / 2; requires a finite ratio.
    double lambda() const;

    Phase phase() const;

    ModelParams with_g(double g) const { return {omega0_, ratio_, g}; }
    ModelParams with_ratio(Ratio ratio) const { return {omega0_, ratio, g_}; }

private:
    double omega0_;
    Ratio ratio_;
    double g_;
};

/// Builds parameters from the bare coupling lambda; finite ratio only.
ModelParams from_lambda(double omega0, double ratio, double lambda);

}  // namespace rabi
