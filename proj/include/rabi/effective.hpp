#pragma once

// Closed-form observables of the low-energy effective Hamiltonians of the
// Rabi model in the Omega/omega0 -> infinity limit, for the normal (g < 1)
// and superradiant (g > 1) phases, plus the leading finite-frequency
// corrections at the critical point.
//
// Functions taking a bare `g` return values in units of omega0. Functions
// taking ModelParams return values in absolute energy units.

#include "rabi/params.hpp"

namespace rabi::effective {

struct CriticalExponents {
    double z;
    double nu;
    double znu;
};

/// Only the product znu enters the dynamics; z and nu are kept for reporting.
inline constexpr CriticalExponents kExponents{2.0, 0.25, 0.5};
static_assert(kExponents.z * kExponents.nu == kExponents.znu);

Phase classify_phase(double g);

/// epsilon_np = omega0 sqrt(1 - g^2) for g <= 1, epsilon_sp = omega0 sqrt(1 - g^-4) above.
double excitation_energy(const ModelParams& params);

/// e_G = (omega0/Omega) E_G: -1/2 below the critical point, -(g^2 + g^-2)/4 above.
double ground_energy_rescaled(double g);

/// Second derivative of e_G with respect to g. Undefined (DomainError) at g = 1.
double d2_ground_energy(double g);

/// n_c = (omega0/Omega) <a^dag a>: zero in the normal phase, (g^4 - 1)/(4 g^2) above.
double order_parameter(double g);

struct SqueezeDisplacement {
    double r = 0.0;
    /// Displacement alpha_g of the positive branch. When the ratio is
    /// infinite and g > 1 this holds alpha_g * sqrt(omega0/Omega) instead and
    /// `alpha_rescaled` is set.
    double alpha = 0.0;
    bool alpha_rescaled = false;
};

/// Throws DivergentError at g = 1.
SqueezeDisplacement squeeze_and_displacement(const ModelParams& params);

struct Quadratures {
    double dx = 1.0;
    double dp = 1.0;
};

/// Standard deviations of x = a + a^dag and p = i(a^dag - a). Throws DivergentError at g = 1.
Quadratures quadrature_variances(double g);

struct EffectiveObservables {
    Phase phase = Phase::Normal;
    double epsilon = 0.0;     // absolute units
    double r_squeeze = 0.0;   // +inf at g = 1
    double alpha = 0.0;
    bool alpha_rescaled = false;
    double e_G = 0.0;         // absolute units (omega0 * e_G(g))
    double n_c = 0.0;
    double dx = 1.0;          // +inf at g = 1
    double dp = 1.0;          // 0 at g = 1
};

/// Aggregates the closed forms. At g = 1 the divergent entries are reported
/// as +inf / 0 rather than thrown.
EffectiveObservables observables(const ModelParams& params);

struct FiniteFrequencyPredictions {
    double eps_gc = 0.0;   // gap at g = 1, units of omega0
    double dx_gc = 0.0;
    double eG_corr = 0.0;  // correction to e_G at g = 1, units of omega0
    double nc_corr = 0.0;
};

/// Leading finite-frequency behaviour at g = 1 with q = 2 Omega / (3 omega0):
/// eps = q^(-1/3), dx = q^(1/6), e_G correction = q^(-4/3)/4, n_c = q^(-2/3)/6.
FiniteFrequencyPredictions finite_freq_predictions(const Ratio& ratio);

struct VariationalResult {
    double s_opt = 0.0;
    double energy = 0.0;  // units of omega0, with -Omega/2 removed
    double dx = 1.0;
    double n_phot = 0.0;
    int iterations = 0;
};

/// Energy of the squeezed vacuum S[s]|0> under the quartic-corrected normal
/// phase Hamiltonian (without its -Omega/2 constant).
double variational_energy(double s, double g, double ratio);

/// Upper bound on s used by the minimizer: max(5, ln(ratio)/3 + 2).
double variational_s_max(double ratio);

/// Minimizes variational_energy over s in [0, s_max]. Requires 0 <= g <= 1
/// and a finite ratio.
VariationalResult variational_minimize(double g, const Ratio& ratio, double tol = 1e-10);

}  // namespace rabi::effective
