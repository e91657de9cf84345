#include "rabi/effective.hpp"

#include "rabi/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rabi::effective {

namespace {

void require_nonnegative(double g) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw DomainError("coupling g must be finite and non-negative");
    }
}

// 1 - g^2, accurate near g = 1.
double one_minus_g2(double g) { return (1.0 - g) * (1.0 + g); }

// 1 - g^-4, accurate near g = 1.
double one_minus_inv_g4(double g) {
    const double g2 = g * g;
    return (g - 1.0) * (g + 1.0) * (g2 + 1.0) / (g2 * g2);
}

double q_of(double ratio) { return 2.0 * ratio / 3.0; }

}  // namespace

Phase classify_phase(double g) {
    require_nonnegative(g);
    if (g < kCriticalCoupling) return Phase::Normal;
    if (g > kCriticalCoupling) return Phase::Superradiant;
    return Phase::Critical;
}

double excitation_energy(const ModelParams& params) {
    const double g = params.g();
    const double x = (g <= kCriticalCoupling) ? one_minus_g2(g) : one_minus_inv_g4(g);
    return params.omega0() * std::sqrt(std::max(x, 0.0));
}

double ground_energy_rescaled(double g) {
    require_nonnegative(g);
    if (g <= kCriticalCoupling) {
        return -0.5;
    }
    return -(g * g + 1.0 / (g * g)) / 4.0;
}

double d2_ground_energy(double g) {
    require_nonnegative(g);
    if (g == kCriticalCoupling) {
        throw DomainError("d2 e_G / dg2 is discontinuous at the critical point");
    }
    if (g < kCriticalCoupling) {
        return 0.0;
    }
    const double g2 = g * g;
    return -(2.0 + 6.0 / (g2 * g2)) / 4.0;
}

double order_parameter(double g) {
    require_nonnegative(g);
    if (g <= kCriticalCoupling) {
        return 0.0;
    }
    const double g2 = g * g;
    return (g2 * g2 - 1.0) / (4.0 * g2);
}

SqueezeDisplacement squeeze_and_displacement(const ModelParams& params) {
    const double g = params.g();
    if (g == kCriticalCoupling) {
        throw DivergentError("squeezing diverges at the critical point");
    }
    SqueezeDisplacement out;
    if (g < kCriticalCoupling) {
        out.r = -0.25 * std::log(one_minus_g2(g));
        return out;
    }
    out.r = -0.25 * std::log(one_minus_inv_g4(g));
    const double g2 = g * g;
    const double rescaled = std::sqrt((g2 * g2 - 1.0) / (4.0 * g2));
    if (params.ratio().is_infinite()) {
        out.alpha = rescaled;
        out.alpha_rescaled = true;
    } else {
        out.alpha = rescaled * std::sqrt(params.ratio().value());
    }
    return out;
}

Quadratures quadrature_variances(double g) {
    require_nonnegative(g);
    if (g == kCriticalCoupling) {
        throw DivergentError("position quadrature diverges at the critical point");
    }
    const double x = (g < kCriticalCoupling) ? one_minus_g2(g) : one_minus_inv_g4(g);
    const double dp = std::pow(x, 0.25);
    return {1.0 / dp, dp};
}

EffectiveObservables observables(const ModelParams& params) {
    const double g = params.g();
    EffectiveObservables out;
    out.phase = classify_phase(g);
    out.epsilon = excitation_energy(params);
    out.e_G = params.omega0() * ground_energy_rescaled(g);
    out.n_c = order_parameter(g);
    if (out.phase == Phase::Critical) {
        out.r_squeeze = std::numeric_limits<double>::infinity();
        out.dx = std::numeric_limits<double>::infinity();
        out.dp = 0.0;
        return out;
    }
    const auto sd = squeeze_and_displacement(params);
    out.r_squeeze = sd.r;
    out.alpha = sd.alpha;
    out.alpha_rescaled = sd.alpha_rescaled;
    const auto q = quadrature_variances(g);
    out.dx = q.dx;
    out.dp = q.dp;
    return out;
}

FiniteFrequencyPredictions finite_freq_predictions(const Ratio& ratio) {
    const double q = q_of(ratio.value());
    FiniteFrequencyPredictions out;
    out.eps_gc = std::pow(q, -1.0 / 3.0);
    out.dx_gc = std::pow(q, 1.0 / 6.0);
    out.eG_corr = 0.25 * std::pow(q, -4.0 / 3.0);
    out.nc_corr = std::pow(q, -2.0 / 3.0) / 6.0;
    return out;
}

double variational_energy(double s, double g, double ratio) {
    // <a^dag a> = sinh^2 s, <x^2> = e^{2s}, <x^4> = 3 e^{4s} for the squeezed vacuum.
    const double sh = std::sinh(s);
    const double g2 = g * g;
    return sh * sh - 0.25 * g2 * std::exp(2.0 * s)
         + 3.0 * g2 * g2 / (16.0 * ratio) * std::exp(4.0 * s)
         + g2 / (4.0 * ratio);
}

double variational_s_max(double ratio) {
    return std::max(5.0, std::log(ratio) / 3.0 + 2.0);
}

VariationalResult variational_minimize(double g, const Ratio& ratio, double tol) {
    require_nonnegative(g);
    if (g > kCriticalCoupling) {
        throw DomainError("variational treatment is limited to 0 <= g <= 1");
    }
    const double r = ratio.value();
    const double s_max = variational_s_max(r);
    const auto f = [&](double s) { return variational_energy(s, g, r); };

    const auto m = brent_minimize(f, 0.0, s_max, tol);
    if (!m.converged || s_max - m.x <= 2.0 * tol || !(m.fx < f(s_max))) {
        throw NumericalError("variational minimum not bracketed in [0, s_max]");
    }

    VariationalResult out;
    out.s_opt = m.x;
    out.energy = m.fx;
    out.dx = std::exp(m.x);
    const double sh = std::sinh(m.x);
    out.n_phot = sh * sh;
    out.iterations = m.iterations;
    return out;
}

}  // namespace rabi::effective
