#pragma once

// Power-law exponent extraction and Kibble-Zurek freeze-out analysis.

#include <cstddef>
#include <span>
#include <vector>

namespace rabi::scaling {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Closed window [lo, hi] on the x axis. Membership is decided in log10
/// space with a 1e-9 slack so that grid points generated on the window edges
/// are kept.
struct Window {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const;
};

struct PowerLawFit {
    double mu = 0.0;
    double mu_stderr = 0.0;
    double log_amplitude = 0.0;  // log10 intercept
    double x_lo = 0.0;
    double x_hi = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

/// Ordinary least squares of log10 y against log10 x over the points inside
/// `window`. Throws DomainError for fewer than 3 points or nonpositive data.
PowerLawFit fit_loglog(std::span<const Point> points, const Window& window);

/// Fit over every point.
PowerLawFit fit_loglog(std::span<const Point> points);

struct LocalExponent {
    double x_center = 0.0;
    PowerLawFit fit;
};

/// For every sample x >= min_x, fits over [x / D, x * D] with
/// log10 D = delta_log. Windows holding fewer than 3 points or a nonpositive
/// y are skipped. The default min_x drops the sudden-quench plateau
/// tau_q < 1/omega0.
std::vector<LocalExponent> sliding_window_exponents(std::span<const Point> points,
                                                    double delta_log = 6.25e-2,
                                                    double min_x = 1.0);

struct FreezeOut {
    double tau_q = 0.0;
    double g_hat_numeric = 0.0;
    double g_hat_asymptotic = 0.0;
    bool impulsive_from_start = false;
};

/// g_c - (4 sqrt(2) omega0 tau_q)^(-2/3).
double freeze_out_asymptotic(double tau_q, double omega0 = 1.0);

/// Solves eta^2 = |d eta / dt| for the ramp g = t / tau_q with
/// eta = 2 omega0 sqrt(1 - g^2), i.e. 2 omega0 tau_q (1 - g^2)^(3/2) = g, by
/// log-grid bracketing in 1 - g followed by bisection.
FreezeOut freeze_out(double tau_q, double omega0 = 1.0);

/// Kibble-Zurek prediction -znu / (znu + 1) for E_r ~ tau_q^mu; -1 for infinite znu.
double kzm_predicted_exponent(double znu);

}  // namespace rabi::scaling
