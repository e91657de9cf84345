#include "rabi/scaling.hpp"

#include "rabi/params.hpp"

#include <cmath>
#include <limits>

namespace rabi::scaling {

namespace {

constexpr double kLogSlack = 1e-9;

}  // namespace

bool Window::contains(double x) const {
    if (!(x > 0.0)) return false;
    const double lx = std::log10(x);
    return lx >= std::log10(lo) - kLogSlack && lx <= std::log10(hi) + kLogSlack;
}

PowerLawFit fit_loglog(std::span<const Point> points, const Window& window) {
    if (!(window.lo > 0.0) || !(window.lo < window.hi)) {
        throw DomainError("fit window must satisfy 0 < lo < hi");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& p : points) {
        if (!window.contains(p.x)) continue;
        if (!(p.y > 0.0) || !std::isfinite(p.y)) {
            throw DomainError("log-log fit needs positive data inside the window");
        }
        lx.push_back(std::log10(p.x));
        ly.push_back(std::log10(p.y));
    }
    const std::size_t n = lx.size();
    if (n < 3) {
        throw DomainError("log-log fit needs at least 3 points inside the window");
    }

    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = lx[i] - mx;
        const double dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw DomainError("log-log fit needs distinct x values");
    }

    PowerLawFit fit;
    fit.mu = sxy / sxx;
    fit.log_amplitude = my - fit.mu * mx;
    fit.x_lo = window.lo;
    fit.x_hi = window.hi;
    fit.n_points = n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.log_amplitude + fit.mu * lx[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.mu_stderr = std::sqrt(ss_res / double(n - 2) / sxx);
    return fit;
}

PowerLawFit fit_loglog(std::span<const Point> points) {
    if (points.empty()) {
        throw DomainError("log-log fit needs at least 3 points inside the window");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& p : points) {
        lo = std::min(lo, p.x);
        hi = std::max(hi, p.x);
    }
    return fit_loglog(points, {lo, hi});
}

std::vector<LocalExponent> sliding_window_exponents(std::span<const Point> points, double delta_log,
                                                    double min_x) {
    if (!(delta_log > 0.0)) {
        throw DomainError("sliding window half-width must be positive");
    }
    std::vector<Point> kept;
    for (const auto& p : points) {
        if (p.x >= min_x) kept.push_back(p);
    }
    const double span = std::pow(10.0, delta_log);
    std::vector<LocalExponent> out;
    for (const auto& center : kept) {
        const Window w{center.x / span, center.x * span};
        std::size_t inside = 0;
        bool positive = true;
        for (const auto& p : kept) {
            if (w.contains(p.x)) {
                ++inside;
                positive = positive && p.y > 0.0;
            }
        }
        if (inside < 3 || !positive) continue;
        out.push_back({center.x, fit_loglog(kept, w)});
    }
    return out;
}

double freeze_out_asymptotic(double tau_q, double omega0) {
    return kCriticalCoupling - std::pow(4.0 * std::sqrt(2.0) * omega0 * tau_q, -2.0 / 3.0);
}

FreezeOut freeze_out(double tau_q, double omega0) {
    if (!(tau_q > 0.0) || !std::isfinite(tau_q) || !(omega0 > 0.0)) {
        throw DomainError("freeze-out needs tau_q > 0 and omega0 > 0");
    }
    FreezeOut out;
    out.tau_q = tau_q;
    out.g_hat_asymptotic = freeze_out_asymptotic(tau_q, omega0);

    // Residual in delta = 1 - g; increasing in delta, -1 at delta = 0.
    const auto residual = [&](double delta) {
        const double gap2 = delta * (2.0 - delta);
        return 2.0 * omega0 * tau_q * gap2 * std::sqrt(gap2) - (1.0 - delta);
    };

    double hi = 1.0;
    double lo = -1.0;
    for (int k = 1; k <= 300; ++k) {
        const double d = std::pow(10.0, -k);
        if (residual(d) < 0.0) {
            lo = d;
            break;
        }
        hi = d;
    }
    if (lo < 0.0) {
        out.impulsive_from_start = true;
        out.g_hat_numeric = kCriticalCoupling;
        return out;
    }
    for (int iter = 0; iter < 400 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) lo = mid; else hi = mid;
    }
    out.g_hat_numeric = kCriticalCoupling - 0.5 * (lo + hi);
    return out;
}

double kzm_predicted_exponent(double znu) {
    if (!(znu > 0.0)) {
        throw DomainError("znu must be positive");
    }
    if (std::isinf(znu)) return -1.0;
    return -znu / (znu + 1.0);
}

}  // namespace rabi::scaling
