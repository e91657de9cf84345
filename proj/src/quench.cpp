#include "rabi/quench.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rabi::quench {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<Complex, 2>;
using Stepper = odeint::runge_kutta_fehlberg78<State, double, State, double>;

constexpr Complex kI{0.0, 1.0};

void check_options(const IntegratorOptions& options) {
    if (!(options.rel_tol >= 1e-13 && options.rel_tol <= 1e-6)) {
        throw DomainError("rel_tol must lie in [1e-13, 1e-6]");
    }
    if (!(options.abs_tol > 0.0)) {
        throw DomainError("abs_tol must be positive");
    }
}

double quartic_coefficient(const Ratio& ratio) {
    return ratio.is_finite() ? 0.75 / ratio.value() : 0.0;
}

// Shared adaptive loop. `coupling(t)` gives g; `on_step` sees each accepted state.
template <class Coupling, class OnStep>
std::size_t drive(State& x, double t_end, const Ratio& ratio, const IntegratorOptions& options,
                  Coupling&& coupling, OnStep&& on_step, std::size_t& rejected) {
    const auto system = [&](const State& s, State& ds, double t) {
        const auto d = rhs({s[0], s[1], t}, coupling(t), ratio);
        ds[0] = d.du;
        ds[1] = d.dv;
    };

    auto stepper = odeint::make_controlled<Stepper>(options.abs_tol, options.rel_tol);
    const double min_dt = 1e-13 * std::max(1.0, t_end);
    double t = 0.0;
    double dt = std::min(0.01, t_end);
    std::size_t steps = 0;
    rejected = 0;

    while (t < t_end) {
        const double remaining = t_end - t;
        const bool last = dt >= remaining;
        if (last) dt = remaining;
        // On success try_step advances t and proposes the next dt.
        const auto outcome = stepper.try_step(system, x, t, dt);
        if (outcome == odeint::success) {
            if (last) t = t_end;
            ++steps;
            on_step(x, t, steps);
            if (steps >= options.max_steps) {
                throw NumericalError("quench integration exceeded the step budget");
            }
        } else {
            ++rejected;
            if (dt < min_dt) {
                throw NumericalError("quench integration step size underflow at t = " + std::to_string(t));
            }
        }
    }
    return steps;
}

}  // namespace

double QuenchProtocol::coupling(double t) const {
    const double s = std::clamp(t / tau_q, 0.0, 1.0);
    return g_f * s;
}

void QuenchProtocol::validate() const {
    if (!(g_f > 0.0 && g_f <= kCriticalCoupling)) {
        throw DomainError("final coupling must lie in (0, 1]");
    }
    if (!(tau_q > 0.0) || !std::isfinite(tau_q)) {
        throw DomainError("quench time must be positive and finite");
    }
}

Derivative rhs(const BogoliubovState& state, double g, const Ratio& ratio) {
    const double g2 = g * g;
    const double diag = 1.0 - 0.5 * g2;
    const double off = 0.5 * g2;
    Complex f{0.0, 0.0};
    if (ratio.is_finite()) {
        const Complex w = state.u + state.v;
        f = quartic_coefficient(ratio) * g2 * g2 * w * std::norm(w);
    }
    return {-kI * (diag * state.u - off * state.v + f), kI * (diag * state.v - off * state.u + f)};
}

double bogoliubov_energy(const BogoliubovState& state, double g, const Ratio& ratio) {
    const double w2 = std::norm(state.u + state.v);
    const double g2 = g * g;
    double e = std::norm(state.v) - 0.25 * g2 * w2;
    if (ratio.is_finite()) {
        e += 3.0 * g2 * g2 / (16.0 * ratio.value()) * w2 * w2;
    }
    return e;
}

ResidualEnergy residual_energy(const BogoliubovState& state, double g_f, const Ratio& ratio) {
    if (!(g_f >= 0.0 && g_f <= kCriticalCoupling)) {
        throw DomainError("residual energy is defined for 0 <= g_f <= 1");
    }
    // Quadratic part written with w = u + v, z = u - v and Re(w z*) = 1 imposed,
    // i.e. (eps^2 |w|^2 + |z|^2)/4 - eps/2 as a sum of squares.
    const Complex w = state.u + state.v;
    const Complex z = state.u - state.v;
    const double aw = std::abs(w);
    const double az = std::abs(z);
    const double w2 = aw * aw;
    const double eps = std::sqrt((1.0 - g_f) * (1.0 + g_f));
    ResidualEnergy out;
    double e = 0.25 * az * az;
    if (eps > 0.0) {
        const double se = std::sqrt(eps);
        const double d = se * aw - az / se;
        const double im = (w * std::conj(z)).imag();
        e = 0.25 * eps * (d * d + 2.0 * im * im / (aw * az + 1.0));
    }
    if (ratio.is_finite()) {
        if (g_f == kCriticalCoupling) {
            const double r = ratio.value();
            e += 3.0 / (16.0 * r) * w2 * w2 - 0.375 * std::pow(2.0 * r / 3.0, -1.0 / 3.0);
        } else {
            out.uncorrected_baseline = true;
        }
    }
    out.raw = e;
    if (e < kResidualFloor) {
        out.value = 0.0;
        out.underflow = true;
    } else {
        out.value = e;
    }
    return out;
}

QuenchResult integrate(const QuenchProtocol& protocol, const IntegratorOptions& options) {
    protocol.validate();
    check_options(options);

    QuenchResult out;
    State x{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    const auto sample = [&](const State& s, double t) {
        const BogoliubovState b{s[0], s[1], t};
        out.samples.push_back({t, s[0], s[1], residual_energy(b, protocol.coupling(t), protocol.ratio).raw});
    };
    if (options.sample_stride > 0) sample(x, 0.0);

    double drift = 0.0;
    bool last_sampled = true;
    out.steps = drive(
        x, protocol.tau_q, protocol.ratio, options,
        [&](double t) { return protocol.coupling(t); },
        [&](const State& s, double t, std::size_t step) {
            drift = std::max(drift, std::abs(std::norm(s[0]) - std::norm(s[1]) - 1.0));
            last_sampled = false;
            if (options.sample_stride > 0 && step % options.sample_stride == 0) {
                sample(s, t);
                last_sampled = true;
            }
        },
        out.rejected);
    if (options.sample_stride > 0 && !last_sampled) sample(x, protocol.tau_q);

    out.final_state = {x[0], x[1], protocol.tau_q};
    out.invariant_drift = drift;
    out.E_r = residual_energy(out.final_state, protocol.g_f, protocol.ratio);
    return out;
}

FrozenResult evolve_frozen(const BogoliubovState& state, double g, const Ratio& ratio,
                           double duration, const IntegratorOptions& options) {
    check_options(options);
    if (!(duration > 0.0)) {
        throw DomainError("duration must be positive");
    }
    FrozenResult out;
    State x{state.u, state.v};
    const double norm0 = state.symplectic_norm();
    const double e0 = bogoliubov_energy(state, g, ratio);
    std::size_t rejected = 0;
    out.steps = drive(
        x, duration, ratio, options, [g](double) { return g; },
        [&](const State& s, double, std::size_t) {
            const BogoliubovState b{s[0], s[1], 0.0};
            out.invariant_drift = std::max(out.invariant_drift, std::abs(b.symplectic_norm() - norm0));
            out.max_energy_change = std::max(out.max_energy_change, std::abs(bogoliubov_energy(b, g, ratio) - e0));
        },
        rejected);
    out.final_state = {x[0], x[1], state.t + duration};
    return out;
}

SweepPoint run_sweep_point(double g_f, const Ratio& ratio, double tau_q, std::size_t index,
                           const IntegratorOptions& options) {
    SweepPoint p;
    p.index = index;
    p.tau_q = tau_q;
    try {
        p.result = integrate({g_f, tau_q, ratio}, options);
    } catch (const std::exception& e) {
        p.error = e.what();
    }
    return p;
}

std::vector<SweepPoint> sweep_tauq(double g_f, const Ratio& ratio, std::span<const double> tauq_grid,
                                   const IntegratorOptions& options) {
    for (std::size_t i = 0; i < tauq_grid.size(); ++i) {
        if (!(tauq_grid[i] > 0.0) || (i > 0 && !(tauq_grid[i] > tauq_grid[i - 1]))) {
            throw DomainError("quench-time grid must be positive and strictly ascending");
        }
    }
    std::vector<SweepPoint> out;
    out.reserve(tauq_grid.size());
    for (std::size_t i = 0; i < tauq_grid.size(); ++i) {
        out.push_back(run_sweep_point(g_f, ratio, tauq_grid[i], i, options));
    }
    return out;
}

}  // namespace rabi::quench
