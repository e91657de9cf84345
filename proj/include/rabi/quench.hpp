#pragma once

// Slow linear quench g(t) = g_f t / tau_q of the normal-phase effective
// Hamiltonian, integrated in the Heisenberg picture through the Bogoliubov
// amplitudes a_H(t) = u(t) a + v*(t) a^dag. Time is dimensionless (omega0 t)
// and energies are in units of omega0.
//
// For a finite ratio the leading quartic correction enters the equations of
// motion as f(u, v) = (3 / 4 ratio) g^4 (u + v) |u + v|^2, added to both.

#include "rabi/params.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rabi::quench {

using Complex = std::complex<double>;

struct QuenchProtocol {
    double g_f = 1.0;
    double tau_q = 1.0;
    Ratio ratio = Ratio::infinite();

    /// Linear ramp, clamped to [0, tau_q].
    double coupling(double t) const;

    /// g_f in (0, 1], tau_q > 0 and finite.
    void validate() const;
};

struct BogoliubovState {
    Complex u{1.0, 0.0};
    Complex v{0.0, 0.0};
    double t = 0.0;

    /// |u|^2 - |v|^2, equal to 1 along any exact trajectory.
    double symplectic_norm() const { return std::norm(u) - std::norm(v); }
};

struct Derivative {
    Complex du;
    Complex dv;
};

/// Right-hand side at instantaneous coupling g.
Derivative rhs(const BogoliubovState& state, double g, const Ratio& ratio);

/// Gaussian-state energy at coupling g:
/// |v|^2 - (g^2/4)|u+v|^2 [+ (3 g^4 / 16 ratio)|u+v|^4 for a finite ratio].
double bogoliubov_energy(const BogoliubovState& state, double g, const Ratio& ratio);

/// Values below this are reported as zero with the underflow flag.
inline constexpr double kResidualFloor = 1e-14;

struct ResidualEnergy {
    double value = 0.0;  // floored
    double raw = 0.0;
    bool underflow = false;
    /// Finite ratio with g_f != g_c: no baseline correction is available, the
    /// infinite-ratio expression was used.
    bool uncorrected_baseline = false;
};

/// E_r = |v|^2 - (g_f^2/4)|u+v|^2 - (eps_np(g_f) - 1)/2, plus for a finite
/// ratio at g_f = 1 the correction (3 / 16 ratio)|u+v|^4 - (3/8) q^(-1/3),
/// q = 2 ratio / 3, which is the Gaussian ground-energy shift at g = 1.
ResidualEnergy residual_energy(const BogoliubovState& state, double g_f, const Ratio& ratio);

struct IntegratorOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    /// Record every n-th accepted step (0 disables sampling).
    std::size_t sample_stride = 0;
    std::size_t max_steps = 200'000'000;
};

struct Sample {
    double t = 0.0;
    Complex u;
    Complex v;
    double energy = 0.0;  // raw residual energy relative to g(t)
};

struct QuenchResult {
    ResidualEnergy E_r;
    BogoliubovState final_state;
    double invariant_drift = 0.0;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::vector<Sample> samples;
};

/// Integrates from u = 1, v = 0 at t = 0 to exactly t = tau_q with an
/// adaptive embedded Runge-Kutta 7(8) scheme. Throws NumericalError on step
/// underflow or step-count exhaustion.
QuenchResult integrate(const QuenchProtocol& protocol, const IntegratorOptions& options = {});

struct FrozenResult {
    BogoliubovState final_state;
    double invariant_drift = 0.0;
    double max_energy_change = 0.0;
    std::size_t steps = 0;
};

/// Evolves `state` for `duration` at constant coupling g.
FrozenResult evolve_frozen(const BogoliubovState& state, double g, const Ratio& ratio,
                           double duration, const IntegratorOptions& options = {});

struct SweepPoint {
    std::size_t index = 0;
    double tau_q = 0.0;
    std::optional<QuenchResult> result;
    std::string error;
};

/// One integration per grid entry, in grid order. The grid must be positive
/// and strictly ascending. Failures are captured per point.
std::vector<SweepPoint> sweep_tauq(double g_f, const Ratio& ratio, std::span<const double> tauq_grid,
                                   const IntegratorOptions& options = {});

/// Runs a single grid point; the building block for parallel sweeps.
SweepPoint run_sweep_point(double g_f, const Ratio& ratio, double tau_q, std::size_t index,
                           const IntegratorOptions& options = {});

}  // namespace rabi::quench
