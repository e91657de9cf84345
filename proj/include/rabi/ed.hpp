#pragma once

// Exact diagonalization of the Rabi Hamiltonian
//
//   H = omega0 a^dag a + (Omega/2) sigma_z - lambda (a + a^dag) sigma_x
//
// and of the single-mode quartic-corrected normal-phase Hamiltonian in a
// truncated Fock basis. Both conserve a Z2 parity, so every solve is done per
// parity block; the Rabi blocks are tridiagonal and the quartic blocks
// pentadiagonal when ordered by photon number.
//
// Basis ordering with spin: index = 2 m + s, m ascending, s = 0 (down) then 1 (up).
// Without spin: index = m.

#include "rabi/banded.hpp"
#include "rabi/params.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rabi::ed {

class FockBasis {
public:
    static constexpr int kMinCutoff = 8;

    /// Basis |0>..|cutoff>, optionally tensored with the two spin states.
    FockBasis(int cutoff, bool with_spin);

    int cutoff() const { return cutoff_; }
    bool with_spin() const { return with_spin_; }
    std::size_t dim() const;
    std::size_t index(int m, int spin) const;

private:
    int cutoff_;
    bool with_spin_;
};

/// Parity (-1)^(m + s) with s = 0 for down, 1 for up; without spin (-1)^m.
enum class ParityBlock { Even, Odd };

const char* to_string(ParityBlock block);

/// Full-basis indices of the states in `block`, in block order (m ascending).
std::vector<std::size_t> block_states(const FockBasis& basis, ParityBlock block);

/// Rabi Hamiltonian in absolute energy units. With a block selected the
/// matrix is expressed in that block's ordering (tridiagonal); otherwise in
/// the full basis (bandwidth 3). Requires a spinful basis and finite ratio.
SymmetricBandMatrix build_rabi_matrix(const ModelParams& params, const FockBasis& basis,
                                      std::optional<ParityBlock> block = std::nullopt);

/// Quartic-corrected normal-phase Hamiltonian, units of omega0, with its
/// -Omega/2 constant omitted:
///   a^dag a - (g^2/4) x^2 + (g^4 / 16 ratio) x^4 + g^2 / (4 ratio).
/// x^2 and x^4 are formed from the tridiagonal x at cutoff + 4 and then
/// truncated. Requires a spinless basis.
SymmetricBandMatrix build_quartic_matrix(double g, const Ratio& ratio, const FockBasis& basis,
                                         std::optional<ParityBlock> block = std::nullopt);

struct StateObservables {
    double n_phot = 0.0;
    double x_mean = 0.0;
    double dx = 0.0;
    double dp = 0.0;
    double parity = 0.0;
};

/// Expectation values for a normalized real full-basis vector. Throws
/// DomainError if the norm deviates from 1 by more than 1e-8.
StateObservables observables(const FockBasis& basis, std::span<const double> vector);

struct EDState {
    double energy = 0.0;
    ParityBlock block = ParityBlock::Even;
    StateObservables obs;
    /// Energy within kDoubletTolerance of a neighbouring level.
    bool doublet = false;
};

struct EDResult {
    std::vector<double> energies;  // ascending
    std::vector<EDState> states;   // parallel to energies
    int cutoff_used = 0;
    bool converged = false;
    int doublings = 0;
};

inline constexpr double kDoubletTolerance = 1e-10;  // units of omega0

struct DiagonalizeOptions {
    /// Starting cutoff; 0 selects the effective-model heuristic.
    int initial_cutoff = 0;
    int max_cutoff = 1 << 16;
    SolverOptions solver;
};

/// Starting cutoff max(64, ceil(4 (alpha^2 + dx^2))) from effective-model estimates.
int initial_cutoff_rabi(const ModelParams& params);
int initial_cutoff_quartic(double g, const Ratio& ratio);

/// Lowest `levels` states of the Rabi Hamiltonian. The cutoff doubles until
/// the lowest levels move by less than `tol` (absolute energy units); if the
/// cap is reached the last result is returned with converged = false.
EDResult diagonalize(const ModelParams& params, std::size_t levels, double tol = 1e-9,
                     const DiagonalizeOptions& options = {});

/// Same protocol for the quartic Hamiltonian. Requires 0 <= g <= 1.05.
EDResult diagonalize_quartic(double g, const Ratio& ratio, std::size_t levels, double tol = 1e-10,
                             const DiagonalizeOptions& options = {});

}  // namespace rabi::ed
