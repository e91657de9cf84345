#include "rabi/ed.hpp"

#include "rabi/effective.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <functional>

namespace rabi::ed {

FockBasis::FockBasis(int cutoff, bool with_spin) : cutoff_(cutoff), with_spin_(with_spin) {
    if (cutoff < kMinCutoff) {
        throw DomainError("Fock cutoff must be at least 8");
    }
}

std::size_t FockBasis::dim() const {
    const auto n = static_cast<std::size_t>(cutoff_) + 1;
    return with_spin_ ? 2 * n : n;
}

std::size_t FockBasis::index(int m, int spin) const {
    return with_spin_ ? 2 * static_cast<std::size_t>(m) + static_cast<std::size_t>(spin)
                      : static_cast<std::size_t>(m);
}

const char* to_string(ParityBlock block) {
    return block == ParityBlock::Even ? "even" : "odd";
}

std::vector<std::size_t> block_states(const FockBasis& basis, ParityBlock block) {
    const int p = block == ParityBlock::Even ? 0 : 1;
    std::vector<std::size_t> out;
    for (int m = 0; m <= basis.cutoff(); ++m) {
        if (basis.with_spin()) {
            out.push_back(basis.index(m, (m + p) % 2));
        } else if (m % 2 == p) {
            out.push_back(basis.index(m, 0));
        }
    }
    return out;
}

SymmetricBandMatrix build_rabi_matrix(const ModelParams& params, const FockBasis& basis,
                                      std::optional<ParityBlock> block) {
    if (!basis.with_spin()) {
        throw DomainError("Rabi matrix needs a basis with spin");
    }
    const double w0 = params.omega0();
    const double half_omega = 0.5 * params.Omega();
    const double lambda = params.lambda();
    const int n = basis.cutoff();

    if (block) {
        // Block state m carries spin (m + p) mod 2; (m, s) couples to (m + 1, 1 - s),
        // which is the next state of the same block.
        const int p = *block == ParityBlock::Even ? 0 : 1;
        SymmetricBandMatrix h(static_cast<std::size_t>(n) + 1, 1);
        for (int m = 0; m <= n; ++m) {
            const int s = (m + p) % 2;
            const auto i = static_cast<std::size_t>(m);
            h.set(i, i, m * w0 + (s == 1 ? half_omega : -half_omega));
            if (m < n) {
                h.set(i + 1, i, -lambda * std::sqrt(m + 1.0));
            }
        }
        return h;
    }

    SymmetricBandMatrix h(basis.dim(), 3);
    for (int m = 0; m <= n; ++m) {
        for (int s = 0; s < 2; ++s) {
            const auto i = basis.index(m, s);
            h.set(i, i, m * w0 + (s == 1 ? half_omega : -half_omega));
            if (m < n) {
                h.set(basis.index(m + 1, 1 - s), i, -lambda * std::sqrt(m + 1.0));
            }
        }
    }
    return h;
}

SymmetricBandMatrix build_quartic_matrix(double g, const Ratio& ratio, const FockBasis& basis,
                                         std::optional<ParityBlock> block) {
    if (basis.with_spin()) {
        throw DomainError("quartic Hamiltonian acts on the cavity mode only");
    }
    const double r = ratio.value();
    const int n = basis.cutoff();
    const int big = n + 5;  // Fock states 0..n+4

    using Sparse = Eigen::SparseMatrix<double>;
    std::vector<Eigen::Triplet<double>> entries;
    for (int m = 0; m + 1 < big; ++m) {
        const double a = std::sqrt(m + 1.0);
        entries.emplace_back(m, m + 1, a);
        entries.emplace_back(m + 1, m, a);
    }
    Sparse x(big, big);
    x.setFromTriplets(entries.begin(), entries.end());
    const Sparse x2 = x * x;
    const Sparse x4 = x2 * x2;

    const double g2 = g * g;
    const double c2 = -0.25 * g2;
    const double c4 = g2 * g2 / (16.0 * r);
    const double shift = g2 / (4.0 * r);

    const auto element = [&](int i, int j) {
        double v = c2 * x2.coeff(i, j) + c4 * x4.coeff(i, j);
        if (i == j) v += i + shift;
        return v;
    };

    std::vector<int> states;
    if (block) {
        const int p = *block == ParityBlock::Even ? 0 : 1;
        for (int m = p; m <= n; m += 2) states.push_back(m);
    } else {
        for (int m = 0; m <= n; ++m) states.push_back(m);
    }

    // x^4 reaches four photons: two steps within a parity block.
    const std::size_t bw = block ? 2 : 4;
    SymmetricBandMatrix h(states.size(), bw);
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t k = 0; k <= bw && i + k < states.size(); ++k) {
            h.set(i + k, i, element(states[i + k], states[i]));
        }
    }
    return h;
}

StateObservables observables(const FockBasis& basis, std::span<const double> vector) {
    if (vector.size() != basis.dim()) {
        throw DomainError("state vector does not match the basis dimension");
    }
    double norm2 = 0.0;
    for (double c : vector) norm2 += c * c;
    if (std::abs(norm2 - 1.0) > 1e-8) {
        throw DomainError("state vector is not normalized");
    }

    const int spins = basis.with_spin() ? 2 : 1;
    double n_mean = 0.0;
    double a_mean = 0.0;   // <a>, real for real vectors
    double a2_mean = 0.0;  // <a^2>
    double parity = 0.0;
    for (int m = 0; m <= basis.cutoff(); ++m) {
        for (int s = 0; s < spins; ++s) {
            const double c = vector[basis.index(m, s)];
            const double c2 = c * c;
            n_mean += m * c2;
            parity += ((m + s) % 2 == 0) ? c2 : -c2;
            if (m >= 1) a_mean += vector[basis.index(m - 1, s)] * c * std::sqrt(double(m));
            if (m >= 2) a2_mean += vector[basis.index(m - 2, s)] * c * std::sqrt(double(m) * (m - 1));
        }
    }

    StateObservables out;
    out.n_phot = n_mean;
    out.x_mean = 2.0 * a_mean;
    out.parity = parity;
    // <x^2> = <a^2> + <a^dag 2> + 2n + 1, <p^2> = -<a^2> - <a^dag 2> + 2n + 1, <p> = 0.
    const double x2 = 2.0 * a2_mean + 2.0 * n_mean + 1.0;
    const double p2 = -2.0 * a2_mean + 2.0 * n_mean + 1.0;
    out.dx = std::sqrt(std::max(x2 - out.x_mean * out.x_mean, 0.0));
    out.dp = std::sqrt(std::max(p2, 0.0));
    return out;
}

namespace {

struct BlockSpectrum {
    Eigenpairs pairs;
    std::vector<std::size_t> states;
    ParityBlock block;
};

using MatrixBuilder = std::function<SymmetricBandMatrix(const FockBasis&, ParityBlock)>;

EDResult solve_at_cutoff(const MatrixBuilder& build, int cutoff, bool with_spin,
                         std::size_t levels, double omega0, const SolverOptions& solver) {
    const FockBasis basis(cutoff, with_spin);
    std::vector<BlockSpectrum> blocks;
    for (const auto block : {ParityBlock::Even, ParityBlock::Odd}) {
        blocks.push_back({lowest_eigenpairs(build(basis, block), levels, solver),
                          block_states(basis, block), block});
    }

    struct Candidate {
        double energy;
        std::size_t block;
        Eigen::Index column;
    };
    std::vector<Candidate> all;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (Eigen::Index i = 0; i < blocks[b].pairs.values.size(); ++i) {
            all.push_back({blocks[b].pairs.values(i), b, i});
        }
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const Candidate& l, const Candidate& r) { return l.energy < r.energy; });
    all.resize(std::min(all.size(), levels));

    EDResult out;
    out.cutoff_used = cutoff;
    std::vector<double> full(basis.dim());
    for (const auto& c : all) {
        const auto& bs = blocks[c.block];
        std::fill(full.begin(), full.end(), 0.0);
        const auto col = bs.pairs.vectors.col(c.column);
        for (std::size_t i = 0; i < bs.states.size(); ++i) {
            full[bs.states[i]] = col(static_cast<Eigen::Index>(i));
        }
        EDState st;
        st.energy = c.energy;
        st.block = bs.block;
        st.obs = observables(basis, full);
        out.energies.push_back(c.energy);
        out.states.push_back(st);
    }
    for (std::size_t i = 0; i + 1 < out.states.size(); ++i) {
        if (out.energies[i + 1] - out.energies[i] < kDoubletTolerance * omega0) {
            out.states[i].doublet = true;
            out.states[i + 1].doublet = true;
        }
    }
    return out;
}

EDResult converge(const MatrixBuilder& build, bool with_spin, int start, std::size_t levels,
                  double tol, double omega0, const DiagonalizeOptions& options) {
    if (levels == 0) {
        throw DomainError("at least one level must be requested");
    }
    int cutoff = std::clamp(start, FockBasis::kMinCutoff, options.max_cutoff);
    EDResult prev = solve_at_cutoff(build, cutoff, with_spin, levels, omega0, options.solver);
    int doublings = 0;
    while (2 * static_cast<long>(cutoff) <= options.max_cutoff) {
        cutoff *= 2;
        ++doublings;
        EDResult next = solve_at_cutoff(build, cutoff, with_spin, levels, omega0, options.solver);
        double change = 0.0;
        const auto k = std::min(prev.energies.size(), next.energies.size());
        for (std::size_t i = 0; i < k; ++i) {
            change = std::max(change, std::abs(next.energies[i] - prev.energies[i]));
        }
        next.doublings = doublings;
        if (next.energies.size() == levels && change < tol) {
            next.converged = true;
            return next;
        }
        prev = std::move(next);
    }
    prev.converged = false;
    return prev;
}

int heuristic_cutoff(double alpha2, double dx2) {
    const double n = std::ceil(4.0 * (alpha2 + dx2));
    if (!(n < double(1 << 30))) return 1 << 30;
    return std::max(64, static_cast<int>(n));
}

}  // namespace

int initial_cutoff_rabi(const ModelParams& params) {
    const double g = params.g();
    const auto ff = effective::finite_freq_predictions(params.ratio());
    double alpha2 = 0.0;
    double dx = ff.dx_gc;
    if (g != kCriticalCoupling) {
        const auto sd = effective::squeeze_and_displacement(params);
        alpha2 = sd.alpha * sd.alpha;
        // Finite ratio caps the critical divergence near dx_gc.
        dx = std::min(effective::quadrature_variances(g).dx, 2.0 * ff.dx_gc);
    }
    return heuristic_cutoff(alpha2, dx * dx);
}

int initial_cutoff_quartic(double g, const Ratio& ratio) {
    const auto ff = effective::finite_freq_predictions(ratio);
    double dx = ff.dx_gc;
    if (g < kCriticalCoupling) {
        dx = std::min(effective::quadrature_variances(g).dx, 2.0 * ff.dx_gc);
    }
    return heuristic_cutoff(0.0, dx * dx);
}

EDResult diagonalize(const ModelParams& params, std::size_t levels, double tol,
                     const DiagonalizeOptions& options) {
    params.ratio().value();  // rejects the infinite ratio
    const int start = options.initial_cutoff > 0 ? options.initial_cutoff : initial_cutoff_rabi(params);
    const MatrixBuilder build = [&](const FockBasis& basis, ParityBlock block) {
        return build_rabi_matrix(params, basis, block);
    };
    return converge(build, true, start, levels, tol, params.omega0(), options);
}

EDResult diagonalize_quartic(double g, const Ratio& ratio, std::size_t levels, double tol,
                             const DiagonalizeOptions& options) {
    if (!(g >= 0.0) || g > 1.05) {
        throw DomainError("quartic Hamiltonian is used for 0 <= g <= 1.05");
    }
    ratio.value();
    const int start = options.initial_cutoff > 0 ? options.initial_cutoff : initial_cutoff_quartic(g, ratio);
    const MatrixBuilder build = [&](const FockBasis& basis, ParityBlock block) {
        return build_quartic_matrix(g, ratio, basis, block);
    };
    return converge(build, false, start, levels, tol, 1.0, options);
}

}  // namespace rabi::ed
