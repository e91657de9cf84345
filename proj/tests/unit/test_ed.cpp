#include <doctest.h>

#include "rabi/ed.hpp"
#include "rabi/effective.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace rabi;
using namespace rabi::ed;

namespace {

std::vector<double> all_values(const SymmetricBandMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.to_dense(), Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

// Ground state of -d^2/dy^2 + y^4/(16 r) on a uniform grid (Dirichlet walls)
// by shifted inverse iteration; the shift sits below the Gaussian estimate
// (3/8) q^{-1/3}. Returns {energy, <y^2>}.
std::pair<double, double> quartic_grid(double r, int n, double half_width) {
    const double h = 2.0 * half_width / (n + 1);
    const double o = -1.0 / (h * h);
    std::vector<double> diag(n), y(n);
    for (int i = 0; i < n; ++i) {
        y[i] = -half_width + h * (i + 1);
        diag[i] = 2.0 / (h * h) + std::pow(y[i], 4) / (16.0 * r);
    }
    const double shift = 0.8 * 0.375 * std::pow(2.0 * r / 3.0, -1.0 / 3.0);

    std::vector<double> psi(n, 1.0), c(n), d(n);
    for (int it = 0; it < 40; ++it) {
        // Thomas algorithm for (T - shift) x = psi
        c[0] = o / (diag[0] - shift);
        d[0] = psi[0] / (diag[0] - shift);
        for (int i = 1; i < n; ++i) {
            const double m = diag[i] - shift - o * c[i - 1];
            c[i] = o / m;
            d[i] = (psi[i] - o * d[i - 1]) / m;
        }
        for (int i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
        double norm = 0.0;
        for (double v : d) norm += v * v;
        norm = std::sqrt(norm);
        for (int i = 0; i < n; ++i) psi[i] = d[i] / norm;
    }
    double e = 0.0;
    double y2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double hp = diag[i] * psi[i];
        if (i > 0) hp += o * psi[i - 1];
        if (i + 1 < n) hp += o * psi[i + 1];
        e += psi[i] * hp;
        y2 += psi[i] * psi[i] * y[i] * y[i];
    }
    return {e, y2};
}

std::pair<double, double> quartic_grid_oracle(double r) {
    const double width = 7.0 * std::pow(16.0 * r, 1.0 / 6.0);
    const auto a = quartic_grid(r, 3999, width);
    const auto b = quartic_grid(r, 7999, width);
    return {(4.0 * b.first - a.first) / 3.0, (4.0 * b.second - a.second) / 3.0};
}

}  // namespace

TEST_CASE("basis indexing") {
    FockBasis b(10, true);
    CHECK(b.dim() == 22);
    CHECK(b.index(3, 1) == 7);
    FockBasis c(10, false);
    CHECK(c.dim() == 11);
    CHECK_THROWS_AS(FockBasis(7, true), DomainError);
    CHECK(block_states(b, ParityBlock::Even).size() + block_states(b, ParityBlock::Odd).size() == b.dim());
}

TEST_CASE("matrix elements") {
    const auto p = from_lambda(1.0, 10.0, 0.3);
    FockBasis b(12, true);
    const auto m = build_rabi_matrix(p, b);
    CHECK(m(b.index(3, 0), b.index(3, 0)) == doctest::Approx(3.0 - 5.0));
    CHECK(m(b.index(3, 1), b.index(3, 1)) == doctest::Approx(3.0 + 5.0));
    CHECK(m(b.index(4, 1), b.index(3, 0)) == doctest::Approx(-0.3 * 2.0));
    CHECK(m(b.index(4, 0), b.index(3, 0)) == 0.0);
    CHECK(m.bandwidth() <= 3);
    CHECK_THROWS(build_rabi_matrix(ModelParams(1.0, Ratio::infinite(), 0.5), b));
}

TEST_CASE("parity blocks reproduce the full spectrum") {
    for (double g : {0.5, 1.0, 1.8}) {
        const ModelParams p(1.0, Ratio::finite(20.0), g);
        FockBasis b(60, true);
        const auto full = all_values(build_rabi_matrix(p, b));
        auto blocks = all_values(build_rabi_matrix(p, b, ParityBlock::Even));
        const auto odd = all_values(build_rabi_matrix(p, b, ParityBlock::Odd));
        blocks.insert(blocks.end(), odd.begin(), odd.end());
        std::sort(blocks.begin(), blocks.end());
        REQUIRE(blocks.size() == full.size());
        for (std::size_t i = 0; i < full.size(); ++i) {
            CHECK(std::abs(blocks[i] - full[i]) < 1e-10 * std::max(1.0, std::abs(full[i])));
        }
    }
}

TEST_CASE("selective and dense eigensolvers agree") {
    SolverOptions lapack;
    lapack.dense_limit = 0;
    const ModelParams p(1.0, Ratio::finite(50.0), 1.2);
    const FockBasis spin(200, true);
    const auto full = build_rabi_matrix(p, spin);
    const auto block = build_rabi_matrix(p, spin, ParityBlock::Odd);
    const auto quartic = build_quartic_matrix(0.9, Ratio::finite(100.0), FockBasis(200, false), ParityBlock::Even);
    for (const auto* m : {&full, &block, &quartic}) {
        const auto dense = lowest_eigenpairs(*m, 4);
        const auto sel = lowest_eigenpairs(*m, 4, lapack);
        for (int i = 0; i < 4; ++i) {
            CHECK(sel.values(i) == doctest::Approx(dense.values(i)).epsilon(1e-12));
            if (i + 1 < 4 && dense.values(i + 1) - dense.values(i) < 1e-8) continue;  // doublet: basis not unique
            CHECK(std::abs(std::abs(sel.vectors.col(i).dot(dense.vectors.col(i))) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("vanishing atomic frequency is a displaced oscillator") {
    // Omega -> 0: H = a^dag a - lambda (a + a^dag) sigma_x, ground energy -lambda^2, doubly degenerate.
    const auto p = from_lambda(1.0, 1e-12, 1.5);
    const auto r = diagonalize(p, 2);
    REQUIRE(r.converged);
    CHECK(r.energies[0] == doctest::Approx(-2.25).epsilon(1e-9));
    CHECK(r.energies[1] == doctest::Approx(-2.25).epsilon(1e-9));
    CHECK(r.states[0].obs.n_phot == doctest::Approx(2.25).epsilon(1e-8));
}

TEST_CASE("weak coupling matches second-order perturbation theory") {
    const double Omega = 5.0;
    const double lambda = 1e-3;
    const auto p = from_lambda(1.0, Omega, lambda);
    const auto r = diagonalize(p, 1);
    CHECK(r.energies[0] == doctest::Approx(-Omega / 2 - lambda * lambda / (1.0 + Omega)).epsilon(1e-12));
    CHECK(r.states[0].block == ParityBlock::Even);
}

TEST_CASE("state observables") {
    FockBasis b(10, false);
    std::vector<double> vac(b.dim(), 0.0);
    vac[0] = 1.0;
    auto o = observables(b, vac);
    CHECK(o.n_phot == 0.0);
    CHECK(o.dx == doctest::Approx(1.0));
    CHECK(o.dp == doctest::Approx(1.0));
    // (|0> + |1>)/sqrt2: <x> = 1
    std::vector<double> mix(b.dim(), 0.0);
    mix[0] = mix[1] = std::sqrt(0.5);
    o = observables(b, mix);
    CHECK(o.x_mean == doctest::Approx(1.0));
    vac[0] = 2.0;
    CHECK_THROWS(observables(b, vac));
}

TEST_CASE("normal phase approaches the effective model") {
    const double g = 0.5;
    const auto r = diagonalize(ModelParams(1.0, Ratio::finite(1e4), g), 2);
    REQUIRE(r.converged);
    CHECK(r.energies[1] - r.energies[0] == doctest::Approx(std::sqrt(1 - g * g)).epsilon(1e-3));
    CHECK(r.states[0].obs.dx == doctest::Approx(effective::quadrature_variances(g).dx).epsilon(1e-3));
}

TEST_CASE("superradiant ground state is a parity doublet") {
    const auto r = diagonalize(ModelParams(1.0, Ratio::finite(400.0), 2.0), 2);
    REQUIRE(r.converged);
    CHECK(r.states[0].doublet);
    CHECK(r.states[1].doublet);
    CHECK(r.states[0].block != r.states[1].block);
    CHECK(r.states[0].obs.n_phot / 400.0 == doctest::Approx(effective::order_parameter(2.0)).epsilon(0.02));
}

TEST_CASE("cutoff cap is reported") {
    DiagonalizeOptions o;
    o.initial_cutoff = 8;
    o.max_cutoff = 16;
    const auto r = diagonalize(ModelParams(1.0, Ratio::finite(1e4), 1.0), 1, 1e-12, o);
    CHECK_FALSE(r.converged);
    CHECK(r.cutoff_used == 16);
}

TEST_CASE("quartic ED agrees with a position-grid oracle") {
    // At g = 1: H = p^2/4 + x^4/(16 r) - 1/2 + 1/(4 r) with [x, p] = 2i.
    for (double r : {1e2, 1e3}) {
        const auto ed = diagonalize_quartic(1.0, Ratio::finite(r), 1);
        REQUIRE(ed.converged);
        const auto [e, x2] = quartic_grid_oracle(r);
        CHECK(ed.energies[0] == doctest::Approx(e - 0.5 + 0.25 / r).epsilon(1e-7));
        CHECK(ed.states[0].obs.dx == doctest::Approx(std::sqrt(x2)).epsilon(1e-7));
    }
}

TEST_CASE("quartic ED versus Gaussian ansatz at g = 1") {
    // The g = 1 problem is a pure quartic oscillator; Gaussian/exact ratios are
    // ratio-independent constants.
    for (double r : {1e2, 1e3, 1e4}) {
        const auto ed = diagonalize_quartic(1.0, Ratio::finite(r), 2);
        const auto var = effective::variational_minimize(1.0, Ratio::finite(r));
        const auto ff = effective::finite_freq_predictions(Ratio::finite(r));
        CHECK(var.energy > ed.energies[0]);
        CHECK(var.dx / ed.states[0].obs.dx == doctest::Approx(0.97858).epsilon(2e-5));
        const double gap = ed.energies[1] - ed.energies[0];
        CHECK(gap / ff.eps_gc - 1.0 == doctest::Approx(-0.0503).epsilon(2e-3));
    }
}

TEST_CASE("quartic ED rejects couplings beyond its range") {
    CHECK_THROWS_AS(diagonalize_quartic(1.2, Ratio::finite(100.0), 1), DomainError);
    CHECK_THROWS(diagonalize_quartic(1.0, Ratio::infinite(), 1));
}

TEST_CASE("parity and uncertainty of converged states") {
    for (double g : {0.5, 1.0, 1.5}) {
        const auto r = diagonalize(ModelParams(1.0, Ratio::finite(200.0), g), 4);
        REQUIRE(r.converged);
        for (const auto& s : r.states) {
            CHECK(std::abs(std::abs(s.obs.parity) - 1.0) < 1e-8);
            CHECK(s.obs.dx * s.obs.dp >= 1.0 - 1e-12);
        }
    }
}

TEST_CASE("ground energy decreases with the cutoff") {
    const ModelParams p(1.0, Ratio::finite(100.0), 1.3);
    double prev = INFINITY;
    for (int n : {16, 32, 64, 128, 256}) {
        const auto e = lowest_eigenpairs(build_rabi_matrix(p, FockBasis(n, true), ParityBlock::Even), 1).values(0);
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
}

TEST_CASE("rescaled ED ground energy approaches the infinite-ratio value") {
    for (double g : {0.5, 1.5}) {
        double prev = INFINITY;
        for (double r : {1e2, 1e3}) {
            const auto res = diagonalize(ModelParams(1.0, Ratio::finite(r), g), 1);
            const double err = std::abs(res.energies[0] / r - effective::ground_energy_rescaled(g));
            CHECK(err < prev);
            prev = err;
        }
    }
}
