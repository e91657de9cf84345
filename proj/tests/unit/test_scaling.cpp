#include <doctest.h>

#include "rabi/params.hpp"
#include "rabi/scaling.hpp"

#include <cmath>
#include <vector>

using namespace rabi;
using namespace rabi::scaling;

namespace {

std::vector<Point> power_law(double amp, double mu, double lo, double hi, int n) {
    std::vector<Point> out;
    for (int i = 0; i < n; ++i) {
        const double x = lo * std::pow(hi / lo, double(i) / (n - 1));
        out.push_back({x, amp * std::pow(x, mu)});
    }
    return out;
}

}  // namespace

TEST_CASE("exact power laws are recovered") {
    for (double mu : {-2.0, -1.0 / 3.0, 0.5, 1.7}) {
        for (double amp : {1e-6, 1.0, 3e4}) {
            const auto pts = power_law(amp, mu, 0.1, 1e5, 40);
            const auto f = fit_loglog(pts, {1.0, 1e4});
            CHECK(std::abs(f.mu - mu) < 1e-10);
            CHECK(f.log_amplitude == doctest::Approx(std::log10(amp)).epsilon(1e-10));
            CHECK(f.r_squared == doctest::Approx(1.0));
            CHECK(f.mu_stderr < 1e-10);
            const auto g = fit_loglog(pts);
            CHECK(std::abs(g.mu - mu) < 1e-10);
            CHECK(g.n_points == 40);
        }
    }
}

TEST_CASE("window bounds") {
    const auto pts = power_law(1.0, -1.0, 1.0, 1e4, 5);  // 1, 10, ..., 1e4
    const auto f = fit_loglog(pts, {10.0, 1e3});
    CHECK(f.n_points == 3);
    CHECK(f.x_lo == 10.0);
    CHECK(f.x_hi == 1e3);
    CHECK_THROWS_AS(fit_loglog(pts, {10.0, 100.0}), DomainError);
    CHECK_THROWS_AS(fit_loglog(pts, {100.0, 10.0}), DomainError);
    std::vector<Point> neg = pts;
    neg[2].y = 0.0;
    CHECK_THROWS_AS(fit_loglog(neg), DomainError);
}

TEST_CASE("OLS against a hand computation") {
    // log10 points (0,0), (1,1), (2,3): slope 1.5, intercept -1/6
    const std::vector<Point> pts{{1.0, 1.0}, {10.0, 10.0}, {100.0, 1000.0}};
    const auto f = fit_loglog(pts);
    CHECK(f.mu == doctest::Approx(1.5));
    CHECK(f.log_amplitude == doctest::Approx(-1.0 / 6.0));
    CHECK(f.r_squared == doctest::Approx(1.0 - (1.0 / 36.0 * 6.0) / (14.0 / 3.0)));
}

TEST_CASE("sliding windows on a pure power law") {
    const auto pts = power_law(2.0, -1.0 / 3.0, 0.01, 1e4, 97);
    const auto local = sliding_window_exponents(pts, 6.25e-2);
    REQUIRE_FALSE(local.empty());
    double weighted = 0.0;
    std::size_t total = 0;
    for (const auto& le : local) {
        CHECK(le.x_center >= 1.0);
        CHECK(std::abs(le.fit.mu + 1.0 / 3.0) < 1e-10);
        weighted += le.fit.mu * double(le.fit.n_points);
        total += le.fit.n_points;
    }
    CHECK(std::abs(weighted / double(total) - fit_loglog(pts).mu) < 0.05);
    CHECK(sliding_window_exponents(pts, 6.25e-2, 0.0).size() > local.size());
    CHECK_THROWS(sliding_window_exponents(pts, 0.0));
}

TEST_CASE("sliding windows detect a crossover") {
    std::vector<Point> pts;
    for (int i = 0; i <= 64; ++i) {
        const double x = std::pow(10.0, i / 16.0);
        pts.push_back({x, std::pow(x, -1.0 / 3.0) / (1.0 + std::pow(x / 100.0, 5.0 / 3.0))});
    }
    const auto local = sliding_window_exponents(pts);
    CHECK(local.front().fit.mu == doctest::Approx(-1.0 / 3.0).epsilon(0.01));
    CHECK(local.back().fit.mu == doctest::Approx(-2.0).epsilon(0.01));
}

TEST_CASE("freeze-out coupling") {
    for (double tau : {1e2, 1e3, 1e4, 1e5}) {
        const auto f = freeze_out(tau);
        const double g = f.g_hat_numeric;
        CHECK_FALSE(f.impulsive_from_start);
        // 2 tau (1 - g^2)^{3/2} = g
        CHECK(2.0 * tau * std::pow(1.0 - g * g, 1.5) == doctest::Approx(g).epsilon(1e-10));
        CHECK(f.g_hat_asymptotic == doctest::Approx(1.0 - std::pow(4.0 * std::sqrt(2.0) * tau, -2.0 / 3.0)));
    }
    // scales with omega0 tau_q
    CHECK(freeze_out(10.0, 3.0).g_hat_numeric == doctest::Approx(freeze_out(30.0).g_hat_numeric).epsilon(1e-13));
    CHECK(freeze_out(1e-3).g_hat_numeric > 0.0);
    CHECK_THROWS_AS(freeze_out(0.0), DomainError);
}

TEST_CASE("KZM exponent") {
    CHECK(kzm_predicted_exponent(0.5) == doctest::Approx(-1.0 / 3.0));
    CHECK(kzm_predicted_exponent(1.0) == doctest::Approx(-0.5));
    CHECK(kzm_predicted_exponent(INFINITY) == -1.0);
    CHECK_THROWS(kzm_predicted_exponent(0.0));
}
