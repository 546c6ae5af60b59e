#include "ccfm/core/platoon.hpp"
#include "ccfm/errors.hpp"
#include "ccfm/rate/convergence_rate.hpp"
#include "ccfm/spectral/characteristic.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace ccfm;
using namespace ccfm::rate;
using Catch::Approx;

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

TEST_CASE("optimal delay", "[rate]") {
    CHECK(optimal_delay(3.5) == Approx(0.10510841176326923).epsilon(1e-14));
    CHECK(optimal_delay(1.0 / kE) == Approx(1.0).epsilon(1e-15));
    CHECK(optimal_delay(core::beta_star(0.7, 10, 2, 20, 0.8)) == Approx(0.05773397696635009).epsilon(1e-13));
    CHECK_THROWS_AS(optimal_delay(0.0), InvalidConfig);
}

TEST_CASE("all branches coincide at the optimal delay", "[rate]") {
    const double tau = optimal_delay(3.5);
    const auto r = rate_of_convergence(3.5, tau);
    CHECK(r.branch == Branch::Boundary);
    CHECK(r.sigma1 == Approx(3.5 * kE).epsilon(1e-8));
    REQUIRE(r.sigma2);
    CHECK(*r.sigma2 == Approx(3.5 * kE).epsilon(1e-8));
    CHECK(r.sigma_dominant == Approx(9.513986399606658).epsilon(1e-8));
    CHECK(r.tau_star * 3.5 * kE == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("real branch below the optimum", "[rate]") {
    const auto r = rate_of_convergence(3.5, 0.03);
    CHECK(r.branch == Branch::Real);
    CHECK(r.regime == DelayRegime::BelowOptimal);
    REQUIRE(r.sigma2);
    CHECK_FALSE(r.sigma3);
    CHECK(*r.sigma2 == Approx(3.9390271786685173).epsilon(1e-12));
    CHECK(r.sigma_dominant == Approx(3.9390271786685173).epsilon(1e-12));
    CHECK(*r.sigma2 * 0.03 * std::exp(-*r.sigma2 * 0.03) == Approx(0.105).epsilon(1e-13));
    CHECK(r.sigma1 == Approx(1.0 / 0.03));
    CHECK(r.smallest_sigma_reciprocal == Approx(1.0 / *r.sigma2));
}

TEST_CASE("oscillatory branch above the optimum", "[rate]") {
    const auto r = rate_of_convergence(3.5, 0.3);
    CHECK(r.branch == Branch::Complex);
    CHECK(r.regime == DelayRegime::AboveOptimal);
    CHECK_FALSE(r.sigma2);
    REQUIRE(r.sigma3);
    CHECK(*r.sigma3 == Approx(0.9468976120116035).epsilon(1e-10));
    CHECK(r.sigma_dominant == Approx(0.9468976120116035).epsilon(1e-12));
}

TEST_CASE("unstable input is an error", "[rate][errors]") {
    CHECK_THROWS_AS(rate_of_convergence(3.5, kPi / 7), UnstableInput);
    CHECK_THROWS_AS(rate_of_convergence(3.5, 1.0), UnstableInput);
    CHECK_THROWS_AS(rate_of_convergence(3.5, 0.0), InvalidConfig);
}

TEST_CASE("rate equals minus the real part of the rightmost root", "[rate][oracle]") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> prod(1e-4, kPi / 2 - 1e-4), beta(0.1, 10.0);
    for (int trial = 0; trial < 400; ++trial) {
        const double b = beta(rng), tau = prod(rng) / b;
        const auto r = rate_of_convergence(b, tau);
        const double oracle = -spectral::dominant_root(b, tau).lambda.real();
        CHECK(r.sigma_dominant == Approx(oracle).epsilon(1e-8));
        const double branch = r.sigma2 ? *r.sigma2 : *r.sigma3;
        CHECK(branch == Approx(oracle).epsilon(1e-8));
        CHECK(r.sigma1 > 0.0);
        CHECK(branch > 0.0);
    }
}

TEST_CASE("rate peaks within one grid step of the optimal delay", "[rate][property]") {
    for (double beta : {0.5, 3.5, 6.4}) {
        const std::size_t n = 2000;
        const double hi = kPi / (2 * beta);
        std::vector<double> grid;
        for (std::size_t k = 1; k < n; ++k) grid.push_back(hi * k / n);
        const auto curve = rate_curve(beta, 1.0, 0.0, {0.0}, 1.0, grid);
        const auto best = std::max_element(curve.begin(), curve.end(),
                                           [](const RatePoint& a, const RatePoint& b) { return a.rate < b.rate; });
        CHECK(std::abs(best->tau - optimal_delay(beta)) <= hi / n);
    }
}

TEST_CASE("rate at a third of the optimum beats three times the optimum", "[rate]") {
    const double ts = optimal_delay(3.5);
    const double a = rate_of_convergence(3.5, ts / 3).sigma_dominant;
    const double b = rate_of_convergence(3.5, 3 * ts).sigma_dominant;
    CHECK(a == Approx(4.030902150070972).epsilon(1e-10));
    CHECK(b == Approx(0.7903247601457379).epsilon(1e-10));
    CHECK(a > b);
}

TEST_CASE("rate curve flags unstable points and labels branches", "[rate]") {
    const auto curve = rate_curve(0.7, 20, 2, {1.0}, 10, {0.03, optimal_delay(3.5), 0.3, 0.5});
    REQUIRE(curve.size() == 4);
    CHECK(curve[0].branch == Branch::Real);
    CHECK(curve[1].branch == Branch::Boundary);
    CHECK(curve[2].branch == Branch::Complex);
    CHECK(curve[3].branch == Branch::Unstable);
    CHECK(std::isnan(curve[3].rate));
    CHECK(to_string(Branch::Boundary) == "boundary");
    CHECK(rate_curve(0.7, 20, 2, {}, 10, {0.1}).empty());
}

TEST_CASE("each curve is unimodal with its peak at the optimal delay", "[rate][property]") {
    for (double l : {0.8, 1.0, 1.2}) {
        const double beta = core::beta_star(0.7, 10, 2, 20, l);
        const double hi = kPi / (2 * beta);
        std::vector<double> grid;
        for (int k = 1; k < 400; ++k) grid.push_back(hi * k / 400);
        const auto curve = rate_curve(0.7, 20, 2, {l}, 10, grid);
        const double ts = optimal_delay(beta);
        for (std::size_t k = 1; k < curve.size(); ++k) {
            if (curve[k].tau <= ts) CHECK(curve[k].rate > curve[k - 1].rate);
            if (curve[k - 1].tau >= ts) CHECK(curve[k].rate < curve[k - 1].rate);
        }
    }
}

TEST_CASE("larger headway exponent lowers the rate at short delays", "[rate]") {
    const auto curve = rate_curve(0.7, 20, 2, {0.8, 1.0, 1.2}, 10, {0.03});
    CHECK(curve[0].rate == Approx(8.132672584724733).epsilon(1e-10));
    CHECK(curve[2].rate == Approx(2.044060626420946).epsilon(1e-10));
    CHECK(curve[0].rate > curve[1].rate);
    CHECK(curve[1].rate > curve[2].rate);
}
