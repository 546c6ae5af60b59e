#include "ccfm/errors.hpp"
#include "ccfm/spectral/characteristic.hpp"
#include "ccfm/spectral/stability.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace ccfm;
using namespace ccfm::spectral;
using Catch::Approx;

constexpr double kPi = std::numbers::pi;

TEST_CASE("no-delay spectrum is minus the equilibrium coefficients", "[spectral]") {
    CHECK(no_delay_spectrum({{3.5}}) == std::vector<double>{-3.5});
    CHECK(no_delay_spectrum({{3.5, 2.0}}) == std::vector<double>{-3.5, -2.0});
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> alpha(0.05, 3.0), x0(0.5, 40.0), m(-2, 2), b(0.5, 50.0), l(0, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> beta;
        for (int i = 0; i < 1 + trial % 6; ++i) beta.push_back(core::beta_star(alpha(rng), x0(rng), m(rng), b(rng), l(rng)));
        for (double e : no_delay_spectrum({beta})) CHECK(e < 0.0);
    }
}

TEST_CASE("small-delay condition", "[spectral]") {
    const auto c = small_delay_condition(3.5, 0.2);
    CHECK(c.satisfied);
    CHECK(c.margin == Approx(0.3));
    CHECK_FALSE(small_delay_condition(3.5, 1.0 / 3.5).satisfied);
    CHECK(small_delay_condition(123.0, 0.0).satisfied);
    CHECK_THROWS_AS(small_delay_condition(1.0, -0.1), InvalidConfig);
}

TEST_CASE("regime classification and boundaries", "[spectral]") {
    CHECK(classify_pair(1.0, 0.30).regime == Regime::NonOscillatoryStable);
    CHECK(classify_pair(1.0, 1.0).regime == Regime::OscillatoryStable);
    CHECK(classify_pair(3.5, kPi / 7).regime == Regime::Unstable);
    CHECK(classify_pair(1.0, kInvE).regime == Regime::NonOscillatoryStable);
    CHECK(classify_pair(1.0, std::nextafter(kInvE, 1.0)).regime == Regime::OscillatoryStable);
    CHECK(classify_pair(1.0, std::nextafter(kPi / 2, 0.0)).regime == Regime::OscillatoryStable);
    CHECK(classify_pair(1.0, 0.0).regime == Regime::NonOscillatoryStable);
    const auto v = classify_pair(2.0, 0.5);
    CHECK(v.product == 1.0);
    CHECK(v.margin_oscillation == Approx(kInvE - 1.0));
    CHECK(v.margin_hopf == Approx(kPi / 2 - 1.0));
    CHECK(to_string(Regime::OscillatoryStable) == "OscillatoryStable");
}

TEST_CASE("critical delay", "[spectral]") {
    CHECK(std::abs(critical_delay(3.5) - kPi / 7) < 1e-15);
    CHECK(critical_delay(1.0) == kPi / 2);
    CHECK(critical_delay(1.922480950785706) == Approx(0.8170673036593272).epsilon(1e-13));
    CHECK_THROWS_AS(critical_delay(0.0), InvalidConfig);
}

TEST_CASE("Hopf points satisfy the characteristic equation", "[spectral]") {
    const auto h0 = hopf_point(3.5, kPi / 7, 0);
    CHECK(h0.omega0 == Approx(3.5).epsilon(1e-15));
    CHECK(h0.kappa_cr == Approx(1.0).epsilon(1e-15));
    const auto h2 = hopf_point(3.5, kPi / 7, 2);
    CHECK(h2.omega0 == Approx(17.5).epsilon(1e-15));
    CHECK(h2.kappa_cr == Approx(5.0).epsilon(1e-15));
    for (const auto& h : {h0, h2})
        CHECK(characteristic_residual({0.0, h.omega0}, 3.5, kPi / 7, h.kappa_cr) < 1e-12 * h.omega0);
    CHECK_THROWS_AS(hopf_point(3.5, 0.0, 0), InvalidConfig);
    CHECK_THROWS_AS(hopf_point(3.5, 0.4, 1), InvalidConfig);
    CHECK_THROWS_AS(hopf_point(3.5, 0.4, -2), InvalidConfig);
}

TEST_CASE("critical kappa decreases in beta and tau", "[spectral][property]") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double b = u(rng), t = u(rng), f = 1.0 + 0.5 * u(rng);
        CHECK(hopf_point(b * f, t, 0).kappa_cr < hopf_point(b, t, 0).kappa_cr);
        CHECK(hopf_point(b, t * f, 0).kappa_cr < hopf_point(b, t, 0).kappa_cr);
    }
}

TEST_CASE("transversality closed form", "[spectral]") {
    CHECK(transversality(3.5, kPi / 7, 0) == Approx(1.5855642265760157).epsilon(1e-13));
    // equals beta omega tau / (1 + omega^2 tau^2) on the n = 0 branch
    const double w = 3.5, t = kPi / 7;
    CHECK(transversality(3.5, t, 0) == Approx(3.5 * w * t / (1 + w * w * t * t)).epsilon(1e-13));
}

TEST_CASE("transversality matches root continuation", "[spectral][oracle]") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> b(0.2, 6.0), t(0.05, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double beta = b(rng), tau = t(rng);
        const int n = trial % 2 == 0 ? 0 : 2;
        const double closed = transversality(beta, tau, n);
        const double numeric = numeric_transversality(beta, tau, n);
        CHECK(closed > 0.0);
        CHECK(numeric == Approx(closed).epsilon(1e-6));
    }
}

TEST_CASE("transversality in the delay", "[spectral][oracle]") {
    for (double beta : {0.5, 1.0, 3.5}) {
        const double tau = critical_delay(beta);
        const double h = 1e-6 * tau;
        const auto up = refine_root({0.0, beta}, beta, tau + h, 1.0);
        const auto down = refine_root({0.0, beta}, beta, tau - h, 1.0);
        const double numeric = (up.lambda.real() - down.lambda.real()) / (2 * h);
        CHECK(transversality_tau(beta) > 0.0);
        CHECK(numeric == Approx(transversality_tau(beta)).epsilon(1e-6));
    }
}

TEST_CASE("stability region margin", "[spectral]") {
    const auto r = stability_region_margin(10, 2, 20, 1, 0.7 * kPi / 7);
    CHECK(r.lhs == Approx(5.0));
    CHECK(r.rhs == Approx(5.0));
    CHECK_FALSE(r.stable);
    CHECK(stability_region_margin(10, 2, 20, 0, 0.5).lhs == stability_region_margin(10, 2, 3, 0, 0.5).lhs);
    CHECK(stability_region_margin(10, 0, 20, 0, 1.0).stable);
    CHECK_FALSE(stability_region_margin(10, 0, 20, 0, 2.0).stable);
    CHECK_THROWS_AS(stability_region_margin(10, 0, 20, 0, 0.0), InvalidConfig);
}

TEST_CASE("principal branch values", "[spectral][lambert]") {
    const auto w = principal_u(1.0);
    CHECK(w.real() == Approx(-0.31813150520476413).epsilon(1e-14));
    CHECK(w.imag() == Approx(1.3372357014306894).epsilon(1e-14));
    CHECK(principal_u(kInvE) == cplx(-1.0, 0.0));
    for (double a : {1e-8, 1e-3, 0.1, 0.3, 0.36, 0.3678, kInvE - 1e-12}) {
        const auto u = principal_u(a);
        CHECK(u.imag() == 0.0);
        CHECK(u.real() >= -1.0);
        CHECK(std::abs(u * std::exp(u) + a) < 1e-15);
    }
    for (double a : {kInvE + 1e-12, 0.37, 0.5, 1.0, 1.5, 3.0, 10.0, 100.0, 1e4}) {
        const auto u = principal_u(a);
        CHECK(u.imag() > 0.0);
        CHECK(u.imag() < kPi);
        CHECK(std::abs(u * std::exp(u) + a) < 1e-12 * a);
    }
    CHECK_THROWS_AS(principal_u(0.0), InvalidConfig);
}

TEST_CASE("dominant root reference cases", "[spectral]") {
    const auto r1 = dominant_root(1.0, 1.0);
    CHECK(r1.lambda.real() == Approx(-0.31813150520476413).epsilon(1e-12));
    CHECK(r1.lambda.imag() == Approx(1.3372357014306894).epsilon(1e-12));
    CHECK(r1.residual < 1e-12);

    const auto r2 = dominant_root(3.5, kPi / 7.0);
    CHECK(std::abs(r2.lambda.real()) < 1e-12);
    CHECK(r2.lambda.imag() == Approx(3.5).epsilon(1e-12));

    const auto r3 = dominant_root(1.0, kInvE);
    CHECK(r3.lambda.imag() == 0.0);
    CHECK(std::abs(r3.lambda.real() * kInvE + 1.0) < 1e-9);

    CHECK(dominant_root(2.0, 0.0).lambda == cplx(-2.0, 0.0));
    CHECK(dominant_root(3.5, 0.2, 2.0).lambda == dominant_root(7.0, 0.2, 1.0).lambda);
    CHECK_THROWS_AS(dominant_root(0.0, 1.0), InvalidConfig);
}

TEST_CASE("argument principle counts known roots", "[spectral][oracle]") {
    // a = 1: the conjugate pair near -0.318 +- 1.337i is the only pair with Re u > -2
    CHECK(count_roots_u(1.0, -1.0, 5.0, -3.0, 3.0) == 2);
    CHECK(count_roots_u(1.0, -1.0, 5.0, 0.0 + 1e-3, 3.0) == 1);
    CHECK(count_roots_u(1.0, 0.0, 5.0, -3.0, 3.0) == 0);
    // a = 2: the principal pair has crossed into Re u > 0
    CHECK(count_roots_u(2.0, 0.0, 50.0, -100.0, 100.0) == 2);
}

TEST_CASE("dominant root agrees with the classification", "[spectral][property]") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> prod(0.0, 2.0), beta(0.1, 10.0);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const double b = beta(rng);
        const double p = prod(rng);
        if (p == 0.0) continue;
        const double tau = p / b;
        const auto v = classify_pair(b, tau);
        const auto r = dominant_root(b, tau);
        CHECK(r.residual <= 1e-12 * std::max(1.0, std::abs(r.lambda)));
        if (std::abs(v.product - kInvE) > 1e-9) CHECK((r.lambda.imag() == 0.0) == (v.regime == Regime::NonOscillatoryStable));
        if (std::abs(v.product - kPi / 2) > 1e-9) CHECK((r.lambda.real() < 0.0) == (v.regime != Regime::Unstable));
        ++checked;
    }
    CHECK(checked > 490);
}

TEST_CASE("verdict JSON record", "[spectral][io]") {
    const auto j = verdict_json(3, 3.5, kPi / 7, classify_pair(3.5, kPi / 7));
    CHECK(j["pair"] == 3);
    CHECK(j["regime"] == "Unstable");
    CHECK(j["product"].get<double>() == Approx(kPi / 2));
    CHECK(j["margins"].contains("non_oscillatory"));
    CHECK(j["margins"].contains("hopf"));
}
