#include "ccfm/spectral/stability.hpp"

#include "ccfm/errors.hpp"

#include <cmath>
#include <numbers>

namespace ccfm::spectral {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
} // namespace

std::string to_string(Regime regime) {
    switch (regime) {
    case Regime::NonOscillatoryStable: return "NonOscillatoryStable";
    case Regime::OscillatoryStable: return "OscillatoryStable";
    case Regime::Unstable: return "Unstable";
    }
    return "Unknown";
}

std::vector<double> no_delay_spectrum(const core::EquilibriumCoefficients& beta) {
    std::vector<double> out;
    out.reserve(beta.size());
    for (double b : beta.beta_star) out.push_back(-b);
    return out;
}

SmallDelayCondition small_delay_condition(double beta_star, double tau) {
    if (!(tau >= 0.0)) throw InvalidConfig("tau must be >= 0");
    const double p = beta_star * tau;
    return {p < 1.0, 1.0 - p};
}

StabilityVerdict classify_pair(double beta_star, double tau) {
    if (!(beta_star > 0.0) || !(tau >= 0.0))
        throw InvalidConfig("classify_pair needs beta* > 0 and tau >= 0");
    StabilityVerdict out;
    out.product = beta_star * tau;
    out.margin_oscillation = kInvE - out.product;
    out.margin_hopf = kHalfPi - out.product;
    if (out.product <= kInvE)
        out.regime = Regime::NonOscillatoryStable;
    else if (out.product < kHalfPi)
        out.regime = Regime::OscillatoryStable;
    else
        out.regime = Regime::Unstable;
    return out;
}

double critical_delay(double beta_star) {
    if (!(beta_star > 0.0)) throw InvalidConfig("beta* must be > 0");
    return kPi / (2.0 * beta_star);
}

HopfPoint hopf_point(double beta_star, double tau, int n) {
    if (n < 0 || n % 2 != 0) throw InvalidConfig("Hopf branch index n must be even and >= 0");
    if (!(tau > 0.0)) throw InvalidConfig("no finite Hopf point without delay (tau = 0)");
    if (!(beta_star > 0.0)) throw InvalidConfig("beta* must be > 0");
    const double k = (2.0 * n + 1.0) * kPi;
    return {k / (2.0 * tau), k / (2.0 * beta_star * tau), n};
}

double transversality(double beta_star, double tau, int n) {
    const HopfPoint hp = hopf_point(beta_star, tau, n);
    const double tw2 = tau * tau * hp.omega0 * hp.omega0;
    return 2.0 * beta_star * tw2 / ((2.0 * n + 1.0) * (1.0 + tw2) * kPi);
}

double transversality_tau(double beta_star) {
    // d(lambda)/d(tau) = -lambda^2 / (1 + lambda tau) at lambda = j omega0, omega0 = beta*
    const double tau = critical_delay(beta_star);
    const double w = beta_star;
    return w * w / (1.0 + w * w * tau * tau);
}

double numeric_transversality(double beta_star, double tau, int n, double dk) {
    const HopfPoint hp = hopf_point(beta_star, tau, n);
    const cplx seed(0.0, hp.omega0);
    const double h = dk * hp.kappa_cr;
    const auto up = refine_root(seed, beta_star, tau, hp.kappa_cr + h);
    const auto down = refine_root(seed, beta_star, tau, hp.kappa_cr - h);
    return (up.lambda.real() - down.lambda.real()) / (2.0 * h);
}

RegionMargin stability_region_margin(double x0dot, double m, double b, double l, double c) {
    if (!(x0dot > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw InvalidConfig("stability region needs x0dot > 0, b > 0, c > 0");
    RegionMargin out;
    out.lhs = std::pow(x0dot, m) / std::pow(b, l);
    out.rhs = kPi / (2.0 * c);
    out.stable = out.lhs < out.rhs;
    return out;
}

nlohmann::json verdict_json(std::size_t pair, double beta_star, double tau,
                            const StabilityVerdict& verdict) {
    return {{"pair", pair},
            {"beta_star", beta_star},
            {"tau", tau},
            {"product", verdict.product},
            {"regime", to_string(verdict.regime)},
            {"margins",
             {{"non_oscillatory", verdict.margin_oscillation}, {"hopf", verdict.margin_hopf}}}};
}

std::vector<StabilityVerdict> classify_platoon(const core::PlatoonConfig& config) {
    const auto beta = core::beta_star(config);
    std::vector<StabilityVerdict> out;
    out.reserve(config.size());
    for (std::size_t i = 0; i < config.size(); ++i)
        out.push_back(classify_pair(config.kappa * beta[i], config.vehicles[i].tau));
    return out;
}

} // namespace ccfm::spectral
