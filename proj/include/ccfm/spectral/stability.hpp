#pragma once

#include "ccfm/core/platoon.hpp"
#include "ccfm/spectral/characteristic.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace ccfm::spectral {

enum class Regime { NonOscillatoryStable, OscillatoryStable, Unstable };

std::string to_string(Regime regime);

struct StabilityVerdict {
    Regime regime = Regime::NonOscillatoryStable;
    double product = 0.0;           ///< beta* tau
    double margin_oscillation = 0.0; ///< 1/e - beta* tau
    double margin_hopf = 0.0;        ///< pi/2 - beta* tau
};

struct HopfPoint {
    double omega0 = 0.0;
    double kappa_cr = 0.0;
    int n = 0;
};

struct SmallDelayCondition {
    bool satisfied = false;
    double margin = 0.0; ///< 1 - beta* tau
};

struct RegionMargin {
    double lhs = 0.0; ///< xdot0^m / b^l
    double rhs = 0.0; ///< pi / (2c)
    bool stable = false;
};

/// Eigenvalues of the delay-free linearization: -beta*_i.
std::vector<double> no_delay_spectrum(const core::EquilibriumCoefficients& beta);

SmallDelayCondition small_delay_condition(double beta_star, double tau);

StabilityVerdict classify_pair(double beta_star, double tau);

/// tau at which the pair reaches the Hopf boundary with kappa = 1: pi / (2 beta*).
double critical_delay(double beta_star);

/// Throws InvalidConfig for odd or negative n and for tau = 0.
HopfPoint hopf_point(double beta_star, double tau, int n = 0);

/// Re d(lambda)/d(kappa) at kappa_cr, closed form.
double transversality(double beta_star, double tau, int n = 0);

/// Re d(lambda)/d(tau) at the kappa = 1 crossing (tau = tau_cr), closed form.
double transversality_tau(double beta_star);

/// Re d(lambda)/d(kappa) by central differences of the root tracked from j omega0.
double numeric_transversality(double beta_star, double tau, int n = 0, double dk = 1e-5);

RegionMargin stability_region_margin(double x0dot, double m, double b, double l, double c);

/// {"pair":i,"beta_star":...,"tau":...,"product":...,"regime":...,"margins":{...}}, pair 1-based.
nlohmann::json verdict_json(std::size_t pair, double beta_star, double tau,
                            const StabilityVerdict& verdict);

/// Verdicts for every pair of a configuration, at its kappa.
std::vector<StabilityVerdict> classify_platoon(const core::PlatoonConfig& config);

} // namespace ccfm::spectral
