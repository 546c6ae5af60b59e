#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ccfm::rate {

enum class Branch { Real, Complex, Boundary, Unstable };

std::string to_string(Branch branch);

enum class DelayRegime { BelowOptimal, AtOptimal, AboveOptimal };

struct RateResult {
    double sigma1 = 0.0;                 ///< 1/tau
    std::optional<double> sigma2;        ///< real branch, present for beta* tau <= 1/e
    std::optional<double> sigma3;        ///< oscillatory branch, present for beta* tau > 1/e
    double sigma_dominant = 0.0;         ///< decay rate, -Re of the rightmost root
    double smallest_sigma_reciprocal = 0.0; ///< 1 / min(sigma1, sigma2, sigma3)
    double tau_star = 0.0;
    DelayRegime regime = DelayRegime::AtOptimal;
    Branch branch = Branch::Real;
};

/// Decay rate of the pair beta*, tau. Throws UnstableInput when beta* tau >= pi/2.
RateResult rate_of_convergence(double beta_star, double tau);

/// tau* = 1 / (beta* e).
double optimal_delay(double beta_star);

struct RatePoint {
    double l = 0.0;
    double tau = 0.0;
    double rate = 0.0; ///< NaN for unstable grid points
    Branch branch = Branch::Real;
};

/// Rate for each l and tau; grid points in the unstable region carry Branch::Unstable.
std::vector<RatePoint> rate_curve(double alpha, double b, double m, const std::vector<double>& l_values,
                                  double x0dot, const std::vector<double>& tau_grid);

} // namespace ccfm::rate
