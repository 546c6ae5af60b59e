#include "ccfm/rate/convergence_rate.hpp"

#include "ccfm/core/platoon.hpp"
#include "ccfm/errors.hpp"
#include "ccfm/spectral/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ccfm::rate {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// Bisection on a sign change of f over [lo, hi], finished by Newton steps that
// are kept only while they stay inside the bracket.
template <typename F, typename DF>
double bracketed_root(F f, DF df, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        const double d = df(x);
        if (d == 0.0) break;
        const double next = x - f(x) / d;
        if (!(next >= lo - 1e-12 && next <= hi + 1e-12)) break;
        if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

// x e^{-x} = a on the branch x in (0, 1]
double solve_real_branch(double a) {
    return bracketed_root([a](double x) { return x * std::exp(-x) - a; },
                          [](double x) { return (1.0 - x) * std::exp(-x); }, 0.0, 1.0);
}

// (m / sin m) e^{-m / tan m} = a over m in (0, pi); returns x = m / tan m
double solve_oscillatory_branch(double a) {
    // log form is monotone increasing from -1 (m -> 0) to +inf (m -> pi)
    auto f = [a](double m) { return std::log(m / std::sin(m)) - m / std::tan(m) - std::log(a); };
    auto df = [](double m) {
        const double s = std::sin(m);
        return 1.0 / m - 2.0 / std::tan(m) + m / (s * s);
    };
    const double eps = 1e-15;
    const double m = bracketed_root(f, df, eps, kPi - 1e-12);
    return m / std::tan(m);
}

} // namespace

std::string to_string(Branch branch) {
    switch (branch) {
    case Branch::Real: return "real";
    case Branch::Complex: return "complex";
    case Branch::Boundary: return "boundary";
    case Branch::Unstable: return "unstable";
    }
    return "unknown";
}

double optimal_delay(double beta_star) {
    if (!(beta_star > 0.0)) throw InvalidConfig("beta* must be > 0");
    return 1.0 / (beta_star * kE);
}

RateResult rate_of_convergence(double beta_star, double tau) {
    if (!(beta_star > 0.0) || !(tau > 0.0))
        throw InvalidConfig("rate_of_convergence needs beta* > 0 and tau > 0");
    const double a = beta_star * tau;
    if (!(a < kPi / 2.0)) {
        std::ostringstream os;
        os << "beta* tau = " << a << " lies outside the stable region (needs < pi/2)";
        throw UnstableInput(os.str());
    }
    RateResult out;
    out.sigma1 = 1.0 / tau;
    out.tau_star = optimal_delay(beta_star);
    out.regime = tau < out.tau_star   ? DelayRegime::BelowOptimal
                 : tau > out.tau_star ? DelayRegime::AboveOptimal
                                      : DelayRegime::AtOptimal;

    if (std::abs(kE * a - 1.0) <= 1e-12) {
        out.sigma2 = out.sigma1;
        out.sigma3 = out.sigma1;
        out.branch = Branch::Boundary;
    } else if (a < spectral::kInvE) {
        out.sigma2 = solve_real_branch(a) / tau;
        out.branch = Branch::Real;
    } else {
        out.sigma3 = solve_oscillatory_branch(a) / tau;
        out.branch = Branch::Complex;
    }

    const auto root = spectral::dominant_root(beta_star, tau, 1.0);
    out.sigma_dominant = -root.lambda.real();

    double smallest = out.sigma1;
    if (out.sigma2) smallest = std::min(smallest, *out.sigma2);
    if (out.sigma3) smallest = std::min(smallest, *out.sigma3);
    out.smallest_sigma_reciprocal = 1.0 / smallest;
    return out;
}

std::vector<RatePoint> rate_curve(double alpha, double b, double m, const std::vector<double>& l_values,
                                  double x0dot, const std::vector<double>& tau_grid) {
    std::vector<RatePoint> out;
    out.reserve(l_values.size() * tau_grid.size());
    for (double l : l_values) {
        const double beta = core::beta_star(alpha, x0dot, m, b, l);
        for (double tau : tau_grid) {
            RatePoint p{l, tau, std::numeric_limits<double>::quiet_NaN(), Branch::Unstable};
            if (beta * tau < kPi / 2.0) {
                const auto r = rate_of_convergence(beta, tau);
                p.rate = r.sigma_dominant;
                p.branch = r.branch;
            }
            out.push_back(p);
        }
    }
    return out;
}

} // namespace ccfm::rate
