#include "ccfm/core/platoon.hpp"

#include "ccfm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ccfm::core {

namespace {

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

double checked_velocity_power(double base, double m, double t, std::size_t pair) {
    if (m == 0.0) return 1.0;
    if (m == 1.0) return base;
    if (m == 2.0) return base * base;
    if (base > 0.0) return std::pow(base, m);
    if (is_integer(m) && (m > 0.0 || base != 0.0)) return std::pow(base, m);
    std::ostringstream os;
    os << "follower velocity base " << base << " raised to m=" << m << " at t=" << t
       << " (pair " << pair + 1 << ")";
    throw NegativeVelocityBase(t, pair + 1, os.str());
}

} // namespace

double LeaderProfile::velocity(double t) const noexcept {
    if (is_settled()) return v_eq;
    if (t <= 0.0) return 0.0;
    return v_eq * -std::expm1(-ramp * t);
}

double PlatoonConfig::max_delay() const noexcept {
    double out = 0.0;
    for (const auto& veh : vehicles) out = std::max(out, veh.tau);
    return out;
}

double PlatoonConfig::min_positive_delay() const noexcept {
    double out = 0.0;
    for (const auto& veh : vehicles) {
        if (veh.tau > 0.0 && (out == 0.0 || veh.tau < out)) out = veh.tau;
    }
    return out;
}

PlatoonConfig PlatoonConfig::with_kappa(double k) const {
    PlatoonConfig out = *this;
    out.kappa = k;
    return out;
}

PlatoonConfig PlatoonConfig::with_tau(std::size_t pair, double tau) const {
    PlatoonConfig out = *this;
    out.vehicles.at(pair).tau = tau;
    return out;
}

void validate(const PlatoonConfig& config) {
    auto fail = [](const std::string& msg) { throw InvalidConfig(msg); };
    if (config.vehicles.empty()) fail("platoon needs at least one follower (N >= 1)");
    for (std::size_t i = 0; i < config.vehicles.size(); ++i) {
        const auto& veh = config.vehicles[i];
        const std::string tag = "vehicle " + std::to_string(i + 1) + ": ";
        if (!(veh.alpha > 0.0) || !std::isfinite(veh.alpha)) fail(tag + "alpha must be > 0");
        if (!(veh.tau >= 0.0) || !std::isfinite(veh.tau)) fail(tag + "tau must be >= 0");
        if (!(veh.b > 0.0) || !std::isfinite(veh.b)) fail(tag + "b must be > 0");
    }
    if (!(config.m >= -2.0 && config.m <= 2.0)) fail("m must lie in [-2, 2]");
    if (!(config.l >= 0.0) || !std::isfinite(config.l)) fail("l must be >= 0");
    if (!(config.kappa > 0.0) || !std::isfinite(config.kappa)) fail("kappa must be > 0");
    if (!(config.leader.v_eq > 0.0) || !std::isfinite(config.leader.v_eq))
        fail("leader v_eq must be > 0");
    if (!(config.leader.ramp > 0.0)) fail("leader ramp must be > 0");
}

PlatoonState PlatoonState::uniform(std::size_t n, double v0, double y0) {
    return PlatoonState(std::vector<double>(n, v0), std::vector<double>(n, y0));
}

double beta_star(double alpha, double x0dot, double m, double b, double l) {
    const double value = alpha * std::pow(x0dot, m) / std::pow(b, l);
    if (!std::isfinite(value) || !(value > 0.0)) {
        std::ostringstream os;
        os << "equilibrium coefficient is not a positive finite number (alpha=" << alpha
           << ", x0dot=" << x0dot << ", m=" << m << ", b=" << b << ", l=" << l << ")";
        throw InvalidConfig(os.str());
    }
    return value;
}

EquilibriumCoefficients beta_star(const PlatoonConfig& config) {
    if (!(config.leader.v_eq > 0.0)) throw InvalidConfig("leader v_eq must be > 0");
    EquilibriumCoefficients out;
    out.beta_star.reserve(config.size());
    for (const auto& veh : config.vehicles) {
        out.beta_star.push_back(beta_star(veh.alpha, config.leader.v_eq, config.m, veh.b, config.l));
    }
    return out;
}

double coupling_gain(std::size_t pair, double t, const PlatoonState& sample,
                     const PlatoonConfig& config) {
    const auto& veh = config.vehicles[pair];
    const double headway = sample.y[pair] + veh.b;
    if (!(headway > 0.0)) {
        std::ostringstream os;
        os << "headway of pair " << pair + 1 << " collapsed to " << headway << " at t=" << t;
        throw DomainBreakdown(t, pair + 1, os.str());
    }
    double follower_velocity = config.leader.velocity(t);
    for (std::size_t k = 0; k <= pair; ++k) follower_velocity -= sample.v[k];

    const double speed_term = checked_velocity_power(follower_velocity, config.m, t, pair);
    const double headway_term = config.l == 0.0   ? 1.0
                                : config.l == 1.0 ? headway
                                                  : std::pow(headway, config.l);
    return veh.alpha * speed_term / headway_term;
}

void nonlinear_rhs(double t, const PlatoonState& current, std::span<const PlatoonState> delayed,
                   const PlatoonConfig& config, PlatoonState& derivative) {
    const std::size_t n = config.size();
    derivative.v.resize(n);
    derivative.y.resize(n);
    double upstream = 0.0; // kappa * G_{i-1}(t - tau_{i-1})
    for (std::size_t i = 0; i < n; ++i) {
        const double t_delayed = t - config.vehicles[i].tau;
        const PlatoonState& sample = delayed[i];
        const double own = config.kappa * coupling_gain(i, t_delayed, sample, config) * sample.v[i];
        derivative.v[i] = upstream - own;
        derivative.y[i] = config.kappa * current.v[i];
        upstream = own;
    }
}

PlatoonState nonlinear_rhs(double t, const PlatoonState& current,
                           std::span<const PlatoonState> delayed, const PlatoonConfig& config) {
    PlatoonState out(config.size());
    nonlinear_rhs(t, current, delayed, config, out);
    return out;
}

std::vector<double> linear_rhs(std::span<const double> delayed_v,
                               const EquilibriumCoefficients& beta, double kappa) {
    const std::size_t n = beta.size();
    std::vector<double> out(n, 0.0);
    double upstream = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double own = kappa * beta[i] * delayed_v[i];
        out[i] = upstream - own;
        upstream = own;
    }
    return out;
}

} // namespace ccfm::core
