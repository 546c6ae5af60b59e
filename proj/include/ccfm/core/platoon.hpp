#pragma once

// Classical car-following model in relative coordinates.
//
// Pair i (1..N) couples vehicle i-1 to vehicle i:
//   v_i = xdot_{i-1} - xdot_i      (relative velocity)
//   y_i = x_{i-1} - x_i - b_i      (headway deviation)
// The leader (vehicle 0) follows a prescribed velocity profile.
//
//   vdot_i = kappa * [G_{i-1}(t - tau_{i-1}) - G_i(t - tau_i)]
//   ydot_i = kappa * v_i(t)
//   G_i(s) = beta_i(s) * v_i(s)
//   beta_i(s) = alpha_i * (xdot_0(s) - v_1(s) - ... - v_i(s))^m / (y_i(s) + b_i)^l
//
// The index-0 coupling term is structurally absent.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace ccfm::core {

struct VehicleParams {
    double alpha = 0.0; ///< sensitivity coefficient (1/s)
    double tau = 0.0;   ///< reaction delay (s)
    double b = 0.0;     ///< desired equilibrium headway (m)
};

/// Leader velocity xdot_0(t) = v_eq * (1 - exp(-ramp * t)) for t > 0, zero before.
/// An infinite ramp means the leader has already settled: xdot_0 == v_eq for all t.
struct LeaderProfile {
    double v_eq = 10.0;
    double ramp = 10.0;

    static LeaderProfile settled(double v_eq) {
        return {v_eq, std::numeric_limits<double>::infinity()};
    }

    bool is_settled() const noexcept { return ramp == std::numeric_limits<double>::infinity(); }
    double velocity(double t) const noexcept;
};

struct PlatoonConfig {
    std::vector<VehicleParams> vehicles;
    double m = 0.0; ///< velocity exponent, in [-2, 2]
    double l = 0.0; ///< headway exponent, >= 0
    LeaderProfile leader;
    double kappa = 1.0;

    std::size_t size() const noexcept { return vehicles.size(); }
    double max_delay() const noexcept;
    /// Smallest strictly positive delay, or 0 when every delay is zero.
    double min_positive_delay() const noexcept;

    PlatoonConfig with_kappa(double kappa) const;
    PlatoonConfig with_tau(std::size_t pair, double tau) const;
};

/// Throws InvalidConfig when any invariant of the configuration is violated.
void validate(const PlatoonConfig& config);

struct PlatoonState {
    std::vector<double> v;
    std::vector<double> y;

    PlatoonState() = default;
    explicit PlatoonState(std::size_t n) : v(n, 0.0), y(n, 0.0) {}
    PlatoonState(std::vector<double> v_in, std::vector<double> y_in)
        : v(std::move(v_in)), y(std::move(y_in)) {}

    std::size_t size() const noexcept { return v.size(); }
    static PlatoonState uniform(std::size_t n, double v0, double y0);
};

struct EquilibriumCoefficients {
    std::vector<double> beta_star;

    std::size_t size() const noexcept { return beta_star.size(); }
    double operator[](std::size_t i) const { return beta_star[i]; }
};

/// beta*_i = alpha_i * v_eq^m / b_i^l.
EquilibriumCoefficients beta_star(const PlatoonConfig& config);

/// Scalar form used by sweeps that never build a full config.
double beta_star(double alpha, double x0dot, double m, double b, double l);

/// beta_i evaluated on a state sample taken at time `t` (leader velocity at t).
/// `pair` is 0-based. Throws DomainBreakdown / NegativeVelocityBase.
double coupling_gain(std::size_t pair, double t, const PlatoonState& sample,
                     const PlatoonConfig& config);

/// Full nonlinear kappa-system. `delayed[i]` is the state sampled at t - tau_i.
void nonlinear_rhs(double t, const PlatoonState& current, std::span<const PlatoonState> delayed,
                   const PlatoonConfig& config, PlatoonState& derivative);

PlatoonState nonlinear_rhs(double t, const PlatoonState& current,
                           std::span<const PlatoonState> delayed, const PlatoonConfig& config);

/// Linearized v-dynamics. `delayed_v[i]` is v_i(t - tau_i).
std::vector<double> linear_rhs(std::span<const double> delayed_v,
                               const EquilibriumCoefficients& beta, double kappa);

} // namespace ccfm::core
