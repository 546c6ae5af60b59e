#pragma once

#include "ccfm/core/platoon.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace ccfm::dde {

enum class Method {
    Euler, ///< forward Euler, delayed values taken at the previous grid point
    Rk4,   ///< classical Runge-Kutta, delayed values by cubic Hermite interpolation
};

enum class Model {
    Nonlinear, ///< full kappa-system
    Linear,    ///< linearization about the all-zero equilibrium
};

Method parse_method(const std::string& name);
std::string to_string(Method method);

struct SimConfig {
    double step = 0.01;
    double horizon = 300.0;
    Method method = Method::Euler;
    /// Constant state on [-tau_max, 0). Defaults to the initial perturbation.
    std::optional<core::PlatoonState> history_init;
    Model model = Model::Nonlinear;
};

void validate(const SimConfig& sim, const core::PlatoonConfig& platoon);

/// Uniform-grid solution. Row k holds (v_1..v_N, y_1..y_N) at t = k * step.
class Trajectory {
  public:
    Trajectory(core::PlatoonConfig config, double step, std::size_t reserve_rows = 0);

    const core::PlatoonConfig& config() const noexcept { return config_; }
    double step() const noexcept { return step_; }
    std::size_t pairs() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return data_.size() / (2 * pairs_); }

    double time(std::size_t k) const noexcept { return static_cast<double>(k) * step_; }
    double v(std::size_t k, std::size_t pair) const noexcept { return data_[k * 2 * pairs_ + pair]; }
    double y(std::size_t k, std::size_t pair) const noexcept {
        return data_[k * 2 * pairs_ + pairs_ + pair];
    }
    core::PlatoonState state(std::size_t k) const;
    std::span<const double> row(std::size_t k) const noexcept {
        return {data_.data() + k * 2 * pairs_, 2 * pairs_};
    }

    void append(const core::PlatoonState& state);

  private:
    core::PlatoonConfig config_;
    double step_;
    std::size_t pairs_;
    std::vector<double> data_;
};

/// Integrates the delayed system from t = 0 to the horizon on a fixed grid.
/// Throws StepTooLarge when the step exceeds the shortest positive delay and
/// DomainBreakdown / NegativeVelocityBase from the vector field.
Trajectory simulate(const core::PlatoonConfig& platoon, const SimConfig& sim,
                    const core::PlatoonState& perturbation);

/// CSV with header t,v_1..v_N,y_1..y_N and 17 significant digits.
void write_csv(const Trajectory& trajectory, std::ostream& out);

} // namespace ccfm::dde
