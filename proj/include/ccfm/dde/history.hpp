#pragma once

#include "ccfm/core/platoon.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ccfm::dde {

/// Ring of uniformly spaced samples S(t_j), t_j = j * step, together with the
/// derivative at each sample. Indices below zero resolve to the constant
/// pre-history. Realizes the solution segment S_t(theta), theta in [-tau_max, 0].
class HistoryBuffer {
  public:
    HistoryBuffer(double step, double span, core::PlatoonState pre_history);

    double step() const noexcept { return step_; }
    std::size_t capacity() const noexcept { return slots_.size(); }
    /// Index of the newest stored sample, -1 when empty.
    std::int64_t newest() const noexcept { return newest_; }

    void push(const core::PlatoonState& state);
    /// Sets the derivative attached to the newest sample.
    void set_newest_derivative(const core::PlatoonState& derivative);

    const core::PlatoonState& at(std::int64_t index) const;

    /// Value at an arbitrary time, by cubic Hermite interpolation between the
    /// two enclosing samples. Requires the derivative at both ends unless the
    /// time falls on a grid point.
    void interpolate(double t, core::PlatoonState& out) const;

  private:
    struct Slot {
        core::PlatoonState state;
        core::PlatoonState derivative;
    };

    const Slot& slot(std::int64_t index) const;

    double step_;
    core::PlatoonState pre_history_;
    std::vector<Slot> slots_;
    std::int64_t newest_ = -1;
};

} // namespace ccfm::dde
