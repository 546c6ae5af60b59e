#include "ccfm/dde/history.hpp"

#include <cmath>
#include <stdexcept>

namespace ccfm::dde {

HistoryBuffer::HistoryBuffer(double step, double span, core::PlatoonState pre_history)
    : step_(step), pre_history_(std::move(pre_history)) {
    const auto needed = static_cast<std::size_t>(std::ceil(span / step)) + 3;
    slots_.resize(needed);
}

void HistoryBuffer::push(const core::PlatoonState& state) {
    ++newest_;
    auto& s = slots_[static_cast<std::size_t>(newest_) % slots_.size()];
    s.state = state;
    s.derivative.v.assign(state.size(), 0.0);
    s.derivative.y.assign(state.size(), 0.0);
}

void HistoryBuffer::set_newest_derivative(const core::PlatoonState& derivative) {
    slots_[static_cast<std::size_t>(newest_) % slots_.size()].derivative = derivative;
}

const HistoryBuffer::Slot& HistoryBuffer::slot(std::int64_t index) const {
    if (index > newest_ || index <= newest_ - static_cast<std::int64_t>(slots_.size()))
        throw std::out_of_range("history index outside the buffered window");
    return slots_[static_cast<std::size_t>(index) % slots_.size()];
}

const core::PlatoonState& HistoryBuffer::at(std::int64_t index) const {
    if (index < 0) return pre_history_;
    return slot(index).state;
}

void HistoryBuffer::interpolate(double t, core::PlatoonState& out) const {
    if (t < 0.0) {
        out = pre_history_;
        return;
    }
    const double position = t / step_;
    const double nearest = std::round(position);
    if (std::abs(position - nearest) < 1e-9) {
        out = at(static_cast<std::int64_t>(nearest));
        return;
    }
    const auto j = static_cast<std::int64_t>(std::floor(position));
    const Slot& a = slot(j);
    const Slot& b = slot(j + 1);
    const double s = position - static_cast<double>(j);
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    const std::size_t n = a.state.size();
    out.v.resize(n);
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.v[i] = h00 * a.state.v[i] + h10 * step_ * a.derivative.v[i] + h01 * b.state.v[i] +
                   h11 * step_ * b.derivative.v[i];
        out.y[i] = h00 * a.state.y[i] + h10 * step_ * a.derivative.y[i] + h01 * b.state.y[i] +
                   h11 * step_ * b.derivative.y[i];
    }
}

} // namespace ccfm::dde
