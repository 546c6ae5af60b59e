#include "ccfm/dde/trajectory_analysis.hpp"

#include "ccfm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccfm::dde {

bool SettlingReport::all_settled() const noexcept {
    return std::all_of(settled.begin(), settled.end(), [](bool s) { return s; });
}

SettlingReport settling_time(const Trajectory& trajectory, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidConfig("settling band epsilon must be > 0");
    SettlingReport out;
    out.epsilon = epsilon;
    const std::size_t rows = trajectory.size();
    for (std::size_t i = 0; i < trajectory.pairs(); ++i) {
        std::size_t k = rows;
        while (k > 0 && std::max(std::abs(trajectory.v(k - 1, i)), std::abs(trajectory.y(k - 1, i))) <=
                            epsilon)
            --k;
        // k is the first index of the trailing in-band run
        const bool ok = k < rows;
        out.settled.push_back(ok);
        out.per_pair.push_back(ok ? trajectory.time(k) : std::numeric_limits<double>::infinity());
    }
    out.T_e = out.per_pair.empty() ? 0.0 : *std::max_element(out.per_pair.begin(), out.per_pair.end());
    return out;
}

double window_amplitude(const Trajectory& trajectory, Signal signal, std::size_t pair, double t0,
                        double t1) {
    const double h = trajectory.step();
    const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(t0 / h - 1e-9)));
    const auto last = std::min(trajectory.size() - 1, static_cast<std::size_t>(std::floor(t1 / h + 1e-9)));
    if (first > last || last - first + 1 < 10)
        throw InvalidConfig("amplitude window holds fewer than 10 samples");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = first; k <= last; ++k) {
        const double x = signal == Signal::V ? trajectory.v(k, pair) : trajectory.y(k, pair);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return 0.5 * (hi - lo);
}

std::vector<double> amplitude_envelope(const Trajectory& trajectory, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw InvalidConfig("tail_fraction must lie in (0, 1]");
    const double t_end = trajectory.time(trajectory.size() - 1);
    const double t0 = t_end * (1.0 - tail_fraction);
    std::vector<double> out;
    out.reserve(trajectory.pairs());
    for (std::size_t i = 0; i < trajectory.pairs(); ++i)
        out.push_back(window_amplitude(trajectory, Signal::V, i, t0, t_end));
    return out;
}

} // namespace ccfm::dde
