#pragma once

#include "ccfm/dde/integrator.hpp"

#include <cstddef>
#include <vector>

namespace ccfm::dde {

struct SettlingReport {
    /// t_i^e per pair; +inf when the pair never stays inside the band.
    std::vector<double> per_pair;
    std::vector<bool> settled;
    double T_e = 0.0;
    double epsilon = 0.0;

    bool all_settled() const noexcept;
};

/// First time after which max(|v_i|, |y_i|) stays within epsilon for the rest
/// of the horizon. Throws InvalidConfig for epsilon <= 0.
SettlingReport settling_time(const Trajectory& trajectory, double epsilon = 0.05);

enum class Signal { V, Y };

/// Half the peak-to-peak excursion of each v_i over the final tail of the
/// horizon. Throws InvalidConfig when the tail holds fewer than 10 samples.
std::vector<double> amplitude_envelope(const Trajectory& trajectory, double tail_fraction = 0.25);

/// Half peak-to-peak of one signal over the samples with t in [t0, t1].
double window_amplitude(const Trajectory& trajectory, Signal signal, std::size_t pair, double t0,
                        double t1);

} // namespace ccfm::dde
