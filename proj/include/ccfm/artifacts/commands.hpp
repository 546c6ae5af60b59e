#pragma once

// Batch commands behind the `ccfm` executable. Each command returns its
// artifacts in memory; emit() writes them as <command>.csv/.svg/.json.

#include "ccfm/artifacts/svg.hpp"
#include "ccfm/artifacts/table.hpp"
#include "ccfm/core/platoon.hpp"
#include "ccfm/dde/integrator.hpp"

#include <json.hpp>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ccfm::artifacts {

struct Artifacts {
    std::string command;
    std::optional<Table> csv;
    std::optional<ChartSpec> chart;
    std::optional<nlohmann::json> json;
};

/// Writes the artifacts under `dir` (created if needed). Without a directory the
/// JSON (or else the CSV) goes to stdout.
void emit(const Artifacts& artifacts, const std::optional<std::string>& dir);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// "lo:hi" with lo < hi. Throws InvalidConfig.
Range parse_range(const std::string& text);
/// Comma-separated numbers; the empty string gives an empty list.
std::vector<double> parse_list(const std::string& text);

/// Runs fn(0..count-1) on a pool of worker threads; results stay in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned jobs = 0);

struct RunOptions {
    std::optional<double> kappa;
    dde::Method method = dde::Method::Euler;
    double step = 0.01;
    double horizon = 300.0;
    double v0 = 0.1;
    double y0 = 0.0;
};

dde::SimConfig sim_config(const RunOptions& options);
core::PlatoonState default_perturbation(const core::PlatoonConfig& config, const RunOptions& options);

Artifacts cmd_simulate(const core::PlatoonConfig& config, const RunOptions& options);

Artifacts cmd_classify(const core::PlatoonConfig& config);

struct StabilityChartOptions {
    double b = 20.0;
    double c = 0.7 * 3.141592653589793 / 7.0;
    Range m_range{-2.0, 2.0};
    std::vector<double> l_set{0.0, 0.5, 1.0};
    std::size_t points = 201;
    double x0_max = 50.0;
};

Artifacts cmd_stability_chart(const StabilityChartOptions& options);

struct RateOptions {
    double alpha = 0.7;
    double b = 20.0;
    double m = 2.0;
    double x0 = 10.0;
    std::vector<double> l_set{0.8, 1.0, 1.2};
    Range tau_range{0.001, 0.3};
    std::size_t points = 400;
};

Artifacts cmd_rate(const RateOptions& options);

struct BifurcationOptions {
    Range kappa_range{1.0, 1.05};
    std::size_t points = 51;
    RunOptions run;
    double tail_fraction = 0.25;
    std::vector<double> l_set; ///< empty: keep the configured l
    unsigned jobs = 0;
};

Artifacts cmd_bifurcation(const core::PlatoonConfig& config, const BifurcationOptions& options);

/// 1-based pair; 0 picks the pair with the largest beta* tau.
Artifacts cmd_hopf(const core::PlatoonConfig& config, std::size_t pair, bool with_vectors);

Artifacts cmd_settling(const core::PlatoonConfig& config, const RunOptions& options, double epsilon);

} // namespace ccfm::artifacts
