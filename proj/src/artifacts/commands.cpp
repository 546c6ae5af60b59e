#include "ccfm/artifacts/commands.hpp"

#include "ccfm/dde/trajectory_analysis.hpp"
#include "ccfm/errors.hpp"
#include "ccfm/hopf/normal_form.hpp"
#include "ccfm/rate/convergence_rate.hpp"
#include "ccfm/spectral/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace ccfm::artifacts {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidConfig("cannot write " + path.string());
    out << content;
}

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    return out;
}

std::string pair_column(const char* prefix, std::size_t i) { return prefix + std::to_string(i + 1); }

} // namespace

void emit(const Artifacts& a, const std::optional<std::string>& dir) {
    if (!dir) {
        if (a.json)
            std::cout << a.json->dump(2) << '\n';
        else if (a.csv)
            a.csv->write(std::cout);
        return;
    }
    const std::filesystem::path root(*dir);
    std::filesystem::create_directories(root);
    if (a.csv) write_file(root / (a.command + ".csv"), a.csv->str());
    if (a.csv && a.chart) write_file(root / (a.command + ".svg"), render_chart(*a.csv, *a.chart));
    if (a.json) write_file(root / (a.command + ".json"), a.json->dump(2) + "\n");
}

Range parse_range(const std::string& text) {
    const auto colon = text.find(':');
    Range r;
    try {
        if (colon == std::string::npos) throw std::invalid_argument(text);
        std::size_t used = 0;
        r.lo = std::stod(text.substr(0, colon), &used);
        r.hi = std::stod(text.substr(colon + 1), &used);
    } catch (const std::exception&) {
        throw InvalidConfig("range must look like lo:hi, got '" + text + "'");
    }
    if (!(r.lo < r.hi)) throw InvalidConfig("range needs lo < hi, got '" + text + "'");
    return r;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidConfig("not a number in list: '" + item + "'");
        }
    }
    return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned jobs) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

dde::SimConfig sim_config(const RunOptions& o) {
    dde::SimConfig sc;
    sc.step = o.step;
    sc.horizon = o.horizon;
    sc.method = o.method;
    return sc;
}

core::PlatoonState default_perturbation(const core::PlatoonConfig& config, const RunOptions& o) {
    return core::PlatoonState::uniform(config.size(), o.v0, o.y0);
}

Artifacts cmd_simulate(const core::PlatoonConfig& config, const RunOptions& options) {
    const core::PlatoonConfig pc = options.kappa ? config.with_kappa(*options.kappa) : config;
    const auto traj = dde::simulate(pc, sim_config(options), default_perturbation(pc, options));

    std::vector<std::string> header{"t"};
    ChartSpec chart;
    for (std::size_t i = 0; i < pc.size(); ++i) header.push_back(pair_column("v_", i));
    for (std::size_t i = 0; i < pc.size(); ++i) header.push_back(pair_column("y_", i));
    chart.y.assign(header.begin() + 1, header.end());
    Table table(header);
    std::vector<Cell> row(header.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        row[0] = traj.time(k);
        const auto values = traj.row(k);
        for (std::size_t c = 0; c < values.size(); ++c) row[c + 1] = values[c];
        table.add_row(row);
    }
    chart.kind = ChartKind::Timeseries;
    chart.title = "Relative velocities and headway deviations";
    chart.x = "t";
    chart.x_label = "t (s)";
    chart.y_label = "v (m/s), y (m)";
    return {"simulate", std::move(table), chart, std::nullopt};
}

Artifacts cmd_classify(const core::PlatoonConfig& config) {
    core::validate(config);
    const auto beta = core::beta_star(config);
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < config.size(); ++i) {
        const double b = config.kappa * beta[i];
        const double tau = config.vehicles[i].tau;
        out.push_back(spectral::verdict_json(i + 1, b, tau, spectral::classify_pair(b, tau)));
    }
    return {"classify", std::nullopt, std::nullopt, out};
}

Artifacts cmd_stability_chart(const StabilityChartOptions& o) {
    if (!(o.b > 0.0) || !(o.c > 0.0)) throw InvalidConfig("stability chart needs b > 0 and c > 0");
    if (o.points < 2) throw InvalidConfig("stability chart needs at least 2 points");
    Table table({"l", "m", "x0dot", "curve", "stable_side"});
    for (double l : o.l_set) {
        if (!(l >= 0.0)) throw InvalidConfig("l must be >= 0");
        const double bound = std::numbers::pi * std::pow(o.b, l) / (2.0 * o.c);
        for (double m : linspace(o.m_range.lo, o.m_range.hi, o.points)) {
            if (std::abs(m) < 1e-12) continue;
            const bool pos = m > 0.0;
            std::ostringstream curve;
            curve << "l=" << format_number(l) << (pos ? "|m>0" : "|m<0");
            table.add_row({l, m, std::pow(bound, 1.0 / m), curve.str(), std::string(pos ? "below" : "above")});
        }
    }
    ChartSpec chart;
    chart.kind = ChartKind::StabilityRegion;
    chart.title = "Hopf boundary xdot0^m / b^l = pi/(2c)";
    chart.x = "m";
    chart.y = {"x0dot"};
    chart.group = "curve";
    chart.x_label = "m";
    chart.y_label = "equilibrium velocity (m/s)";
    chart.y_min = 0.0;
    chart.y_max = o.x0_max;
    nlohmann::json meta = {{"b", o.b}, {"c", o.c}, {"l_set", o.l_set},
                           {"rule", "stable below the curve for m>0, above it for m<0"}};
    return {"stability-chart", std::move(table), chart, meta};
}

Artifacts cmd_rate(const RateOptions& o) {
    if (!(o.tau_range.lo > 0.0)) throw InvalidConfig("tau range must start above 0");
    if (o.points < 2) throw InvalidConfig("rate curve needs at least 2 points");
    const auto grid = linspace(o.tau_range.lo, o.tau_range.hi, o.points);
    const auto curve = rate::rate_curve(o.alpha, o.b, o.m, o.l_set, o.x0, grid);
    Table table({"l", "tau", "rate", "branch"});
    for (const auto& p : curve) table.add_row({p.l, p.tau, p.rate, rate::to_string(p.branch)});

    nlohmann::json peaks = nlohmann::json::array();
    for (double l : o.l_set) {
        const double beta = core::beta_star(o.alpha, o.x0, o.m, o.b, l);
        double best = -1.0, arg = std::nan("");
        for (const auto& p : curve)
            if (p.l == l && std::isfinite(p.rate) && p.rate > best) best = p.rate, arg = p.tau;
        peaks.push_back({{"l", l},
                         {"beta_star", beta},
                         {"tau_star", rate::optimal_delay(beta)},
                         {"argmax_tau", finite_or_null(arg)},
                         {"peak_rate", finite_or_null(best)}});
    }
    ChartSpec chart;
    chart.kind = ChartKind::RateCurve;
    chart.title = "Rate of convergence against reaction delay";
    chart.x = "tau";
    chart.y = {"rate"};
    chart.group = "l";
    chart.x_label = "tau (s)";
    chart.y_label = "decay rate (1/s)";
    chart.mark_peak = true;
    return {"rate", std::move(table), chart, nlohmann::json{{"peaks", peaks}}};
}

Artifacts cmd_bifurcation(const core::PlatoonConfig& config, const BifurcationOptions& o) {
    core::validate(config);
    if (o.points < 2) throw InvalidConfig("bifurcation sweep needs at least 2 points");
    const auto kappas = linspace(o.kappa_range.lo, o.kappa_range.hi, o.points);
    const std::vector<double> ls = o.l_set.empty() ? std::vector<double>{config.l} : o.l_set;
    const std::size_t n = config.size();

    std::vector<std::vector<double>> amplitudes(ls.size() * kappas.size());
    const dde::SimConfig sc = sim_config(o.run);
    parallel_for(
        amplitudes.size(),
        [&](std::size_t job) {
            core::PlatoonConfig pc = config.with_kappa(kappas[job % kappas.size()]);
            pc.l = ls[job / kappas.size()];
            const auto traj = dde::simulate(pc, sc, default_perturbation(pc, o.run));
            amplitudes[job] = dde::amplitude_envelope(traj, o.tail_fraction);
        },
        o.jobs);

    std::vector<std::string> header{"l", "kappa"};
    for (std::size_t i = 0; i < n; ++i) header.push_back(pair_column("amplitude_", i));
    Table table(header);
    for (std::size_t job = 0; job < amplitudes.size(); ++job) {
        std::vector<Cell> row{ls[job / kappas.size()], kappas[job % kappas.size()]};
        for (double a : amplitudes[job]) row.emplace_back(a);
        table.add_row(row);
    }
    ChartSpec chart;
    chart.kind = ChartKind::Bifurcation;
    chart.title = "Steady-state amplitude of relative velocity";
    chart.x = "kappa";
    chart.y.assign(header.begin() + 2, header.end());
    chart.group = "l";
    chart.x_label = "kappa";
    chart.y_label = "amplitude (m/s)";
    return {"bifurcation", std::move(table), chart, std::nullopt};
}

Artifacts cmd_hopf(const core::PlatoonConfig& config, std::size_t pair, bool with_vectors) {
    core::validate(config);
    std::size_t k = 0;
    if (pair == 0) {
        const auto beta = core::beta_star(config);
        for (std::size_t i = 1; i < config.size(); ++i)
            if (beta[i] * config.vehicles[i].tau > beta[k] * config.vehicles[k].tau) k = i;
    } else {
        if (pair > config.size()) throw InvalidConfig("--pair exceeds the number of pairs");
        k = pair - 1;
    }
    const auto report = hopf::hopf_report(config, k);
    return {"hopf", std::nullopt, std::nullopt, hopf::to_json(report, with_vectors)};
}

Artifacts cmd_settling(const core::PlatoonConfig& config, const RunOptions& options, double epsilon) {
    const core::PlatoonConfig pc = options.kappa ? config.with_kappa(*options.kappa) : config;
    const auto traj = dde::simulate(pc, sim_config(options), default_perturbation(pc, options));
    const auto rep = dde::settling_time(traj, epsilon);
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.per_pair.size(); ++i)
        pairs.push_back({{"pair", i + 1}, {"t_e", finite_or_null(rep.per_pair[i])}, {"settled", bool(rep.settled[i])}});
    nlohmann::json out = {{"epsilon", rep.epsilon},
                          {"T_e", finite_or_null(rep.T_e)},
                          {"all_settled", rep.all_settled()},
                          {"horizon", options.horizon},
                          {"pairs", pairs}};
    return {"settling", std::nullopt, std::nullopt, out};
}

} // namespace ccfm::artifacts
