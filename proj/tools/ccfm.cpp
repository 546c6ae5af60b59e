#include "ccfm/artifacts/commands.hpp"
#include "ccfm/core/config_io.hpp"
#include "ccfm/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace ccfm;
using namespace ccfm::artifacts;

namespace {

struct RunFlags {
    std::optional<double> kappa;
    std::string method = "euler";
    double ts = 0.01;
    double tmax = 300.0;
    double v0 = 0.1;
    double y0 = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--kappa", kappa, "Override the exogenous gain kappa");
        cmd->add_option("--method", method, "euler or rk4")->capture_default_str();
        cmd->add_option("--ts", ts, "Integration step (s)")->capture_default_str();
        cmd->add_option("--tmax", tmax, "Simulated horizon (s)")->capture_default_str();
        cmd->add_option("--v0", v0, "Initial relative velocity of every pair (m/s)")->capture_default_str();
        cmd->add_option("--y0", y0, "Initial headway deviation of every pair (m)")->capture_default_str();
    }

    RunOptions options() const {
        RunOptions o;
        o.kappa = kappa;
        o.method = dde::parse_method(method);
        o.step = ts;
        o.horizon = tmax;
        o.v0 = v0;
        o.y0 = y0;
        return o;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Car-following platoon stability, convergence and Hopf analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    auto with_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Platoon JSON document")->required();
    };
    auto with_out = [&](CLI::App* cmd) { cmd->add_option("--out", out_dir, "Output directory"); };

    RunFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Integrate the delayed platoon model");
    with_config(simulate);
    with_out(simulate);
    sim_flags.attach(simulate);

    auto* classify = app.add_subcommand("classify", "Stability regime of every pair");
    with_config(classify);
    with_out(classify);

    StabilityChartOptions chart_opts;
    std::string m_range = "-2:2", l_set_chart = "0,0.5,1";
    auto* chart = app.add_subcommand("stability-chart", "Hopf boundary in the (m, equilibrium velocity) plane");
    chart->add_option("--b", chart_opts.b, "Desired headway (m)")->capture_default_str();
    chart->add_option("--c", chart_opts.c, "Product alpha*tau")->capture_default_str();
    chart->add_option("--m-range", m_range, "lo:hi")->capture_default_str();
    chart->add_option("--l-set", l_set_chart, "Comma-separated headway exponents")->capture_default_str();
    chart->add_option("--points", chart_opts.points, "Grid points in m")->capture_default_str();
    chart->add_option("--x0-max", chart_opts.x0_max, "Upper limit of the plotted velocity axis")
        ->capture_default_str();
    with_out(chart);

    RateOptions rate_opts;
    std::string tau_range = "0.001:0.3", l_set_rate = "0.8,1,1.2";
    auto* rate = app.add_subcommand("rate", "Rate of convergence against delay");
    rate->add_option("--alpha", rate_opts.alpha)->capture_default_str();
    rate->add_option("--b", rate_opts.b)->capture_default_str();
    rate->add_option("--m", rate_opts.m)->capture_default_str();
    rate->add_option("--x0", rate_opts.x0, "Equilibrium velocity (m/s)")->capture_default_str();
    rate->add_option("--l-set", l_set_rate)->capture_default_str();
    rate->add_option("--tau-range", tau_range, "lo:hi with lo > 0")->capture_default_str();
    rate->add_option("--points", rate_opts.points)->capture_default_str();
    with_out(rate);

    BifurcationOptions bif_opts;
    RunFlags bif_flags;
    std::string kappa_range = "1:1.05", l_set_bif;
    auto* bif = app.add_subcommand("bifurcation", "Steady-state amplitude against kappa");
    with_config(bif);
    with_out(bif);
    bif->add_option("--kappa-range", kappa_range)->capture_default_str();
    bif->add_option("--points", bif_opts.points)->capture_default_str();
    bif->add_option("--method", bif_flags.method)->capture_default_str();
    bif->add_option("--ts", bif_flags.ts)->capture_default_str();
    bif->add_option("--tmax", bif_flags.tmax)->capture_default_str();
    bif->add_option("--tail", bif_opts.tail_fraction, "Fraction of the horizon used for amplitudes")
        ->capture_default_str();
    bif->add_option("--l-set", l_set_bif, "Sweep these headway exponents instead of the configured one");
    bif->add_option("--jobs", bif_opts.jobs, "Worker threads (0: all cores)")->capture_default_str();

    std::size_t hopf_pair = 0;
    bool vectors = false;
    auto* hopf = app.add_subcommand("hopf", "Normal-form coefficients at the Hopf point of a pair");
    with_config(hopf);
    with_out(hopf);
    hopf->add_option("--pair", hopf_pair, "1-based pair (default: largest beta* tau)");
    hopf->add_flag("--vectors", vectors, "Include eigenvectors, g-coefficients and corrections");

    RunFlags settle_flags;
    double epsilon = 0.05;
    auto* settling = app.add_subcommand("settling", "Settling time of every pair");
    with_config(settling);
    with_out(settling);
    settle_flags.attach(settling);
    settling->add_option("--epsilon", epsilon, "Band half-width")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Artifacts result;
        if (*simulate) {
            result = cmd_simulate(core::load_config(config_path), sim_flags.options());
        } else if (*classify) {
            result = cmd_classify(core::load_config(config_path));
        } else if (*chart) {
            chart_opts.m_range = parse_range(m_range);
            chart_opts.l_set = parse_list(l_set_chart);
            result = cmd_stability_chart(chart_opts);
        } else if (*rate) {
            rate_opts.l_set = parse_list(l_set_rate);
            rate_opts.tau_range = parse_range(tau_range);
            result = cmd_rate(rate_opts);
        } else if (*bif) {
            bif_opts.kappa_range = parse_range(kappa_range);
            bif_opts.l_set = parse_list(l_set_bif);
            bif_opts.run = bif_flags.options();
            result = cmd_bifurcation(core::load_config(config_path), bif_opts);
        } else if (*hopf) {
            result = cmd_hopf(core::load_config(config_path), hopf_pair, vectors);
        } else if (*settling) {
            result = cmd_settling(core::load_config(config_path), settle_flags.options(), epsilon);
        }
        emit(result, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "ccfm: configuration error: " << e.what() << '\n';
        return 2;
    } catch (const DomainBreakdown& e) {
        std::cerr << "ccfm: model breakdown: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "ccfm: numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "ccfm: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
