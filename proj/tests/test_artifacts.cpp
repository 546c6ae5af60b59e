#include "ccfm/artifacts/commands.hpp"
#include "ccfm/core/config_io.hpp"
#include "ccfm/errors.hpp"

#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace ccfm;
using namespace ccfm::artifacts;
using Catch::Approx;

namespace fs = std::filesystem;

namespace {

std::string config_path(const char* name) { return std::string(CCFM_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ccfm_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CCFM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("table round trip is lossless", "[artifacts]") {
    Table t({"x", "name", "y"});
    t.add_row({0.1, std::string("a"), 1.0 / 3.0});
    t.add_row({-1e-300, std::string("b"), std::numeric_limits<double>::infinity()});
    t.add_row({std::nan(""), std::string("c"), 12345678.901234567});
    const Table back = Table::parse(t.str());
    CHECK(back.header() == t.header());
    REQUIRE(back.rows() == 3);
    const auto x = back.numeric("x"), y = back.numeric("y");
    CHECK(x[0] == 0.1);
    CHECK(x[1] == -1e-300);
    CHECK(std::isnan(x[2]));
    CHECK(y[0] == 1.0 / 3.0);
    CHECK(std::isinf(y[1]));
    CHECK(y[2] == 12345678.901234567);
    CHECK(back.text("name") == std::vector<std::string>{"a", "b", "c"});
    CHECK(std::isnan(back.numeric("name")[0]));
    CHECK(back.str() == t.str());
}

TEST_CASE("table errors", "[artifacts][errors]") {
    Table t({"a", "b"});
    CHECK_THROWS(t.add_row({1.0}));
    CHECK_FALSE(t.has_column("c"));
    CHECK_THROWS(t.column_index("c"));
}

TEST_CASE("chart needs its columns", "[artifacts][errors]") {
    Table t({"x", "y"});
    t.add_row({0.0, 1.0});
    ChartSpec spec;
    spec.x = "x";
    spec.y = {"z"};
    CHECK_THROWS_AS(check_columns(t, spec), std::invalid_argument);
    CHECK_THROWS_AS(render_chart(t, spec), std::invalid_argument);
    spec.y = {"y"};
    spec.group = "g";
    CHECK_THROWS_AS(render_chart(t, spec), std::invalid_argument);
}

TEST_CASE("chart is regenerated from the written csv alone", "[artifacts]") {
    RateOptions o;
    o.points = 50;
    const auto a = cmd_rate(o);
    const fs::path dir = scratch("rate");
    emit(a, dir.string());
    const std::string svg = slurp(dir / "rate.svg");
    std::ifstream csv(dir / "rate.csv");
    const Table reread = Table::read(csv);
    CHECK(render_chart(reread, *a.chart) == svg);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(fs::exists(dir / "rate.json"));
}

TEST_CASE("outputs are byte-identical across runs", "[artifacts][property]") {
    auto pc = core::load_config(config_path("four_vehicle.json"));
    RunOptions ro;
    ro.horizon = 20;
    const fs::path d1 = scratch("det1"), d2 = scratch("det2");
    emit(cmd_simulate(pc, ro), d1.string());
    emit(cmd_simulate(pc, ro), d2.string());
    CHECK(slurp(d1 / "simulate.csv") == slurp(d2 / "simulate.csv"));
    CHECK(slurp(d1 / "simulate.svg") == slurp(d2 / "simulate.svg"));

    BifurcationOptions bo;
    bo.points = 4;
    bo.run.horizon = 10;
    bo.jobs = 1;
    const auto serial = cmd_bifurcation(pc, bo);
    bo.jobs = 4;
    const auto pooled = cmd_bifurcation(pc, bo);
    CHECK(serial.csv->str() == pooled.csv->str());
}

TEST_CASE("simulate table layout", "[artifacts]") {
    auto pc = core::load_config(config_path("four_vehicle.json"));
    RunOptions ro;
    ro.horizon = 1;
    const auto a = cmd_simulate(pc, ro);
    CHECK(a.csv->header() ==
          std::vector<std::string>{"t", "v_1", "v_2", "v_3", "v_4", "y_1", "y_2", "y_3", "y_4"});
    CHECK(a.csv->rows() == 101);
    CHECK(a.csv->numeric("v_1")[0] == 0.1);
}

TEST_CASE("classify the four-vehicle platoon", "[artifacts]") {
    const auto pc = core::load_config(config_path("four_vehicle.json"));
    const auto j = *cmd_classify(pc).json;
    REQUIRE(j.size() == 4);
    CHECK(j[0]["regime"] == "OscillatoryStable");
    CHECK(j[1]["regime"] == "OscillatoryStable");
    CHECK(j[2]["regime"] == "Unstable");
    CHECK(j[3]["regime"] == "OscillatoryStable");
    CHECK(j[2]["pair"] == 3);

    auto zero = pc;
    for (auto& v : zero.vehicles) v.tau = 0.0;
    const auto all = *cmd_classify(zero).json;
    for (const auto& e : all) CHECK(e["regime"] == "NonOscillatoryStable");
}

TEST_CASE("stable region against the headway exponent", "[artifacts][property]") {
    auto boundary = [](double b, double l, double m) {
        StabilityChartOptions o;
        o.b = b;
        o.l_set = {l};
        o.m_range = {m, m + 1e-3};
        o.points = 2;
        return cmd_stability_chart(o).csv->numeric("x0dot")[0];
    };
    for (double m : {0.5, 1.0, 2.0}) {
        CHECK(boundary(20, 1.0, m) > boundary(20, 0.5, m));
        CHECK(boundary(20, 0.5, m) > boundary(20, 0.0, m));
        CHECK(boundary(0.5, 1.0, m) < boundary(0.5, 0.0, m));
        CHECK(boundary(0.5, 0.0, m) == boundary(20, 0.0, m));
    }
    // m < 0: stable side is above the curve and a larger l lowers it
    CHECK(boundary(20, 1.0, -1.0) < boundary(20, 0.0, -1.0));

    StabilityChartOptions o;
    const auto a = cmd_stability_chart(o);
    const auto m = a.csv->numeric("m");
    for (double x : m) CHECK(x != 0.0);
    CHECK(a.csv->rows() == 3 * 200);
    const auto side = a.csv->text("stable_side");
    for (std::size_t k = 0; k < m.size(); ++k) CHECK(side[k] == (m[k] > 0 ? "below" : "above"));
}

TEST_CASE("rate command", "[artifacts]") {
    RateOptions o;
    const auto a = cmd_rate(o);
    CHECK(a.csv->rows() == 3 * 400);
    const auto peaks = (*a.json)["peaks"];
    REQUIRE(peaks.size() == 3);
    const double step = (0.3 - 0.001) / 399;
    for (const auto& p : peaks)
        CHECK(std::abs(p["argmax_tau"].get<double>() - p["tau_star"].get<double>()) <= step);

    o.l_set = {};
    const auto empty = cmd_rate(o);
    CHECK(empty.csv->rows() == 0);
    CHECK(empty.csv->str() == "l,tau,rate,branch\n");

    o.l_set = {1.0};
    o.tau_range = {0.0, 0.3};
    CHECK_THROWS_AS(cmd_rate(o), InvalidConfig);
}

TEST_CASE("settling report", "[artifacts]") {
    auto pc = core::load_config(config_path("settled_linear.json"));
    RunOptions ro;
    ro.horizon = 60;
    const auto j = *cmd_settling(pc, ro, 0.05).json;
    CHECK(j["pairs"].size() == pc.size());
    CHECK(j["epsilon"] == 0.05);
    if (j["all_settled"].get<bool>()) CHECK(j["T_e"].is_number());
}

TEST_CASE("range and list parsing", "[artifacts][errors]") {
    const auto r = parse_range("1:1.05");
    CHECK(r.lo == 1.0);
    CHECK(r.hi == 1.05);
    CHECK_THROWS_AS(parse_range("2:1"), InvalidConfig);
    CHECK_THROWS_AS(parse_range("abc"), InvalidConfig);
    CHECK(parse_list("0.8, 1,1.2") == std::vector<double>{0.8, 1.0, 1.2});
    CHECK(parse_list("").empty());
    CHECK_THROWS_AS(parse_list("1,x"), InvalidConfig);
}

TEST_CASE("parallel_for covers every index and rethrows", "[artifacts]") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += static_cast<int>(i); }, 4);
    for (std::size_t i = 0; i < hits.size(); ++i) CHECK(hits[i] == static_cast<int>(i));
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 3) throw DegenerateSpectrum("x"); }, 3),
                    DegenerateSpectrum);
}

TEST_CASE("cli exit codes", "[artifacts][cli]") {
    const fs::path dir = scratch("cli");
    CHECK(run_cli("classify --config " + config_path("four_vehicle.json")) == 0);
    CHECK(run_cli("hopf --config " + config_path("single_follower.json") + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "hopf.json"));
    CHECK(run_cli("rate --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "rate.svg"));

    CHECK(run_cli("classify --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("simulate --config " + config_path("four_vehicle.json") + " --ts 0.5") == 2);
    CHECK(run_cli("rate --tau-range 3:1") == 2);
    CHECK(run_cli("frobnicate") == 2);

    // a large initial push collapses a short headway
    std::ofstream(dir / "crash.json")
        << R"({"N":1,"vehicles":[{"alpha":0.5,"tau":0.2,"b":1}],"m":0,"l":1,"leader":{"v_eq":10,"ramp":null}})";
    CHECK(run_cli("simulate --config " + (dir / "crash.json").string() + " --v0 -2 --tmax 5") == 3);
}
