#include "ccfm/dde/history.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

using namespace ccfm;
using Catch::Approx;

namespace {

core::PlatoonState scalar(double v, double y = 0.0) { return core::PlatoonState({v}, {y}); }

} // namespace

TEST_CASE("negative indices and times resolve to the pre-history", "[history]") {
    dde::HistoryBuffer h(0.1, 0.5, scalar(0.25, -1.0));
    CHECK(h.newest() == -1);
    CHECK(h.at(-3).v[0] == 0.25);
    core::PlatoonState out;
    h.interpolate(-0.37, out);
    CHECK(out.v[0] == 0.25);
    CHECK(out.y[0] == -1.0);
}

TEST_CASE("ring keeps the delay window and forgets older samples", "[history]") {
    dde::HistoryBuffer h(0.1, 0.5, scalar(0.0));
    const auto cap = static_cast<std::int64_t>(h.capacity());
    CHECK(cap >= 6);
    for (int k = 0; k < 40; ++k) h.push(scalar(k));
    CHECK(h.newest() == 39);
    CHECK(h.at(39).v[0] == 39);
    CHECK(h.at(39 - cap + 1).v[0] == 39 - cap + 1);
    CHECK_THROWS_AS(h.at(39 - cap), std::out_of_range);
    CHECK_THROWS_AS(h.at(40), std::out_of_range);
}

TEST_CASE("grid times return the stored sample", "[history]") {
    dde::HistoryBuffer h(0.01, 0.5, scalar(0.0));
    for (int k = 0; k < 30; ++k) h.push(scalar(std::sin(k * 0.01)));
    core::PlatoonState out;
    h.interpolate(0.17, out);
    CHECK(out.v[0] == std::sin(17 * 0.01));
}

TEST_CASE("Hermite interpolation is exact for cubics", "[history]") {
    const double step = 0.05;
    auto f = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t - 3.0 * t * t * t; };
    auto df = [](double t) { return -2.0 + t - 9.0 * t * t; };
    dde::HistoryBuffer h(step, 1.0, scalar(f(0.0)));
    for (int k = 0; k < 20; ++k) {
        const double t = k * step;
        h.push(scalar(f(t), 2.0 * f(t)));
        h.set_newest_derivative(scalar(df(t), 2.0 * df(t)));
    }
    core::PlatoonState out;
    for (double t = 0.33; t < 0.9; t += 0.071) {
        h.interpolate(t, out);
        CHECK(out.v[0] == Approx(f(t)).epsilon(1e-13));
        CHECK(out.y[0] == Approx(2.0 * f(t)).epsilon(1e-13));
    }
}

TEST_CASE("Hermite interpolation error is fourth order", "[history]") {
    auto err = [](double step) {
        dde::HistoryBuffer h(step, 2.0, scalar(0.0));
        for (int k = 0; k * step <= 1.0 + 1e-12; ++k) {
            h.push(scalar(std::sin(3.0 * k * step)));
            h.set_newest_derivative(scalar(3.0 * std::cos(3.0 * k * step)));
        }
        double worst = 0.0;
        core::PlatoonState out;
        for (double t = 0.1 + 0.37 * step; t < 0.9; t += step) {
            h.interpolate(t, out);
            worst = std::max(worst, std::abs(out.v[0] - std::sin(3.0 * t)));
        }
        return worst;
    };
    const double order = std::log2(err(0.02) / err(0.01));
    CHECK(order > 3.7);
}
