#include "ccfm/dde/integrator.hpp"

#include "ccfm/dde/history.hpp"
#include "ccfm/errors.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>

namespace ccfm::dde {

using core::PlatoonConfig;
using core::PlatoonState;

Method parse_method(const std::string& name) {
    if (name == "euler") return Method::Euler;
    if (name == "rk4") return Method::Rk4;
    throw InvalidConfig("unknown integration method '" + name + "' (expected euler or rk4)");
}

std::string to_string(Method method) { return method == Method::Euler ? "euler" : "rk4"; }

void validate(const SimConfig& sim, const PlatoonConfig& platoon) {
    if (!(sim.step > 0.0) || !std::isfinite(sim.step)) throw InvalidConfig("step must be > 0");
    if (!(sim.horizon > 0.0) || !std::isfinite(sim.horizon))
        throw InvalidConfig("horizon must be > 0");
    const double tau_min = platoon.min_positive_delay();
    if (tau_min > 0.0 && sim.step > tau_min * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "step " << sim.step << " exceeds the shortest positive delay " << tau_min;
        throw StepTooLarge(os.str());
    }
    if (sim.history_init && sim.history_init->size() != platoon.size())
        throw InvalidConfig("history_init has the wrong number of pairs");
}

Trajectory::Trajectory(PlatoonConfig config, double step, std::size_t reserve_rows)
    : config_(std::move(config)), step_(step), pairs_(config_.size()) {
    data_.reserve(reserve_rows * 2 * pairs_);
}

PlatoonState Trajectory::state(std::size_t k) const {
    PlatoonState out(pairs_);
    for (std::size_t i = 0; i < pairs_; ++i) {
        out.v[i] = v(k, i);
        out.y[i] = y(k, i);
    }
    return out;
}

void Trajectory::append(const PlatoonState& state) {
    data_.insert(data_.end(), state.v.begin(), state.v.end());
    data_.insert(data_.end(), state.y.begin(), state.y.end());
}

namespace {

class Stepper {
  public:
    Stepper(const PlatoonConfig& pc, const SimConfig& sc, const PlatoonState& pre)
        : pc_(pc), sc_(sc), n_(pc.size()), history_(sc.step, pc.max_delay(), pre),
          delayed_(n_, PlatoonState(n_)), beta_(sc.model == Model::Linear
                                                    ? core::beta_star(pc)
                                                    : core::EquilibriumCoefficients{}) {
        lags_.reserve(n_);
        for (const auto& veh : pc.vehicles)
            lags_.push_back(static_cast<std::int64_t>(std::ceil(veh.tau / sc.step - 1e-9)));
        for (auto* s : {&k1_, &k2_, &k3_, &k4_, &stage_}) *s = PlatoonState(n_);
    }

    void advance(std::int64_t n, PlatoonState& state) {
        history_.push(state);
        const double t = static_cast<double>(n) * sc_.step;
        if (sc_.method == Method::Euler) {
            for (std::size_t i = 0; i < n_; ++i)
                delayed_[i] = lags_[i] == 0 ? state : history_.at(n - lags_[i]);
            rhs(t, state, k1_);
            history_.set_newest_derivative(k1_);
            axpy(state, sc_.step, k1_, state);
            return;
        }
        const double h = sc_.step;
        stage(t, state, k1_);
        history_.set_newest_derivative(k1_);
        axpy(state, 0.5 * h, k1_, stage_);
        stage(t + 0.5 * h, stage_, k2_);
        axpy(state, 0.5 * h, k2_, stage_);
        stage(t + 0.5 * h, stage_, k3_);
        axpy(state, h, k3_, stage_);
        stage(t + h, stage_, k4_);
        for (std::size_t i = 0; i < n_; ++i) {
            state.v[i] += h / 6.0 * (k1_.v[i] + 2.0 * k2_.v[i] + 2.0 * k3_.v[i] + k4_.v[i]);
            state.y[i] += h / 6.0 * (k1_.y[i] + 2.0 * k2_.y[i] + 2.0 * k3_.y[i] + k4_.y[i]);
        }
    }

  private:
    void stage(double t, const PlatoonState& current, PlatoonState& out) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double tau = pc_.vehicles[i].tau;
            if (tau == 0.0)
                delayed_[i] = current;
            else
                history_.interpolate(t - tau, delayed_[i]);
        }
        rhs(t, current, out);
    }

    void rhs(double t, const PlatoonState& current, PlatoonState& out) {
        if (sc_.model == Model::Nonlinear) {
            core::nonlinear_rhs(t, current, delayed_, pc_, out);
            return;
        }
        double upstream = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double own = pc_.kappa * beta_[i] * delayed_[i].v[i];
            out.v[i] = upstream - own;
            out.y[i] = pc_.kappa * current.v[i];
            upstream = own;
        }
    }

    static void axpy(const PlatoonState& x, double a, const PlatoonState& d, PlatoonState& out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            out.v[i] = x.v[i] + a * d.v[i];
            out.y[i] = x.y[i] + a * d.y[i];
        }
    }

    const PlatoonConfig& pc_;
    const SimConfig& sc_;
    std::size_t n_;
    HistoryBuffer history_;
    std::vector<PlatoonState> delayed_;
    std::vector<std::int64_t> lags_;
    core::EquilibriumCoefficients beta_;
    PlatoonState k1_, k2_, k3_, k4_, stage_;
};

void check_state(double t, const PlatoonState& state, const PlatoonConfig& pc, Model model) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!std::isfinite(state.v[i]) || !std::isfinite(state.y[i])) {
            std::ostringstream os;
            os << "state of pair " << i + 1 << " became non-finite at t=" << t;
            throw NumericError(os.str());
        }
        if (model == Model::Nonlinear && !(state.y[i] + pc.vehicles[i].b > 0.0)) {
            std::ostringstream os;
            os << "headway of pair " << i + 1 << " collapsed to " << state.y[i] + pc.vehicles[i].b
               << " at t=" << t;
            throw DomainBreakdown(t, i + 1, os.str());
        }
    }
}

} // namespace

Trajectory simulate(const PlatoonConfig& platoon, const SimConfig& sim,
                    const PlatoonState& perturbation) {
    core::validate(platoon);
    validate(sim, platoon);
    if (perturbation.size() != platoon.size() || perturbation.y.size() != platoon.size())
        throw InvalidConfig("perturbation has the wrong number of pairs");

    const auto steps = static_cast<std::int64_t>(std::llround(sim.horizon / sim.step));
    Trajectory out(platoon, sim.step, static_cast<std::size_t>(steps) + 1);
    PlatoonState state = perturbation;
    check_state(0.0, state, platoon, sim.model);
    out.append(state);

    Stepper stepper(platoon, sim, sim.history_init.value_or(perturbation));
    for (std::int64_t n = 0; n < steps; ++n) {
        stepper.advance(n, state);
        check_state(static_cast<double>(n + 1) * sim.step, state, platoon, sim.model);
        out.append(state);
    }
    return out;
}

void write_csv(const Trajectory& trajectory, std::ostream& out) {
    const std::size_t n = trajectory.pairs();
    out << 't';
    for (std::size_t i = 1; i <= n; ++i) out << ",v_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",y_" << i;
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        out << trajectory.time(k);
        for (double x : trajectory.row(k)) out << ',' << x;
        out << '\n';
    }
}

} // namespace ccfm::dde
