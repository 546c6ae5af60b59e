#include "ccfm/hopf/delay_system.hpp"

#include "ccfm/errors.hpp"

#include <cmath>

namespace ccfm::hopf {

StateFunction::StateFunction(cplx mu, VectorXcd coefficient) : dim_(coefficient.size()) {
    terms_.emplace_back(mu, std::move(coefficient));
}

StateFunction& StateFunction::add(cplx mu, const VectorXcd& coefficient) {
    if (dim_ == 0) dim_ = coefficient.size();
    terms_.emplace_back(mu, coefficient);
    return *this;
}

VectorXcd StateFunction::operator()(double theta) const {
    VectorXcd out = VectorXcd::Zero(static_cast<Eigen::Index>(dim_));
    for (const auto& [mu, c] : terms_) out += c * std::exp(mu * theta);
    return out;
}

StateFunction StateFunction::conjugate() const {
    StateFunction out(dim_);
    for (const auto& [mu, c] : terms_) out.add(std::conj(mu), c.conjugate());
    return out;
}

StateFunction StateFunction::derivative() const {
    StateFunction out(dim_);
    for (const auto& [mu, c] : terms_) out.add(mu, mu * c);
    return out;
}

namespace {

// d^k/ds^k (x0 - s)^m at s = 0
double velocity_derivative(double x0, double m, int k) {
    switch (k) {
    case 0: return std::pow(x0, m);
    case 1: return -m * std::pow(x0, m - 1.0);
    default: return m * (m - 1.0) * std::pow(x0, m - 2.0);
    }
}

} // namespace

DelaySystem::DelaySystem(const core::PlatoonConfig& config)
    : config_(config), n_(config.size()), beta_(core::beta_star(config).beta_star) {
    const double x0 = config.leader.v_eq;
    const double m = config.m;
    const double l = config.l;
    a0_ = velocity_derivative(x0, m, 0);
    a1_ = velocity_derivative(x0, m, 1);
    a2_ = velocity_derivative(x0, m, 2);
    for (const auto& veh : config.vehicles) {
        c0_.push_back(std::pow(veh.b, -l));
        c1_.push_back(-l * std::pow(veh.b, -l - 1.0));
        c2_.push_back(l * (l + 1.0) * std::pow(veh.b, -l - 2.0));
    }
}

MatrixXcd DelaySystem::delay_matrix(cplx lambda) const {
    const auto n = static_cast<Eigen::Index>(n_);
    MatrixXcd out = MatrixXcd::Zero(2 * n, 2 * n);
    const double k = config_.kappa;
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx g = k * beta_[i] * std::exp(-lambda * config_.vehicles[i].tau);
        out(i, i) = -g;
        if (i + 1 < n) out(i + 1, i) = g;
        out(n + i, i) = k;
    }
    return out;
}

MatrixXcd DelaySystem::characteristic_matrix(cplx lambda) const {
    const auto d = static_cast<Eigen::Index>(dim());
    return lambda * MatrixXcd::Identity(d, d) - delay_matrix(lambda);
}

MatrixXcd DelaySystem::characteristic_derivative(cplx lambda) const {
    const auto n = static_cast<Eigen::Index>(n_);
    MatrixXcd out = MatrixXcd::Identity(2 * n, 2 * n);
    const double k = config_.kappa;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double tau = config_.vehicles[i].tau;
        const cplx g = k * beta_[i] * tau * std::exp(-lambda * tau);
        out(i, i) -= g;
        if (i + 1 < n) out(i + 1, i) += g;
    }
    return out;
}

VectorXcd DelaySystem::apply_linear(const StateFunction& f) const {
    VectorXcd out = VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
    for (const auto& [mu, c] : f.terms()) out += delay_matrix(mu) * c;
    return out;
}

DelaySystem::Sample DelaySystem::sample(const VectorXcd& x, std::size_t pair) const {
    Sample s{x(static_cast<Eigen::Index>(pair)), 0.0, x(static_cast<Eigen::Index>(n_ + pair))};
    for (std::size_t k = 0; k <= pair; ++k) s.s += x(static_cast<Eigen::Index>(k));
    return s;
}

cplx DelaySystem::d2g(std::size_t j, const Sample& u1, const Sample& u2) const {
    const double ka = config_.kappa * config_.vehicles[j].alpha;
    const double as = a1_ * c0_[j];
    const double ay = a0_ * c1_[j];
    return ka * (u1.v * (as * u2.s + ay * u2.y) + u2.v * (as * u1.s + ay * u1.y));
}

cplx DelaySystem::d3g(std::size_t j, const Sample& u1, const Sample& u2, const Sample& u3) const {
    const double ka = config_.kappa * config_.vehicles[j].alpha;
    const double ss = a2_ * c0_[j];
    const double sy = a1_ * c1_[j];
    const double yy = a0_ * c2_[j];
    auto term = [&](const Sample& p, const Sample& q, const Sample& r) {
        return p.v * (ss * q.s * r.s + sy * (q.s * r.y + r.s * q.y) + yy * q.y * r.y);
    };
    return ka * (term(u1, u2, u3) + term(u2, u1, u3) + term(u3, u1, u2));
}

VectorXcd DelaySystem::quadratic(const StateFunction& f1, const StateFunction& f2) const {
    VectorXcd out = VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t j = 0; j < n_; ++j) {
        const double theta = -config_.vehicles[j].tau;
        const cplx g = d2g(j, sample(f1(theta), j), sample(f2(theta), j));
        out(static_cast<Eigen::Index>(j)) -= g;
        if (j + 1 < n_) out(static_cast<Eigen::Index>(j + 1)) += g;
    }
    return out;
}

VectorXcd DelaySystem::cubic(const StateFunction& f1, const StateFunction& f2,
                             const StateFunction& f3) const {
    VectorXcd out = VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t j = 0; j < n_; ++j) {
        const double theta = -config_.vehicles[j].tau;
        const cplx g = d3g(j, sample(f1(theta), j), sample(f2(theta), j), sample(f3(theta), j));
        out(static_cast<Eigen::Index>(j)) -= g;
        if (j + 1 < n_) out(static_cast<Eigen::Index>(j + 1)) += g;
    }
    return out;
}

} // namespace ccfm::hopf
