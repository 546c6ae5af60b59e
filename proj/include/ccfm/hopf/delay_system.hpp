#pragma once

// Linear part and Taylor multilinear forms of the delayed platoon system about
// the uniform-flow equilibrium, acting on complex state functions on [-tau_max, 0].
// State order is (v_1..v_N, y_1..y_N).

#include "ccfm/core/platoon.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace ccfm::hopf {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Finite sum of exponentials  theta -> sum_k c_k exp(mu_k theta).
class StateFunction {
  public:
    StateFunction() = default;
    explicit StateFunction(std::size_t dim) : dim_(dim) {}
    StateFunction(cplx mu, VectorXcd coefficient);

    StateFunction& add(cplx mu, const VectorXcd& coefficient);
    VectorXcd operator()(double theta) const;
    StateFunction conjugate() const;
    StateFunction derivative() const;

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::pair<cplx, VectorXcd>>& terms() const noexcept { return terms_; }

  private:
    std::size_t dim_ = 0;
    std::vector<std::pair<cplx, VectorXcd>> terms_;
};

class DelaySystem {
  public:
    /// Expansion about the equilibrium with a settled leader at v_eq.
    explicit DelaySystem(const core::PlatoonConfig& config);

    std::size_t pairs() const noexcept { return n_; }
    std::size_t dim() const noexcept { return 2 * n_; }
    const core::PlatoonConfig& config() const noexcept { return config_; }
    const std::vector<double>& beta() const noexcept { return beta_; }

    /// M(lambda) = sum_k A_k exp(-lambda tau_k).
    MatrixXcd delay_matrix(cplx lambda) const;
    /// Delta(lambda) = lambda I - M(lambda).
    MatrixXcd characteristic_matrix(cplx lambda) const;
    /// d Delta / d lambda.
    MatrixXcd characteristic_derivative(cplx lambda) const;

    /// Linear right-hand side applied to a state function.
    VectorXcd apply_linear(const StateFunction& f) const;

    /// Second and third derivatives of the vector field at the equilibrium.
    VectorXcd quadratic(const StateFunction& f1, const StateFunction& f2) const;
    VectorXcd cubic(const StateFunction& f1, const StateFunction& f2, const StateFunction& f3) const;

  private:
    struct Sample {
        cplx v, s, y; // own relative velocity, cumulative sum, headway deviation
    };
    Sample sample(const VectorXcd& x, std::size_t pair) const;
    cplx d2g(std::size_t pair, const Sample& u1, const Sample& u2) const;
    cplx d3g(std::size_t pair, const Sample& u1, const Sample& u2, const Sample& u3) const;

    core::PlatoonConfig config_;
    std::size_t n_;
    std::vector<double> beta_;
    double a0_, a1_, a2_;
    std::vector<double> c0_, c1_, c2_;
};

} // namespace ccfm::hopf
