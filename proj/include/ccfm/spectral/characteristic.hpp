#pragma once

// Roots of the scalar delayed characteristic equation
//   lambda + kappa * beta * exp(-lambda * tau) = 0.
// With u = lambda * tau this collapses to u e^u = -a, a = kappa * beta * tau,
// whose rightmost solution is the principal Lambert branch W0(-a).

#include <complex>

namespace ccfm::spectral {

using cplx = std::complex<double>;

/// 1/e in double precision. Products equal to this value are the double-root boundary.
inline constexpr double kInvE = 0.36787944117144233;

struct CharacteristicRoot {
    cplx lambda;
    double residual = 0.0; ///< |lambda + kappa beta e^{-lambda tau}|
};

/// Principal solution of u e^u = -a for a > 0, taken with Im u >= 0.
/// Real for a <= 1/e, complex otherwise.
cplx principal_u(double a);

/// |lambda + kappa beta e^{-lambda tau}|.
double characteristic_residual(cplx lambda, double beta, double tau, double kappa);

/// Rightmost root (upper member of a conjugate pair). The Newton result is
/// checked against an argument-principle count of roots to its right.
/// Throws NonConvergence / DegenerateSpectrum.
CharacteristicRoot dominant_root(double beta, double tau, double kappa = 1.0);

/// Newton iteration on the characteristic equation from an arbitrary seed.
/// Used to track one root through parameter changes.
CharacteristicRoot refine_root(cplx seed, double beta, double tau, double kappa);

/// Number of roots of u + a e^{-u} inside the rectangle
/// [re_lo, re_hi] x [im_lo, im_hi] of the u-plane, by the argument principle.
int count_roots_u(double a, double re_lo, double re_hi, double im_lo, double im_hi);

} // namespace ccfm::spectral
