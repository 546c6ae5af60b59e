#include "ccfm/spectral/characteristic.hpp"

#include "ccfm/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ccfm::spectral {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

// Expansion of W0 about the branch point in p = sqrt(2(e x + 1)), x = -a.
template <typename T>
T branch_series(T p) {
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p - 43.0 / 540.0 * p * p * p * p +
           769.0 / 17280.0 * p * p * p * p * p;
}

double real_w0(double a) {
    if (a == kInvE) return -1.0;
    const double x = -a;
    double w = a > 0.25 ? branch_series(std::sqrt(2.0 * kE * (kInvE - a)))
                        : x * (1.0 - x + 1.5 * x * x);
    if (kInvE - a < 1e-10) return w;
    for (int it = 0; it < 64; ++it) {
        // Halley on w e^w - x
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

cplx complex_w0(double a) {
    cplx w;
    const double d = kE * a - 1.0;
    if (d < 2.0) {
        w = branch_series(cplx(0.0, std::sqrt(2.0 * d)));
    } else {
        const cplx l1(std::log(a), kPi);
        const cplx l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    cplx best = w;
    double best_f = std::abs(w * std::exp(w) + a);
    for (int it = 0; it < 100; ++it) {
        const cplx ew = std::exp(w);
        const cplx f = w * ew + a;
        const cplx step = f / (ew * (w + 1.0));
        w -= step;
        const double fw = std::abs(w * std::exp(w) + a);
        if (fw < best_f) {
            best_f = fw;
            best = w;
        }
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    if (best.imag() < 0.0) best = std::conj(best);
    return best;
}

cplx g_u(double a, cplx u) { return u + a * std::exp(-u); }

// Accumulated argument change of g along a straight segment, subdividing
// until successive samples differ by less than pi/4.
double arg_change(double a, cplx from, cplx to, int depth = 0) {
    const cplx ga = g_u(a, from);
    const cplx gb = g_u(a, to);
    const double d = std::arg(gb / ga);
    if ((std::abs(d) < kPi / 4.0 && depth >= 4) || depth > 40) return d;
    const cplx mid = 0.5 * (from + to);
    return arg_change(a, from, mid, depth + 1) + arg_change(a, mid, to, depth + 1);
}

} // namespace

cplx principal_u(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        std::ostringstream os;
        os << "characteristic parameter kappa*beta*tau must be positive and finite, got " << a;
        throw InvalidConfig(os.str());
    }
    if (a <= kInvE) return {real_w0(a), 0.0};
    return complex_w0(a);
}

double characteristic_residual(cplx lambda, double beta, double tau, double kappa) {
    return std::abs(lambda + kappa * beta * std::exp(-lambda * tau));
}

int count_roots_u(double a, double re_lo, double re_hi, double im_lo, double im_hi) {
    const cplx c0(re_lo, im_lo), c1(re_hi, im_lo), c2(re_hi, im_hi), c3(re_lo, im_hi);
    const double total = arg_change(a, c0, c1) + arg_change(a, c1, c2) + arg_change(a, c2, c3) +
                         arg_change(a, c3, c0);
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

CharacteristicRoot refine_root(cplx seed, double beta, double tau, double kappa) {
    const double k = kappa * beta;
    cplx lam = seed;
    for (int it = 0; it < 100; ++it) {
        const cplx e = std::exp(-lam * tau);
        const cplx f = lam + k * e;
        const cplx df = 1.0 - k * tau * e;
        const cplx step = f / df;
        lam -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(lam))) {
            return {lam, characteristic_residual(lam, beta, tau, kappa)};
        }
    }
    const double r = characteristic_residual(lam, beta, tau, kappa);
    if (r <= 1e-12 * std::max(1.0, std::abs(lam))) return {lam, r};
    throw NonConvergence("Newton iteration on the characteristic equation did not converge",
                         lam.real(), lam.imag());
}

CharacteristicRoot dominant_root(double beta, double tau, double kappa) {
    if (!(beta > 0.0) || !(kappa > 0.0) || !(tau >= 0.0))
        throw InvalidConfig("dominant_root needs beta > 0, kappa > 0, tau >= 0");
    if (tau == 0.0) return {cplx(-kappa * beta, 0.0), 0.0};

    const double a = kappa * (beta * tau);
    const cplx u = principal_u(a);
    const cplx lambda = u / tau;
    CharacteristicRoot out{lambda, characteristic_residual(lambda, beta, tau, kappa)};
    if (!(out.residual <= 1e-12 * std::max(1.0, std::abs(lambda)))) {
        std::ostringstream os;
        os << "characteristic root residual " << out.residual << " exceeds tolerance";
        throw NonConvergence(os.str(), lambda.real(), lambda.imag());
    }

    // offset floored in u so the left edge stays clear of a (near-)double root
    const double delta = std::max(1e-6 * tau, 1e-5);
    const int right = count_roots_u(a, u.real() + delta, u.real() + 50.0, -100.0, 100.0);
    if (right != 0) {
        std::ostringstream os;
        os << right << " characteristic root(s) found to the right of the computed one";
        throw DegenerateSpectrum(os.str());
    }
    return out;
}

} // namespace ccfm::spectral
