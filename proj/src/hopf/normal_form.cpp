#include "ccfm/hopf/normal_form.hpp"

#include "ccfm/errors.hpp"
#include "ccfm/spectral/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ccfm::hopf {

namespace {

constexpr cplx kI(0.0, 1.0);

using Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Diagonal entry j omega + kappa beta_j e^{-j omega tau_j} of the velocity block.
cplx diagonal(const DelaySystem& sys, std::size_t j, double omega) {
    const auto& pc = sys.config();
    return kI * omega + pc.kappa * sys.beta()[j] * std::exp(-kI * omega * pc.vehicles[j].tau);
}

cplx coupling(const DelaySystem& sys, std::size_t j, double omega) {
    const auto& pc = sys.config();
    return pc.kappa * sys.beta()[j] * std::exp(-kI * omega * pc.vehicles[j].tau);
}

void require_nonzero(cplx d, std::size_t j) {
    if (std::abs(d) < 1e-12) {
        std::ostringstream os;
        os << "pair " << j + 1 << " is critical at the same frequency; the Hopf eigenvalue is not simple";
        throw DegenerateSpectrum(os.str());
    }
}

// Null vector of m from the SVD, scaled so that component k equals 1.
VectorXcd svd_null(const MatrixXcd& m, std::size_t k) {
    Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullV);
    VectorXcd v = svd.matrixV().col(m.cols() - 1);
    if (std::abs(v(idx(k))) < 1e-300) return v;
    return v / v(idx(k));
}

StateFunction mode(double omega, const VectorXcd& q) { return StateFunction(kI * omega, q); }

double max_abs(const VectorXcd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

} // namespace

std::string to_string(BifurcationType type) {
    switch (type) {
    case BifurcationType::Supercritical: return "supercritical";
    case BifurcationType::Subcritical: return "subcritical";
    case BifurcationType::Degenerate: return "degenerate";
    }
    return "unknown";
}

std::string to_string(OrbitStability orbit) {
    switch (orbit) {
    case OrbitStability::Stable: return "stable";
    case OrbitStability::Unstable: return "unstable";
    case OrbitStability::Degenerate: return "degenerate";
    }
    return "unknown";
}

cplx GCoefficients::require_g21() const {
    if (!g21) throw StagedComputationError("g21 needs the manifold corrections w20 and w11");
    return *g21;
}

DelaySystem critical_system(const core::PlatoonConfig& config, std::size_t pair) {
    core::validate(config);
    if (pair >= config.size()) throw InvalidConfig("bifurcating pair index out of range");
    core::PlatoonConfig pc = config;
    pc.leader = core::LeaderProfile::settled(config.leader.v_eq);
    const double beta = core::beta_star(pc)[pair];
    const double tau = pc.vehicles[pair].tau;
    pc.kappa = spectral::hopf_point(beta, tau, 0).kappa_cr;
    return DelaySystem(pc);
}

CriticalEigendata critical_eigendata(const DelaySystem& sys, std::size_t k) {
    const std::size_t n = sys.pairs();
    const auto& pc = sys.config();
    if (k >= n) throw InvalidConfig("bifurcating pair index out of range");
    const double tau = pc.vehicles[k].tau;
    const auto hp = spectral::hopf_point(sys.beta()[k], tau, 0);
    const double w = hp.omega0;
    if (std::abs(pc.kappa - hp.kappa_cr) > 1e-9 * hp.kappa_cr)
        throw InvalidConfig("system is not at the critical kappa of the bifurcating pair");

    CriticalEigendata out;
    out.pair = k;
    out.omega0 = w;
    out.kappa_cr = hp.kappa_cr;

    for (std::size_t j = 0; j < n; ++j)
        if (j != k) require_nonzero(diagonal(sys, j, w), j);

    // recursions: downstream of k for q, upstream of k for the adjoint
    VectorXcd q = VectorXcd::Zero(idx(2 * n));
    q(idx(k)) = 1.0;
    for (std::size_t j = k + 1; j < n; ++j)
        q(idx(j)) = coupling(sys, j - 1, w) * q(idx(j - 1)) / diagonal(sys, j, w);
    for (std::size_t j = 0; j < n; ++j) q(idx(n + j)) = pc.kappa * q(idx(j)) / (kI * w);

    VectorXcd psi = VectorXcd::Zero(idx(2 * n));
    psi(idx(k)) = 1.0;
    for (std::size_t j = k; j-- > 0;)
        psi(idx(j)) = psi(idx(j + 1)) * coupling(sys, j, w) / diagonal(sys, j, w);

    const MatrixXcd delta = sys.characteristic_matrix(kI * w);
    const VectorXcd q_svd = svd_null(delta, k);
    if ((delta * q_svd).norm() < (delta * q).norm()) q = q_svd;
    const VectorXcd psi_svd = svd_null(delta.transpose(), k);
    if ((delta.transpose() * psi_svd).norm() < (delta.transpose() * psi).norm()) psi = psi_svd;

    // <psi, q> = psi Delta'(j omega) q, split by origin of each term
    out.zeta1 = 0.0;
    out.zeta2 = 0.0;
    out.zeta3 = 0.0;
    out.zeta4 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx t = coupling(sys, j, w) * pc.vehicles[j].tau;
        out.zeta4 += psi(idx(j)) * q(idx(j));
        out.zeta3 -= t * psi(idx(j)) * q(idx(j));
        if (j + 1 < n) out.zeta2 += t * psi(idx(j + 1)) * q(idx(j));
        out.zeta1 += psi(idx(n + j)) * q(idx(n + j));
    }
    const cplx inner = out.zeta1 + out.zeta2 + out.zeta3 + out.zeta4;
    if (std::abs(inner) < 1e-14) throw DegenerateSpectrum("adjoint and critical eigenvectors are orthogonal");
    out.B = 1.0 / inner;
    out.phi = q;
    out.psi = psi;
    out.p = out.B * psi;
    out.residual_q = (delta * q).norm();
    out.residual_p = (delta.transpose() * out.p).norm();
    out.inner = out.p.transpose() * sys.characteristic_derivative(kI * w) * q;
    return out;
}

GCoefficients g_coefficients(const DelaySystem& sys, const CriticalEigendata& eig,
                             const ManifoldCorrections* corrections) {
    const StateFunction q = mode(eig.omega0, eig.phi);
    const StateFunction qb = q.conjugate();
    GCoefficients out;
    out.F20 = sys.quadratic(q, q);
    out.F11 = sys.quadratic(q, qb);
    out.F02 = sys.quadratic(qb, qb);
    out.g20 = eig.p.transpose() * out.F20;
    out.g11 = eig.p.transpose() * out.F11;
    out.g02 = eig.p.transpose() * out.F02;
    if (corrections) {
        const VectorXcd F21 = sys.cubic(q, q, qb) + sys.quadratic(qb, corrections->w20) +
                              2.0 * sys.quadratic(q, corrections->w11);
        out.g21 = eig.p.transpose() * F21;
    }
    return out;
}

ManifoldCorrections manifold_corrections(const DelaySystem& sys, const CriticalEigendata& eig,
                                         const GCoefficients& g) {
    const std::size_t n = sys.pairs();
    const double w = eig.omega0;
    const VectorXcd& q = eig.phi;
    const VectorXcd qb = q.conjugate();
    ManifoldCorrections out;

    const MatrixXcd d2 = sys.characteristic_matrix(2.0 * kI * w);
    Eigen::JacobiSVD<MatrixXcd> svd(d2);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-12 * sv(0))
        throw DegenerateSpectrum("characteristic matrix is singular at twice the Hopf frequency");
    out.e = d2.fullPivLu().solve(g.F20);

    // velocity block of Delta(0) is lower bidiagonal with diagonal kappa beta_i;
    // the headway block is singular, its free part is set to zero
    const MatrixXcd d0 = sys.characteristic_matrix(0.0);
    const MatrixXcd d0v = d0.topLeftCorner(idx(n), idx(n));
    out.f = VectorXcd::Zero(idx(2 * n));
    out.f.head(idx(n)) = d0v.triangularView<Eigen::Lower>().solve(g.F11.head(idx(n)));

    out.w20 = StateFunction(2 * n);
    out.w20.add(kI * w, (kI * g.g20 / w) * q)
        .add(-kI * w, (kI * std::conj(g.g02) / (3.0 * w)) * qb)
        .add(2.0 * kI * w, out.e);
    out.w11 = StateFunction(2 * n);
    out.w11.add(kI * w, (-kI * g.g11 / w) * q)
        .add(-kI * w, (kI * std::conj(g.g11) / w) * qb)
        .add(0.0, out.f);

    // operator residuals: (2 i w - A) w20 = H20, -A w11 = H11
    const StateFunction dw20 = out.w20.derivative();
    const StateFunction dw11 = out.w11.derivative();
    const double tau_max = sys.config().max_delay();
    for (int s = 0; s <= 10; ++s) {
        const double theta = -tau_max * (1.0 - s / 10.0);
        const VectorXcd qt = q * std::exp(kI * w * theta);
        const VectorXcd qbt = qt.conjugate();
        VectorXcd r20, r11;
        if (s < 10) {
            r20 = 2.0 * kI * w * out.w20(theta) - dw20(theta) + g.g20 * qt + std::conj(g.g02) * qbt;
            r11 = -dw11(theta) + g.g11 * qt + std::conj(g.g11) * qbt;
        } else {
            r20 = 2.0 * kI * w * out.w20(0.0) - sys.apply_linear(out.w20) + g.g20 * q +
                  std::conj(g.g02) * qb - g.F20;
            r11 = -sys.apply_linear(out.w11) + g.g11 * q + std::conj(g.g11) * qb - g.F11;
            out.headway_drift = -r11.tail(idx(n));
        }
        out.residual_w20 = std::max(out.residual_w20, max_abs(r20));
        out.residual_w11 = std::max(out.residual_w11, max_abs(r11.head(idx(n))));
    }
    return out;
}

cplx lyapunov_coefficient(const GCoefficients& g, double omega0) {
    const cplx g21 = g.require_g21();
    return kI / (2.0 * omega0) *
               (g.g20 * g.g11 - 2.0 * std::norm(g.g11) - std::norm(g.g02) / 3.0) +
           g21 / 2.0;
}

cplx lyapunov_coefficient_direct(const DelaySystem& sys, const CriticalEigendata& eig) {
    const std::size_t n = sys.pairs();
    const double w = eig.omega0;
    const StateFunction q = mode(w, eig.phi);
    const StateFunction qb = q.conjugate();
    const VectorXcd h20c = sys.characteristic_matrix(2.0 * kI * w).fullPivLu().solve(sys.quadratic(q, q));
    const MatrixXcd d0v = sys.characteristic_matrix(0.0).topLeftCorner(idx(n), idx(n));
    VectorXcd h11c = VectorXcd::Zero(idx(2 * n));
    h11c.head(idx(n)) = d0v.triangularView<Eigen::Lower>().solve(sys.quadratic(q, qb).head(idx(n)));
    const StateFunction h20(2.0 * kI * w, h20c);
    const StateFunction h11(0.0, h11c);
    const VectorXcd total = sys.cubic(q, q, qb) + sys.quadratic(qb, h20) + 2.0 * sys.quadratic(q, h11);
    return 0.5 * cplx(eig.p.transpose() * total);
}

HopfReport hopf_report(const core::PlatoonConfig& config, std::size_t pair) {
    const DelaySystem sys = critical_system(config, pair);
    HopfReport out;
    out.pair = pair;
    out.eigendata = critical_eigendata(sys, pair);
    out.omega0 = out.eigendata.omega0;
    out.kappa_cr = out.eigendata.kappa_cr;
    const GCoefficients partial = g_coefficients(sys, out.eigendata);
    out.corrections = manifold_corrections(sys, out.eigendata, partial);
    out.g = g_coefficients(sys, out.eigendata, &out.corrections);
    out.c1 = lyapunov_coefficient(out.g, out.omega0);

    const double beta = sys.beta()[pair];
    const double tau = sys.config().vehicles[pair].tau;
    out.alpha_prime = spectral::transversality(beta, tau, 0);
    out.mu2 = -out.c1.real() / out.alpha_prime;
    out.beta2 = 2.0 * out.c1.real();

    const double scale = std::max({1.0, std::abs(out.g.g20), std::abs(out.g.g11), std::abs(out.g.g02)});
    if (std::abs(out.c1) <= 1e-14 * scale * scale) {
        out.type = BifurcationType::Degenerate;
        out.orbit = OrbitStability::Degenerate;
    } else {
        out.type = out.mu2 > 0.0 ? BifurcationType::Supercritical : BifurcationType::Subcritical;
        out.orbit = out.beta2 < 0.0 ? OrbitStability::Stable : OrbitStability::Unstable;
    }
    for (std::size_t j = 0; j < sys.pairs(); ++j) {
        if (j == pair) continue;
        const auto v = spectral::classify_pair(sys.config().kappa * sys.beta()[j],
                                               sys.config().vehicles[j].tau);
        if (v.regime == spectral::Regime::Unstable) out.other_pairs_stable = false;
    }
    return out;
}

namespace {

nlohmann::json cplx_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json vector_json(const VectorXcd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(cplx_json(v(i)));
    return out;
}

} // namespace

nlohmann::json to_json(const HopfReport& r, bool with_vectors) {
    nlohmann::json out = {{"pair", r.pair + 1},
                          {"omega0", r.omega0},
                          {"kappa_cr", r.kappa_cr},
                          {"alpha_prime", r.alpha_prime},
                          {"c1_re", r.c1.real()},
                          {"c1_im", r.c1.imag()},
                          {"mu2", r.mu2},
                          {"beta2", r.beta2},
                          {"type", to_string(r.type)},
                          {"orbit", to_string(r.orbit)},
                          {"other_pairs_stable", r.other_pairs_stable}};
    if (with_vectors) {
        const auto& e = r.eigendata;
        out["phi"] = vector_json(e.phi);
        out["psi"] = vector_json(e.psi);
        out["B"] = cplx_json(e.B);
        out["zeta"] = {cplx_json(e.zeta1), cplx_json(e.zeta2), cplx_json(e.zeta3), cplx_json(e.zeta4)};
        out["g20"] = cplx_json(r.g.g20);
        out["g02"] = cplx_json(r.g.g02);
        out["g11"] = cplx_json(r.g.g11);
        if (r.g.g21) out["g21"] = cplx_json(*r.g.g21);
        out["e"] = vector_json(r.corrections.e);
        out["f"] = vector_json(r.corrections.f);
        out["headway_drift"] = vector_json(r.corrections.headway_drift);
        out["residuals"] = {{"q", e.residual_q},
                            {"p", e.residual_p},
                            {"w20", r.corrections.residual_w20},
                            {"w11", r.corrections.residual_w11}};
    }
    return out;
}

} // namespace ccfm::hopf
