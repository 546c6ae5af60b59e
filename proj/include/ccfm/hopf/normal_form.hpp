#pragma once

// Center-manifold reduction at the Hopf point of one vehicle pair and the
// resulting Poincare normal form  zdot = i omega0 z + c1 z |z|^2 + ...

#include "ccfm/core/platoon.hpp"
#include "ccfm/hopf/delay_system.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>

namespace ccfm::hopf {

struct CriticalEigendata {
    std::size_t pair = 0; ///< 0-based bifurcating pair
    double omega0 = 0.0;
    double kappa_cr = 0.0;
    VectorXcd phi; ///< q(0), component `pair` equal to 1
    VectorXcd psi; ///< adjoint row before normalization, component `pair` equal to 1
    VectorXcd p;   ///< normalized adjoint row, B * psi
    cplx B;        ///< 1 / (zeta1 + zeta2 + zeta3 + zeta4)
    cplx zeta1, zeta2, zeta3, zeta4;
    double residual_q = 0.0; ///< |Delta(j omega0) q|
    double residual_p = 0.0; ///< |p Delta(j omega0)|
    cplx inner;              ///< <p, q> after scaling
};

struct GCoefficients {
    cplx g20, g02, g11;
    std::optional<cplx> g21;
    VectorXcd F20, F11, F02;

    /// Throws StagedComputationError when the corrections have not been supplied.
    cplx require_g21() const;
};

struct ManifoldCorrections {
    StateFunction w20, w11;
    VectorXcd e, f;
    double residual_w20 = 0.0;   ///< max operator residual over sampled theta
    double residual_w11 = 0.0;   ///< same, velocity rows only
    VectorXcd headway_drift;     ///< y-row mismatch of the w11 equation at theta = 0
};

enum class BifurcationType { Supercritical, Subcritical, Degenerate };
enum class OrbitStability { Stable, Unstable, Degenerate };

std::string to_string(BifurcationType type);
std::string to_string(OrbitStability orbit);

struct HopfReport {
    std::size_t pair = 0;
    double omega0 = 0.0;
    double kappa_cr = 0.0;
    double alpha_prime = 0.0;
    cplx c1;
    double mu2 = 0.0;
    double beta2 = 0.0;
    BifurcationType type = BifurcationType::Degenerate;
    OrbitStability orbit = OrbitStability::Degenerate;
    bool other_pairs_stable = true;
    CriticalEigendata eigendata;
    GCoefficients g;
    ManifoldCorrections corrections;
};

/// The delayed system evaluated at the critical kappa of `pair`.
DelaySystem critical_system(const core::PlatoonConfig& config, std::size_t pair);

CriticalEigendata critical_eigendata(const DelaySystem& system, std::size_t pair);

/// g20, g02, g11 from the quadratic terms; g21 only when corrections are given.
GCoefficients g_coefficients(const DelaySystem& system, const CriticalEigendata& eig,
                             const ManifoldCorrections* corrections = nullptr);

ManifoldCorrections manifold_corrections(const DelaySystem& system, const CriticalEigendata& eig,
                                         const GCoefficients& g);

/// c1 from the g-coefficients (requires g21).
cplx lyapunov_coefficient(const GCoefficients& g, double omega0);

/// Direct route: 1/2 p [C(q,q,qbar) + B(qbar,h20) + 2 B(q,h11)].
cplx lyapunov_coefficient_direct(const DelaySystem& system, const CriticalEigendata& eig);

HopfReport hopf_report(const core::PlatoonConfig& config, std::size_t pair);

nlohmann::json to_json(const HopfReport& report, bool with_vectors = false);

} // namespace ccfm::hopf
