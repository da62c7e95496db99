#pragma once

#include "softwg/geometry.hpp"
#include "softwg/transverse.hpp"

namespace softwg {

/// Plateau cutoff: 1 on [-n, n], 0 beyond |s| = 2n, linear slope 1/n in
/// between; the slope has squared L2 norm exactly 2/n.
struct Mollifier {
    int n = 1;
};

double mollifier_value(const Mollifier& m, double s);

struct QuadratureSpec {
    int gauss_order = 24;
    QuadratureSpec refined() const { return {2 * gauss_order}; }
};

/// Components of the shifted form evaluated on psi_n = phi_n * xi1:
/// the longitudinal gradient part q1, the bent-section boundary part q2_int,
/// and the straight-section boundary part q2_ext.
struct FormBreakdown {
    double q1 = 0.0;     // >= 0
    double q2_int = 0.0;
    double q2_ext = 0.0; // <= 0
    double total = 0.0;  // q1 + q2_int + q2_ext
    int n = 0;
};

/// Longitudinal part: integral of |phi_n'|^2 weighted by the transverse mass
/// inside the cut radius; bounded by (2/n)·∫xi1². Requires the plateau to
/// cover the bent section (n >= theta*R/2), else MollifierTooNarrow.
double q_tilde_1(const WaveguideGeometry& g, const TransverseGroundState& gs,
                 const Mollifier& m, const QuadratureSpec& quad = {});

/// Bent-section boundary term in closed form: xi1(R)^2 * theta / 2.
double q_tilde_2_int_closed(const WaveguideGeometry& g, const TransverseGroundState& gs);

/// Same quantity by quadrature of the boundary bracket
/// [xi^2 k/2 + xi xi' (1 - k t)] at t = c_+(s) over the bent section.
double q_tilde_2_int_bracket(const WaveguideGeometry& g, const TransverseGroundState& gs,
                             const QuadratureSpec& quad = {});

/// Straight-section boundary term at finite n (quadrature; non-increasing in
/// n) and its n -> infinity limit -xi1(R)^2 tan(theta/2). The limit diverges
/// for theta = pi (DivergentExt); the finite-n value stays defined there.
double q_tilde_2_ext(const WaveguideGeometry& g, const TransverseGroundState& gs,
                     const Mollifier& m, const QuadratureSpec& quad = {});
double q_tilde_2_ext_limit(const WaveguideGeometry& g, const TransverseGroundState& gs);

/// n -> infinity limit of the whole shifted form:
/// xi1(R)^2 (theta/2 - tan(theta/2)) < 0 for theta in (0, pi).
double variational_limit(const WaveguideGeometry& g, const TransverseGroundState& gs);

/// Direct quadrature of the transformed form minus E1 times the weighted
/// norm, split into the same three components (independent evaluation route;
/// reconciles with the closed/bracket forms for analytic profiles). Throws
/// QuadratureNotConverged if refining the rule moves the total by more than
/// 1e-6 relative to the component scale.
FormBreakdown q_tilde_full_quadrature(const WaveguideGeometry& g,
                                      const TransverseProfile& profile,
                                      const TransverseGroundState& gs, const Mollifier& m,
                                      const QuadratureSpec& quad = {});

/// Smallest mollifier index (searched by doubling from ceil(theta*R/2)) whose
/// shifted-form value drops below -1e-12, certifying spectrum below E1.
/// Throws CertificateNotFound when n exceeds 1e6 * theta * R (in particular
/// immediately for theta = 0, where no negative value exists).
struct Certificate {
    int n0 = 0;
    double value = 0.0;
};
Certificate bound_state_certificate(const WaveguideGeometry& g, const TransverseProfile& profile);

} // namespace softwg
