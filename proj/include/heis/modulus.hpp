#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heis/contact.hpp"
#include "heis/density.hpp"
#include "heis/logchart.hpp"
#include "heis/surface.hpp"

namespace heis {

/// Leaf-parameter rectangle of the ring in log coordinates:
/// (2 ln a, 2 ln b) x (-2 pi/3, 2 pi/3).
num::Rect ring_log_rect(const SphericalRing& ring);

/// A parametrized family of surface patches sigma_tau over a common leaf
/// domain U, with leaf measure d mu(tau) = mu_density(tau) d tau.
///
/// Hypotheses carried as contracts: leaves are disjoint and regular, the
/// horizontal normal of each leaf is a.e. nonzero, and the Lebesgue measure
/// decomposes as dL^3 = ||N^h_{sigma_tau}||^{4/3} du dv d mu(tau).
struct FoliationSpec {
    num::Rect U;
    double tau0 = 0.0;
    double tau1 = 0.0;
    std::function<SurfacePatch(double)> leaf;
    std::function<double(double)> mu_density;

    /// Integrates a bounded factor g against d mu over (tau0, tau1).
    /// Singularity handling (endpoint substitutions, truncation) lives
    /// here, supplied by the foliation builder.
    std::function<double(const std::function<double(double)>&, double)>
        integrate_dmu;

    /// Locates a point on the foliation: returns (u, v, tau) or nullopt.
    std::function<std::optional<std::array<double, 3>>(const Point&)> locate;
};

/// The foliation of the spherical ring by Heisenberg cones psi = const,
/// leaves parametrized by (xi, eta) over the ring log rectangle, with
/// d mu(psi) = (1/2)(3/2)^{-1/3} cos^{-2/3}(psi) d psi.
FoliationSpec cone_foliation(const SphericalRing& ring);

/// ||N^h_{sigma_psi}|| = (3/2) e^{3 xi/2} cos^{1/2} psi for cone leaves.
double cone_leaf_normal_norm(double xi, double psi);

/// Cone leaf psi = const as a patch over the ring log rectangle, with
/// analytic partials.
SurfacePatch cone_patch(const SphericalRing& ring, double psi);

/// rho_0 = (|U| ||N^h_{sigma_tau}(u,v)||)^{-1} on leaf points, 0 elsewhere,
/// evaluated through locate and the generic leaf normal.
Density extremal_density(const FoliationSpec& spec);

/// Closed-form extremal density of the cone foliation:
/// (4 pi ln(b/a) |z| ||z|^2 - it|)^{-1} on the ring. Numerically stable at
/// any distance from the vertical axis.
Density rho0_surface(const SphericalRing& ring);

/// Curve-family density |z| / (ln(b/a) ||z|^2 - it|) on the ring.
Density rho0_curve(const SphericalRing& ring);

/// Minimum of the horizontal area integral of rho over the listed surfaces;
/// rho is admissible when the minimum is >= 1 - tol.
double admissibility(const Density& rho,
                     std::span<const std::pair<SurfacePatch, num::Rect>> surfaces,
                     int quad_n = 64);

/// Graph function psi = psi(xi, eta) with its partials.
struct GraphPsi {
    std::function<double(double, double)> psi;
    std::function<std::array<double, 2>(double, double)> grad; // (psi_xi, psi_eta)
};

/// Patch Phi(xi, psi(xi,eta), eta) over the ring log rectangle, analytic
/// partials by the chain rule. Validates |psi| < pi/2 on a grid.
SurfacePatch graph_psi_surface(const SphericalRing& ring, const GraphPsi& g);

/// Closed-form normal norm of a graph-psi patch:
/// (3/2) e^{3 xi/2} cos^{1/2} psi (1 + (psi_xi - tan(psi) psi_eta / 3)^2)^{1/2}.
double graph_psi_normal_norm(double xi, double psi, double psi_xi, double psi_eta);

/// Mod(Sigma_0) = |U|^{-1/3} int_J d mu(tau).
double modulus_foliation(const FoliationSpec& spec, double tol = 1e-9);

/// Mod(f(Sigma_0)) = |U|^{-1/3} int_J K_leaf^{2/3}(tau) d mu(tau) for maps
/// whose distortion is constant on leaves.
double modulus_pushforward(const FoliationSpec& spec,
                           const std::function<double(double)>& K_leaf,
                           double tol = 1e-9);

/// Quadrature controls for the 3-D ring integrals in log coordinates.
struct Quad3 {
    int n_xi = 32;
    int n_eta = 32;
    int n_z = 32;        // per dyadic panel in z = tan(psi)
    double tol = 1e-9;   // relative truncation target for the z tail
};

/// Integral over the ring of g dL^3 computed in log coordinates with the
/// psi direction substituted by z = tan(psi). The integrand receives stable
/// (xi, eta, z, cos psi, sin psi) data and the already-built point.
struct RingNode {
    double xi, eta, z;
    double psi, cpsi, spsi;
    Point p;
};
double ring_integral(const SphericalRing& ring,
                     const std::function<double(const RingNode&)>& g,
                     const Quad3& q = {});

/// Distortion of f at a ring node: log-oracle route when available
/// (exact for built-in maps), cartesian derivatives otherwise.
double distortion_at_node(const ContactMap& f, const RingNode& node);

/// 2/3-mean distortion: ratio of int K^{2/3} rho^{4/3} dL^3 to
/// int rho^{4/3} dL^3 over the ring.
double mean_distortion_23(const ContactMap& f, const Density& rho,
                          const SphericalRing& ring, const Quad3& q = {});

/// 2-mean distortion: exponents K^2 and rho^4.
double mean_distortion_2(const ContactMap& f, const Density& rho,
                         const SphericalRing& ring, const Quad3& q = {});

struct ModulusInequalityReport {
    double mod_sigma0 = 0.0;
    double mod_image = 0.0;      // Mod(f(Sigma_0)) via the leaf route
    double weighted_integral = 0.0; // int K^{2/3} rho^{4/3} dL^3
    double lower_bracket = 0.0;  // K_f^{-2/3} Mod(Sigma_0)
    double upper_bracket = 0.0;  // K_f^{2/3} Mod(Sigma_0)
    bool leaf_constant = false;
    bool inequalities_hold = false;
};

/// Checks Mod(f(Sigma)) <= int K^{2/3} rho^{4/3} dL^3 and the K_f^{±2/3}
/// bracket. Leaf-constancy of the distortion is tested by sampling; when it
/// fails the image modulus is left unset and only the bracket is reported.
ModulusInequalityReport modulus_inequality_check(const ContactMap& f,
                                                 const FoliationSpec& spec,
                                                 const Density& rho,
                                                 const SphericalRing& ring,
                                                 double K_max,
                                                 const Quad3& q = {});

struct MainTheoremReport {
    double k = 0.0;
    double mod_sigma0 = 0.0;
    double mod_sigma0_closed = 0.0;
    double mod_sigma0_direct3d = 0.0;
    double mod_pushforward = 0.0;
    double ratio = 0.0;          // mod_pushforward / mod_sigma0
    double mean_dist_23 = 0.0;
    double mean_dist_2 = 0.0;
    double k_pow = 0.0;          // k^{-1/3}
    double max_distortion = 0.0; // sup over the psi grid of K(psi)
    double max_distortion_fd = 0.0;
    double msp_min = 0.0;
    double contact_residual_max = 0.0;
    double admissibility_min = 0.0;
    double lemma_equality_relerr = 0.0; // Mod(f Sigma_0) vs weighted integral
    bool pass = false;
};

/// End-to-end verification of the main-theorem chain for one k in (0,1):
/// moduli three ways, pushforward ratio, mean distortions, distortion sup,
/// minimal-stretching sign, contact residuals, admissibility.
MainTheoremReport verify_main_theorem(double k, const SphericalRing& ring,
                                      const Quad3& q = {});

} // namespace heis
