#include "heis/modulus.hpp"

#include <cmath>
#include <random>

#include "heis/stretch.hpp"

namespace heis {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kBand = 2.0 * std::numbers::pi / 3.0;
// d mu(psi) = c_mu cos^{-2/3}(psi) d psi
const double kMuConst = 0.5 * std::pow(1.5, -1.0 / 3.0);
} // namespace

num::Rect ring_log_rect(const SphericalRing& ring) {
    if (!(ring.a > 0.0 && ring.b > ring.a))
        raise(ErrorCode::InvalidArgument, "ring needs 0 < a < b");
    return num::Rect{2.0 * std::log(ring.a), 2.0 * std::log(ring.b), -kBand, kBand};
}

double cone_leaf_normal_norm(double xi, double psi) {
    return 1.5 * std::exp(1.5 * xi) * std::sqrt(std::cos(psi));
}

SurfacePatch cone_patch(const SphericalRing& ring, double psi) {
    if (!(std::abs(psi) < kHalfPi))
        raise(ErrorCode::PsiOutOfRange, "cone leaf needs |psi| < pi/2");
    return SurfacePatch(
        ring_log_rect(ring),
        [psi](double xi, double eta) { return phi(LogPoint{xi, psi, eta}); },
        [psi](double xi, double eta) {
            const PhiJacobian J = phi_jacobian(LogPoint{xi, psi, eta});
            return std::make_pair(J.d_xi, J.d_eta);
        });
}

FoliationSpec cone_foliation(const SphericalRing& ring) {
    FoliationSpec spec;
    spec.U = ring_log_rect(ring);
    spec.tau0 = -kHalfPi;
    spec.tau1 = kHalfPi;
    spec.leaf = [ring](double psi) { return cone_patch(ring, psi); };
    spec.mu_density = [](double psi) {
        return kMuConst * std::pow(std::cos(psi), -2.0 / 3.0);
    };
    // The leaf measure has integrable cos^{-2/3} endpoint singularities;
    // integrate in z = tan(psi), where d mu = c (1 + z^2)^{-2/3} dz.
    spec.integrate_dmu = [](const std::function<double(double)>& g, double tol) {
        return num::real_line_integral(
            [&g](double z) {
                return g(std::atan(z)) * kMuConst *
                       std::pow(1.0 + z * z, -2.0 / 3.0);
            },
            tol);
    };
    spec.locate = [ring](const Point& p) -> std::optional<std::array<double, 3>> {
        if (!ring.contains(p) || p.z == Complex(0.0, 0.0)) return std::nullopt;
        const LogPoint q = phi_inv(p);
        const num::Rect U = ring_log_rect(ring);
        if (!U.contains(q.xi, q.eta)) return std::nullopt;
        return std::array<double, 3>{q.xi, q.eta, q.psi};
    };
    return spec;
}

Density extremal_density(const FoliationSpec& spec) {
    if (!spec.locate)
        raise(ErrorCode::PointNotOnFoliation,
              "foliation has no leaf-coordinate inversion");
    const double inv_area = 1.0 / spec.U.area();
    auto locate = spec.locate;
    auto leaf = spec.leaf;
    return Density([locate, leaf, inv_area](const Point& p) {
        const auto loc = locate(p);
        if (!loc) return 0.0;
        const auto [u, v, tau] = *loc;
        const SurfacePatch patch = leaf(tau);
        return inv_area / horizontal_normal(patch, u, v).norm;
    });
}

Density rho0_surface(const SphericalRing& ring) {
    const double c = 1.0 / (4.0 * std::numbers::pi * ring.log_ratio());
    return Density(
        [c](const Point& p) {
            return c / (std::abs(p.z) * std::abs(p.w()));
        },
        ring);
}

Density rho0_curve(const SphericalRing& ring) {
    const double c = 1.0 / ring.log_ratio();
    return Density(
        [c](const Point& p) {
            return c * std::abs(p.z) / std::abs(p.w());
        },
        ring);
}

double admissibility(const Density& rho,
                     std::span<const std::pair<SurfacePatch, num::Rect>> surfaces,
                     int quad_n) {
    if (surfaces.empty())
        raise(ErrorCode::InvalidArgument, "admissibility needs at least one surface");
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& [patch, region] : surfaces)
        lo = std::min(lo, horizontal_area_integral(rho, patch, region, quad_n));
    return lo;
}

double graph_psi_normal_norm(double xi, double psi, double psi_xi, double psi_eta) {
    const double slope = psi_xi - std::tan(psi) * psi_eta / 3.0;
    return cone_leaf_normal_norm(xi, psi) * std::sqrt(1.0 + slope * slope);
}

SurfacePatch graph_psi_surface(const SphericalRing& ring, const GraphPsi& g) {
    if (!g.psi || !g.grad)
        raise(ErrorCode::InvalidArgument, "graph-psi needs psi and its gradient");
    const num::Rect U = ring_log_rect(ring);
    const int n = 33;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double xi = U.u0 + i * U.width() / n;
            const double eta = U.v0 + j * U.height() / n;
            if (!(std::abs(g.psi(xi, eta)) < kHalfPi - 1e-9))
                raise(ErrorCode::PsiOutOfRange,
                      "graph function leaves (-pi/2, pi/2) on the domain");
        }
    auto psi = g.psi;
    auto grad = g.grad;
    return SurfacePatch(
        U,
        [psi](double xi, double eta) {
            return phi(LogPoint{xi, psi(xi, eta), eta});
        },
        [psi, grad](double xi, double eta) {
            const double ps = psi(xi, eta);
            const auto [pxi, peta] = grad(xi, eta);
            const PhiJacobian J = phi_jacobian(LogPoint{xi, ps, eta});
            Vec3 su, sv;
            for (int i = 0; i < 3; ++i) {
                su[i] = J.d_xi[i] + pxi * J.d_psi[i];
                sv[i] = J.d_eta[i] + peta * J.d_psi[i];
            }
            return std::make_pair(su, sv);
        });
}

double modulus_foliation(const FoliationSpec& spec, double tol) {
    if (!spec.integrate_dmu)
        raise(ErrorCode::InvalidArgument, "foliation has no leaf-measure integrator");
    const double total = spec.integrate_dmu([](double) { return 1.0; }, tol);
    return std::pow(spec.U.area(), -1.0 / 3.0) * total;
}

double modulus_pushforward(const FoliationSpec& spec,
                           const std::function<double(double)>& K_leaf,
                           double tol) {
    const double total = spec.integrate_dmu(
        [&K_leaf](double tau) { return std::pow(K_leaf(tau), 2.0 / 3.0); }, tol);
    return std::pow(spec.U.area(), -1.0 / 3.0) * total;
}

double ring_integral(const SphericalRing& ring,
                     const std::function<double(const RingNode&)>& g,
                     const Quad3& q) {
    const num::Rect U = ring_log_rect(ring);
    const auto& rx = num::gauss_legendre(q.n_xi);
    const auto& re = num::gauss_legendre(q.n_eta);
    const double xm = 0.5 * (U.u0 + U.u1), xh = 0.5 * U.width();
    const double em = 0.5 * (U.v0 + U.v1), eh = 0.5 * U.height();

    std::vector<double> xis(q.n_xi), wxi(q.n_xi), etas(q.n_eta), weta(q.n_eta);
    for (int i = 0; i < q.n_xi; ++i) {
        xis[i] = xm + xh * rx.nodes[i];
        wxi[i] = xh * rx.weights[i];
    }
    for (int j = 0; j < q.n_eta; ++j) {
        etas[j] = em + eh * re.nodes[j];
        weta[j] = eh * re.weights[j];
    }

    // The psi direction runs in z = tan(psi): smooth integrands there, and
    // cos psi = 1/sqrt(1+z^2) stays accurate far beyond where psi itself
    // saturates in double precision.
    auto slice = [&](double z) {
        RingNode node;
        node.z = z;
        node.cpsi = 1.0 / std::sqrt(1.0 + z * z);
        node.spsi = z * node.cpsi;
        node.psi = std::atan(z);
        const double jac_psi = node.cpsi * node.cpsi; // dpsi = dz / (1 + z^2)
        double sum = 0.0;
        for (int i = 0; i < q.n_xi; ++i) {
            node.xi = xis[i];
            const double ex = std::exp(node.xi);
            const double r = std::sqrt(node.cpsi) * std::exp(0.5 * node.xi);
            const double weight = 0.75 * ex * ex; // |J_Phi|
            double row = 0.0;
            for (int j = 0; j < q.n_eta; ++j) {
                node.eta = etas[j];
                const double phase = kHalfPi + 0.5 * (node.psi - 3.0 * node.eta);
                node.p = Point{Complex(r * std::cos(phase), r * std::sin(phase)),
                               -node.spsi * ex};
                row += weta[j] * g(node);
            }
            sum += wxi[i] * weight * row;
        }
        return sum * jac_psi;
    };
    return num::real_line_integral(slice, q.tol, q.n_z);
}

double distortion_at_node(const ContactMap& f, const RingNode& node) {
    if (f.has_log_oracle()) {
        const LogDerivs d = f.log_derivs(LogPoint{node.xi, node.psi, node.eta});
        const double amu = log_beltrami_abs(d, node.z);
        if (amu >= 1.0)
            raise(ErrorCode::DegenerateDerivative, "|mu| >= 1 at a quadrature node");
        return (1.0 + amu) / (1.0 - amu);
    }
    return beltrami(f, node.p).K;
}

/// Distortion of f at an off-axis point, through the log chart when the map
/// carries an exact log oracle.
static double distortion_at_point(const ContactMap& f, const Point& p) {
    if (f.has_log_oracle()) {
        const LogPoint q = phi_inv(p);
        const LogDerivs d = f.log_derivs(q);
        const double amu = log_beltrami_abs(d, std::tan(q.psi));
        if (amu >= 1.0)
            raise(ErrorCode::DegenerateDerivative, "|mu| >= 1 at sample point");
        return (1.0 + amu) / (1.0 - amu);
    }
    return beltrami(f, p).K;
}

namespace {
double mean_distortion(const ContactMap& f, const Density& rho,
                       const SphericalRing& ring, double k_exp, double rho_exp,
                       const Quad3& q) {
    const double num = ring_integral(
        ring,
        [&](const RingNode& node) {
            const double r = rho(node.p);
            if (r == 0.0) return 0.0;
            return std::pow(distortion_at_node(f, node), k_exp) *
                   std::pow(r, rho_exp);
        },
        q);
    const double den = ring_integral(
        ring,
        [&](const RingNode& node) { return std::pow(rho(node.p), rho_exp); }, q);
    if (!(den > 0.0))
        raise(ErrorCode::ZeroDenominator, "density vanishes a.e. on the ring");
    return num / den;
}
} // namespace

double mean_distortion_23(const ContactMap& f, const Density& rho,
                          const SphericalRing& ring, const Quad3& q) {
    return mean_distortion(f, rho, ring, 2.0 / 3.0, 4.0 / 3.0, q);
}

double mean_distortion_2(const ContactMap& f, const Density& rho,
                         const SphericalRing& ring, const Quad3& q) {
    return mean_distortion(f, rho, ring, 2.0, 4.0, q);
}

namespace {
/// Samples K on each of a few leaves; returns true when the spread on every
/// leaf stays within 1e-8 of its mean.
bool leaf_constant_distortion(const ContactMap& f, const FoliationSpec& spec,
                              std::function<double(double)>& K_leaf_out) {
    std::mt19937_64 rng(20240507u);
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    const int n_leaves = 7, n_pts = 100;
    for (int l = 0; l < n_leaves; ++l) {
        const double tau =
            spec.tau0 + (l + 0.5) * (spec.tau1 - spec.tau0) / n_leaves;
        const SurfacePatch patch = spec.leaf(tau);
        const num::Rect& U = patch.domain();
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int i = 0; i < n_pts; ++i) {
            const double u = U.u0 + uu(rng) * U.width() * 0.98 + 0.01 * U.width();
            const double v = U.v0 + uu(rng) * U.height() * 0.98 + 0.01 * U.height();
            const double K = distortion_at_point(f, patch.at(u, v));
            lo = std::min(lo, K);
            hi = std::max(hi, K);
        }
        if (hi - lo > 1e-8 * (1.0 + hi)) return false;
    }
    auto leaf = spec.leaf;
    K_leaf_out = [leaf, f](double tau) {
        const SurfacePatch patch = leaf(tau);
        const num::Rect& U = patch.domain();
        return distortion_at_point(
            f, patch.at(0.5 * (U.u0 + U.u1), 0.25 * (U.v0 + U.v1)));
    };
    return true;
}
} // namespace

ModulusInequalityReport modulus_inequality_check(const ContactMap& f,
                                                 const FoliationSpec& spec,
                                                 const Density& rho,
                                                 const SphericalRing& ring,
                                                 double K_max, const Quad3& q) {
    ModulusInequalityReport rep;
    rep.mod_sigma0 = modulus_foliation(spec, q.tol);
    rep.weighted_integral = ring_integral(
        ring,
        [&](const RingNode& node) {
            const double r = rho(node.p);
            if (r == 0.0) return 0.0;
            return std::pow(distortion_at_node(f, node), 2.0 / 3.0) *
                   std::pow(r, 4.0 / 3.0);
        },
        q);
    const double kb = std::pow(K_max, 2.0 / 3.0);
    rep.lower_bracket = rep.mod_sigma0 / kb;
    rep.upper_bracket = rep.mod_sigma0 * kb;

    std::function<double(double)> K_leaf;
    rep.leaf_constant = leaf_constant_distortion(f, spec, K_leaf);
    if (rep.leaf_constant) {
        rep.mod_image = modulus_pushforward(spec, K_leaf, q.tol);
        const double slack = 1e-6 * (1.0 + rep.weighted_integral);
        rep.inequalities_hold = rep.mod_image <= rep.weighted_integral + slack &&
                                rep.lower_bracket <= rep.mod_image + slack &&
                                rep.mod_image <= rep.upper_bracket + slack;
    } else {
        rep.mod_image = std::numeric_limits<double>::quiet_NaN();
        rep.inequalities_hold = false;
    }
    return rep;
}

MainTheoremReport verify_main_theorem(double k, const SphericalRing& ring,
                                      const Quad3& q) {
    if (!(k > 0.0 && k < 1.0))
        raise(ErrorCode::KOutOfRange, "main-theorem verification needs k in (0,1)");
    MainTheoremReport rep;
    rep.k = k;
    rep.k_pow = std::pow(k, -1.0 / 3.0);

    const FoliationSpec spec = cone_foliation(ring);
    const ContactMap f = stretch_map(k);
    const Density rho = rho0_surface(ring);
    const double L = ring.log_ratio();

    rep.mod_sigma0 = modulus_foliation(spec, q.tol);
    rep.mod_sigma0_closed = std::pow(32.0 * std::numbers::pi * L, -1.0 / 3.0) *
                            num::beta_fn(0.5, 1.0 / 6.0);
    rep.mod_sigma0_direct3d = ring_integral(
        ring,
        [&rho](const RingNode& node) { return std::pow(rho(node.p), 4.0 / 3.0); },
        q);

    // Leaf distortion sampled from the map itself (constancy is part of the
    // leaf-constant hypothesis, asserted separately by the inequality check).
    auto K_leaf = [&f, &spec](double tau) {
        const SurfacePatch patch = spec.leaf(tau);
        const num::Rect& U = patch.domain();
        return distortion_at_point(
            f, patch.at(0.5 * (U.u0 + U.u1), 0.25 * (U.v0 + U.v1)));
    };
    rep.mod_pushforward = modulus_pushforward(spec, K_leaf, q.tol);
    rep.ratio = rep.mod_pushforward / rep.mod_sigma0;

    const double weighted = ring_integral(
        ring,
        [&](const RingNode& node) {
            const double r = rho(node.p);
            if (r == 0.0) return 0.0;
            return std::pow(distortion_at_node(f, node), 2.0 / 3.0) *
                   std::pow(r, 4.0 / 3.0);
        },
        q);
    rep.mean_dist_23 = weighted / rep.mod_sigma0_direct3d;
    rep.lemma_equality_relerr =
        std::abs(rep.mod_pushforward - weighted) / weighted;

    rep.mean_dist_2 = mean_distortion_2(f, rho0_curve(ring), ring, q);

    // sup_psi K(psi): the closed form peaks at psi = 0.
    rep.max_distortion = stretch_distortion(k, 0.0);
    {
        // FD route at points of the psi = 0 leaf.
        double best = 0.0;
        for (int i = 0; i < 8; ++i) {
            const num::Rect U = ring_log_rect(ring);
            const double xi = U.u0 + (i + 0.5) * U.width() / 8.0;
            const Point p = phi(LogPoint{xi, 0.0, 0.1 * i - 0.3});
            const HorizDerivs d = f.derivs_fd(p, 1e-5);
            const double amu = std::abs(d.ZbfI / d.ZfI);
            best = std::max(best, (1.0 + amu) / (1.0 - amu));
        }
        rep.max_distortion_fd = best;
    }

    {
        double lo = std::numeric_limits<double>::infinity();
        for (int l = 0; l < 15; ++l) {
            const double psi = -1.4 + 2.8 * l / 14.0;
            const SurfacePatch patch = cone_patch(ring, psi);
            const num::Rect& U = patch.domain();
            for (int i = 1; i <= 4; ++i)
                for (int j = 1; j <= 4; ++j)
                    lo = std::min(lo, msp_value(f, patch, U.u0 + i * U.width() / 5.0,
                                                U.v0 + j * U.height() / 5.0));
        }
        rep.msp_min = lo;
    }

    {
        std::mt19937_64 rng(977u);
        std::uniform_real_distribution<double> uxi(2.0 * std::log(ring.a),
                                                   2.0 * std::log(ring.b));
        std::uniform_real_distribution<double> upsi(-1.45, 1.45);
        std::uniform_real_distribution<double> ueta(-kBand + 0.01, kBand - 0.01);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Point p = phi(LogPoint{uxi(rng), upsi(rng), ueta(rng)});
            const ContactResiduals r = contact_residuals_fd(f, p, 1e-5);
            worst = std::max({worst, std::abs(r.r1), std::abs(r.r2)});
            if (!(r.lambda > 0.0)) worst = std::numeric_limits<double>::infinity();
        }
        rep.contact_residual_max = worst;
    }

    {
        std::vector<std::pair<SurfacePatch, num::Rect>> leaves;
        const num::Rect U = ring_log_rect(ring);
        for (int l = 0; l < 21; ++l) {
            const double psi = -1.45 + 2.9 * l / 20.0;
            leaves.emplace_back(cone_patch(ring, psi), U);
        }
        std::mt19937_64 rng(4242u);
        std::uniform_real_distribution<double> ueps(0.05, 0.3);
        std::uniform_real_distribution<double> uphase(0.0, 6.28);
        std::uniform_int_distribution<int> ufreq(1, 3);
        for (int s = 0; s < 5; ++s) {
            const double eps = ueps(rng), phase = uphase(rng);
            const int pf = ufreq(rng), qf = ufreq(rng);
            GraphPsi gp;
            gp.psi = [eps, pf, qf, phase](double xi, double eta) {
                return eps * std::sin(pf * xi + qf * eta + phase);
            };
            gp.grad = [eps, pf, qf, phase](double xi, double eta) {
                const double c = eps * std::cos(pf * xi + qf * eta + phase);
                return std::array<double, 2>{pf * c, qf * c};
            };
            leaves.emplace_back(graph_psi_surface(ring, gp), U);
        }
        rep.admissibility_min = admissibility(rho, leaves, 48);
    }

    const double rtol = 1e-5;
    rep.pass = std::abs(rep.ratio - rep.k_pow) <= rtol * rep.k_pow &&
               std::abs(rep.mean_dist_23 - rep.k_pow) <= rtol * rep.k_pow &&
               std::abs(rep.max_distortion - 1.0 / (k * k)) <= 1e-9 &&
               rep.msp_min > 0.0 && rep.contact_residual_max <= 1e-6;
    return rep;
}

} // namespace heis
