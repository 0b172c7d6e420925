#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "heis/core.hpp"
#include "heis/density.hpp"
#include "heis/numerics.hpp"

namespace heis {

/// A C^2 parametrized surface patch over an open rectangle, with either
/// analytic partials or a central finite-difference oracle.
///
/// Injectivity on the domain and rank-2 regularity are contracts of the
/// caller; regularity is spot-checked by the tests, not here.
class SurfacePatch {
public:
    using MapFn = std::function<Point(double, double)>;
    /// Returns the cartesian partials (sigma_u, sigma_v) as (x,y,t) triples.
    using DerivFn = std::function<std::pair<Vec3, Vec3>(double, double)>;

    SurfacePatch(num::Rect domain, MapFn map)
        : domain_(domain), map_(std::move(map)) {}

    SurfacePatch(num::Rect domain, MapFn map, DerivFn partials)
        : domain_(domain), map_(std::move(map)), partials_(std::move(partials)) {}

    Point at(double u, double v) const { return map_(u, v); }
    const num::Rect& domain() const { return domain_; }
    bool has_analytic_partials() const { return static_cast<bool>(partials_); }

    /// Analytic partials when available, otherwise central differences.
    std::pair<Vec3, Vec3> partials(double u, double v) const;

    /// Central differences regardless of the analytic oracle; used to
    /// cross-validate analytic derivatives.
    std::pair<Vec3, Vec3> partials_fd(double u, double v) const;

    /// Step h = 1e-5 (1 + |u| + |v|).
    double fd_step(double u, double v) const;

private:
    num::Rect domain_;
    MapFn map_;
    DerivFn partials_;
};

/// Horizontal normal N^h at a patch point together with its sub-Riemannian
/// norm and the characteristic flag (norm < eps).
struct NormalData {
    HVec n_h;
    double norm = 0.0;
    bool is_characteristic = false;
};

/// Default characteristic threshold at a patch point.
double characteristic_eps(const SurfacePatch& s, double u, double v);

/// N^h_sigma from the 2x2 Jacobians of the patch components.
NormalData horizontal_normal(const SurfacePatch& s, double u, double v);
NormalData horizontal_normal(const SurfacePatch& s, double u, double v,
                             double eps_char);

bool characteristic_test(const SurfacePatch& s, double u, double v, double eps);

/// Coefficients (omega_u, omega_v) of the induced 1-form
/// omega_S = (t_u + 2x y_u - 2y x_u) du + (t_v + 2x y_v - 2y x_v) dv.
std::pair<double, double> induced_form(const SurfacePatch& s, double u, double v);

/// Parameter-plane field (beta, -alpha) whose pushforward is the unit
/// horizontal vector J nu^h_S. Throws at characteristic points.
std::pair<double, double> horizontal_flow_field(const SurfacePatch& s, double u,
                                                double v);

struct FlowLine {
    std::vector<std::array<double, 2>> points;
    bool hit_characteristic = false;
    bool left_domain = false;
};

/// Fixed-step RK4 integration of the horizontal flow field. Stops early
/// when a characteristic point or the domain boundary is reached.
FlowLine integrate_flow(const SurfacePatch& s, std::array<double, 2> start,
                        int n_steps, double h);

/// True iff |omega_u du + omega_v dv| <= tol at every sample
/// ((u,v), (du,dv)).
bool is_horizontal_curve(
    const SurfacePatch& s,
    std::span<const std::pair<std::array<double, 2>, std::array<double, 2>>> samples,
    double tol = 1e-9);

/// Horizontal area A^h(R) = integral of ||N^h|| over the region, by tensor
/// Gauss-Legendre with a Richardson convergence check.
double horizontal_area(const SurfacePatch& s, const num::Rect& region,
                       int quad_n = 64);

/// Horizontal area integral of rho over the region:
/// int rho(sigma(u,v)) ||N^h_sigma(u,v)|| du dv.
double horizontal_area_integral(const Density& rho, const SurfacePatch& s,
                                const num::Rect& region, int quad_n = 64);

// Built-in patches used by tests and the CLI.
SurfacePatch plane_t0_patch(const num::Rect& domain);
SurfacePatch vertical_plane_y0_patch(const num::Rect& domain);
/// Gauge sphere of the given radius, parametrized by (psi, eta).
SurfacePatch gauge_sphere_patch(double radius, double psi_margin = 0.15);

} // namespace heis
