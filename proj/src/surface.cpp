#include "heis/surface.hpp"

#include <cmath>

#include "heis/logchart.hpp"

namespace heis {

std::pair<Vec3, Vec3> SurfacePatch::partials(double u, double v) const {
    if (partials_) return partials_(u, v);
    return partials_fd(u, v);
}

std::pair<Vec3, Vec3> SurfacePatch::partials_fd(double u, double v) const {
    const double h = fd_step(u, v);
    auto cart = [this](double uu, double vv) {
        const Point p = map_(uu, vv);
        return Vec3{p.x(), p.y(), p.t};
    };
    const Vec3 up = cart(u + h, v), um = cart(u - h, v);
    const Vec3 vp = cart(u, v + h), vm = cart(u, v - h);
    Vec3 su, sv;
    for (int i = 0; i < 3; ++i) {
        su[i] = (up[i] - um[i]) / (2.0 * h);
        sv[i] = (vp[i] - vm[i]) / (2.0 * h);
    }
    return {su, sv};
}

double SurfacePatch::fd_step(double u, double v) const {
    return 1e-5 * (1.0 + std::abs(u) + std::abs(v));
}

double characteristic_eps(const SurfacePatch& s, double u, double v) {
    const Point p = s.at(u, v);
    const double scale =
        std::abs(p.x()) + std::abs(p.y()) + std::abs(p.t) + std::abs(u) + std::abs(v);
    return 1e-10 * (1.0 + scale);
}

namespace {
struct Jacobians {
    double dyt, dtx, dxy; // the three 2x2 minors of (x,y,t) wrt (u,v)
};

Jacobians minors(const Vec3& su, const Vec3& sv) {
    return Jacobians{su[1] * sv[2] - sv[1] * su[2],
                     su[2] * sv[0] - sv[2] * su[0],
                     su[0] * sv[1] - sv[0] * su[1]};
}
} // namespace

NormalData horizontal_normal(const SurfacePatch& s, double u, double v,
                             double eps_char) {
    const auto [su, sv] = s.partials(u, v);
    const Point p = s.at(u, v);
    const Jacobians m = minors(su, sv);
    HVec n{m.dyt + 2.0 * p.y() * m.dxy, m.dtx - 2.0 * p.x() * m.dxy};
    const double norm = n.norm();
    return NormalData{n, norm, norm < eps_char};
}

NormalData horizontal_normal(const SurfacePatch& s, double u, double v) {
    return horizontal_normal(s, u, v, characteristic_eps(s, u, v));
}

bool characteristic_test(const SurfacePatch& s, double u, double v, double eps) {
    return horizontal_normal(s, u, v, eps).is_characteristic;
}

std::pair<double, double> induced_form(const SurfacePatch& s, double u, double v) {
    const auto [su, sv] = s.partials(u, v);
    const Point p = s.at(u, v);
    const double wu = su[2] + 2.0 * p.x() * su[1] - 2.0 * p.y() * su[0];
    const double wv = sv[2] + 2.0 * p.x() * sv[1] - 2.0 * p.y() * sv[0];
    return {wu, wv};
}

std::pair<double, double> horizontal_flow_field(const SurfacePatch& s, double u,
                                                double v) {
    const NormalData nd = horizontal_normal(s, u, v);
    if (nd.is_characteristic)
        raise(ErrorCode::CharacteristicPoint,
              "horizontal flow is singular at a characteristic point");
    const auto [wu, wv] = induced_form(s, u, v);
    // alpha = omega_u / ||N||, beta = omega_v / ||N||; the flow is
    // beta d/du - alpha d/dv.
    return {wv / nd.norm, -wu / nd.norm};
}

FlowLine integrate_flow(const SurfacePatch& s, std::array<double, 2> start,
                        int n_steps, double h) {
    FlowLine line;
    {
        const NormalData nd = horizontal_normal(s, start[0], start[1]);
        if (nd.is_characteristic)
            raise(ErrorCode::CharacteristicPoint,
                  "flow line started at a characteristic point");
    }
    line.points.push_back(start);
    num::State2 state{start[0], start[1]};
    auto field = [&s](const num::State2& q) {
        auto [du, dv] = horizontal_flow_field(s, q[0], q[1]);
        return num::State2{du, dv};
    };
    for (int i = 0; i < n_steps; ++i) {
        num::State2 next;
        try {
            next = num::rk4_step(field, state, h);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::CharacteristicPoint) {
                line.hit_characteristic = true;
                break;
            }
            throw;
        }
        if (!s.domain().contains(next[0], next[1])) {
            line.left_domain = true;
            break;
        }
        if (characteristic_test(s, next[0], next[1],
                                characteristic_eps(s, next[0], next[1]))) {
            line.hit_characteristic = true;
            break;
        }
        state = next;
        line.points.push_back({state[0], state[1]});
    }
    return line;
}

bool is_horizontal_curve(
    const SurfacePatch& s,
    std::span<const std::pair<std::array<double, 2>, std::array<double, 2>>> samples,
    double tol) {
    for (const auto& [uv, duv] : samples) {
        const auto [wu, wv] = induced_form(s, uv[0], uv[1]);
        if (std::abs(wu * duv[0] + wv * duv[1]) > tol) return false;
    }
    return true;
}

double horizontal_area(const SurfacePatch& s, const num::Rect& region, int quad_n) {
    return num::gauss_rect_checked(
        [&s](double u, double v) { return horizontal_normal(s, u, v).norm; },
        region, quad_n, 1e-9, 1e-12);
}

double horizontal_area_integral(const Density& rho, const SurfacePatch& s,
                                const num::Rect& region, int quad_n) {
    return num::gauss_rect_checked(
        [&](double u, double v) {
            const NormalData nd = horizontal_normal(s, u, v);
            return rho(s.at(u, v)) * nd.norm;
        },
        region, quad_n, 1e-9, 1e-12);
}

SurfacePatch plane_t0_patch(const num::Rect& domain) {
    return SurfacePatch(
        domain, [](double u, double v) { return Point{Complex(u, v), 0.0}; },
        [](double, double) {
            return std::make_pair(Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0});
        });
}

SurfacePatch vertical_plane_y0_patch(const num::Rect& domain) {
    return SurfacePatch(
        domain, [](double u, double v) { return Point{Complex(u, 0.0), v}; },
        [](double, double) {
            return std::make_pair(Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 0.0, 1.0});
        });
}

SurfacePatch gauge_sphere_patch(double radius, double psi_margin) {
    if (!(radius > 0.0))
        raise(ErrorCode::InvalidArgument, "sphere radius must be positive");
    const double xi0 = 2.0 * std::log(radius);
    const double half_pi = std::numbers::pi / 2.0;
    const num::Rect dom{-half_pi + psi_margin, half_pi - psi_margin,
                        -2.0 * std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0};
    return SurfacePatch(
        dom,
        [xi0](double psi, double eta) { return phi(LogPoint{xi0, psi, eta}); },
        [xi0](double psi, double eta) {
            const PhiJacobian J = phi_jacobian(LogPoint{xi0, psi, eta});
            return std::make_pair(J.d_psi, J.d_eta);
        });
}

} // namespace heis
