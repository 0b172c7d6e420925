#include "heis/contact.hpp"

#include <cmath>

namespace heis {

namespace {

constexpr Complex kI{0.0, 1.0};

bool finite(const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

void check_finite(const HorizDerivs& d) {
    if (!finite(d.ZfI) || !finite(d.ZbfI) || !finite(d.TfI) || !finite(d.Zf3) ||
        !std::isfinite(d.Tf3))
        raise(ErrorCode::DerivOracleFailure,
              "derivative oracle produced a non-finite value");
}

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return c;
}

Vec3 mat_apply(const Mat3& a, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        r[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
    return r;
}

Mat3 mat_inv(const Mat3& m) {
    const double det =
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (det == 0.0 || !std::isfinite(det))
        raise(ErrorCode::DerivOracleFailure, "singular chart Jacobian");
    const double id = 1.0 / det;
    Mat3 r;
    r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * id;
    r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * id;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * id;
    r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * id;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * id;
    r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * id;
    r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * id;
    r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * id;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * id;
    return r;
}

/// lambda = T f_3 + 2 Im(conj(f_I) T f_I), the C3 combination.
double lambda_c3(const Complex& fI, const HorizDerivs& d) {
    return d.Tf3 + 2.0 * std::imag(std::conj(fI) * d.TfI);
}

/// Frame matrix of f_* at p in the {X, Y, T} bases: columns are the frame
/// components of f_* X, f_* Y, f_* T. The bottom row is (0, 0, lambda),
/// which encodes contactness.
Mat3 frame_matrix(const HorizDerivs& d, const Complex& fI) {
    const Complex XfI = d.ZfI + d.ZbfI;
    const Complex YfI = kI * (d.ZfI - d.ZbfI);
    return Mat3{{{XfI.real(), YfI.real(), d.TfI.real()},
                 {XfI.imag(), YfI.imag(), d.TfI.imag()},
                 {0.0, 0.0, lambda_c3(fI, d)}}};
}

HorizDerivs derivs_from_cart_jacobian(const Mat3& J, const Point& p) {
    const Vec3 X{1.0, 0.0, 2.0 * p.y()};
    const Vec3 Y{0.0, 1.0, -2.0 * p.x()};
    const Vec3 T{0.0, 0.0, 1.0};
    const Vec3 fX = mat_apply(J, X), fY = mat_apply(J, Y), fT = mat_apply(J, T);
    const Complex XfI(fX[0], fX[1]), YfI(fY[0], fY[1]);
    HorizDerivs d;
    d.ZfI = 0.5 * (XfI - kI * YfI);
    d.ZbfI = 0.5 * (XfI + kI * YfI);
    d.TfI = Complex(fT[0], fT[1]);
    d.Zf3 = 0.5 * Complex(fX[2], -fY[2]);
    d.Tf3 = fT[2];
    return d;
}

/// Exact cartesian derivatives of a log-form map through the chart chain
/// rule J_f = dPhi(f~(q)) . df~(q) . dPhi(q)^{-1}.
HorizDerivs derivs_via_log_chain(const ContactMap& f, const Point& p) {
    const LogPoint q = phi_inv(p);
    const LogDerivs ld = f.log_derivs(q);
    const LogPoint qi = f.log_apply(q);
    auto columns = [](const PhiJacobian& J) {
        return Mat3{{{J.d_xi[0], J.d_psi[0], J.d_eta[0]},
                     {J.d_xi[1], J.d_psi[1], J.d_eta[1]},
                     {J.d_xi[2], J.d_psi[2], J.d_eta[2]}}};
    };
    const Mat3 A = columns(phi_jacobian(qi));
    const Mat3 L{{ld.dXi, ld.dPsi, ld.dH}};
    const Mat3 B = mat_inv(columns(phi_jacobian(q)));
    return derivs_from_cart_jacobian(mat_mul(A, mat_mul(L, B)), p);
}

} // namespace

LogPoint ContactMap::log_apply(const LogPoint& q) const {
    if (!log_fwd_)
        raise(ErrorCode::DerivOracleFailure, "map has no logarithmic form");
    return log_fwd_(q);
}

HorizDerivs ContactMap::derivs(const Point& p) const {
    if (oracle_) {
        HorizDerivs d = oracle_(p);
        check_finite(d);
        return d;
    }
    if (log_oracle_ && log_fwd_) {
        HorizDerivs d = derivs_via_log_chain(*this, p);
        check_finite(d);
        return d;
    }
    return derivs_fd(p, default_fd_step(p));
}

double ContactMap::default_fd_step(const Point& p) const {
    return 1e-5 * (1.0 + gauge(p));
}

HorizDerivs ContactMap::derivs_fd(const Point& p, double h) const {
    // Differences along the group flows so X, Y, T act as left-invariant
    // fields: right-multiply by (±h,0), (±ih,0), (0,±h).
    auto shifted = [&](const Complex& dz, double dt) {
        return fwd_(group_mul(p, Point{dz, dt}));
    };
    const Point xp = shifted(Complex(h, 0.0), 0.0);
    const Point xm = shifted(Complex(-h, 0.0), 0.0);
    const Point yp = shifted(Complex(0.0, h), 0.0);
    const Point ym = shifted(Complex(0.0, -h), 0.0);
    const Point tp = shifted(Complex(0.0, 0.0), h);
    const Point tm = shifted(Complex(0.0, 0.0), -h);
    const double inv2h = 1.0 / (2.0 * h);
    const Complex XfI = (xp.z - xm.z) * inv2h;
    const Complex YfI = (yp.z - ym.z) * inv2h;
    const double Xf3 = (xp.t - xm.t) * inv2h;
    const double Yf3 = (yp.t - ym.t) * inv2h;
    HorizDerivs d;
    d.ZfI = 0.5 * (XfI - kI * YfI);
    d.ZbfI = 0.5 * (XfI + kI * YfI);
    d.TfI = (tp.z - tm.z) * inv2h;
    d.Zf3 = 0.5 * Complex(Xf3, -Yf3);
    d.Tf3 = (tp.t - tm.t) * inv2h;
    check_finite(d);
    return d;
}

LogDerivs ContactMap::log_derivs(const LogPoint& q) const {
    if (log_oracle_) return log_oracle_(q);
    return log_derivs_fd(q, 1e-6 * (1.0 + std::abs(q.xi)));
}

LogDerivs ContactMap::log_derivs_fd(const LogPoint& q, double h) const {
    if (!log_fwd_)
        raise(ErrorCode::DerivOracleFailure, "map has no logarithmic form");
    const double half_pi = std::numbers::pi / 2.0;
    const double room = half_pi - std::abs(q.psi);
    const double hp = std::min(h, 0.45 * room);
    if (!(hp > 0.0))
        raise(ErrorCode::DerivOracleFailure, "psi too close to the chart edge");
    auto diff = [this](const LogPoint& a, const LogPoint& b, double step) {
        const LogPoint fa = log_fwd_(a), fb = log_fwd_(b);
        return Vec3{(fa.xi - fb.xi) / (2.0 * step),
                    (fa.psi - fb.psi) / (2.0 * step),
                    eta_diff(fa.eta, fb.eta) / (2.0 * step)};
    };
    const Vec3 gx = diff({q.xi + h, q.psi, q.eta}, {q.xi - h, q.psi, q.eta}, h);
    const Vec3 gp = diff({q.xi, q.psi + hp, q.eta}, {q.xi, q.psi - hp, q.eta}, hp);
    const Vec3 ge = diff({q.xi, q.psi, q.eta + h}, {q.xi, q.psi, q.eta - h}, h);
    LogDerivs d;
    d.dXi = Vec3{gx[0], gp[0], ge[0]};
    d.dPsi = Vec3{gx[1], gp[1], ge[1]};
    d.dH = Vec3{gx[2], gp[2], ge[2]};
    return d;
}

std::pair<Complex, Complex> horiz_derivatives(const ContactMap& f, const Point& p) {
    const HorizDerivs d = f.derivs(p);
    return {d.ZfI, d.ZbfI};
}

BeltramiData beltrami(const ContactMap& f, const Point& p) {
    const HorizDerivs d = f.derivs(p);
    const double az = std::abs(d.ZfI);
    if (az <= 1e-12 * (1.0 + std::abs(d.ZbfI)))
        raise(ErrorCode::DegenerateDerivative, "Z f_I vanishes at this point");
    BeltramiData out;
    out.mu = d.ZbfI / d.ZfI;
    const double amu = std::abs(out.mu);
    if (amu >= 1.0)
        raise(ErrorCode::DegenerateDerivative,
              "|mu| >= 1: map is not orientation-preserving quasiconformal here");
    out.K = (1.0 + amu) / (1.0 - amu);
    out.lambda = std::norm(d.ZfI) - std::norm(d.ZbfI);
    out.jac = out.lambda * out.lambda;
    return out;
}

namespace {
ContactResiduals residuals_from(const Complex& fI, const HorizDerivs& d) {
    ContactResiduals r;
    // Z conj(f_I) = conj(Zbar f_I); Zbar conj(f_I) = conj(Z f_I);
    // Zbar f_3 = conj(Z f_3).
    r.r1 = std::conj(fI) * d.ZfI - fI * std::conj(d.ZbfI) + kI * d.Zf3;
    r.r2 = fI * std::conj(d.ZfI) - std::conj(fI) * d.ZbfI - kI * std::conj(d.Zf3);
    r.lambda = lambda_c3(fI, d);
    return r;
}
} // namespace

ContactResiduals contact_residuals(const ContactMap& f, const Point& p) {
    return residuals_from(f(p).z, f.derivs(p));
}

ContactResiduals contact_residuals_fd(const ContactMap& f, const Point& p,
                                      double h) {
    return residuals_from(f(p).z, f.derivs_fd(p, h));
}

double jacobian_det_fd(const ContactMap& f, const Point& p, double h) {
    // Plain coordinate differences, independent of the group-flow scheme.
    auto at = [&](double dx, double dy, double dt) {
        const Point q = f(Point{p.z + Complex(dx, dy), p.t + dt});
        return Vec3{q.x(), q.y(), q.t};
    };
    Mat3 J;
    const Vec3 cols[3] = {{h, 0.0, 0.0}, {0.0, h, 0.0}, {0.0, 0.0, h}};
    for (int j = 0; j < 3; ++j) {
        const Vec3 fp = at(cols[j][0], cols[j][1], cols[j][2]);
        const Vec3 fm = at(-cols[j][0], -cols[j][1], -cols[j][2]);
        for (int i = 0; i < 3; ++i) J[i][j] = (fp[i] - fm[i]) / (2.0 * h);
    }
    return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
           J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
           J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
}

NormalData pushforward_normal(const ContactMap& f, const SurfacePatch& s,
                              double u, double v) {
    const Point p = s.at(u, v);
    const HorizDerivs d = f.derivs(p);
    const NormalData nd = horizontal_normal(s, u, v);
    const Complex XfI = d.ZfI + d.ZbfI;
    const Complex YfI = kI * (d.ZfI - d.ZbfI);
    const double Xf1 = XfI.real(), Xf2 = XfI.imag();
    const double Yf1 = YfI.real(), Yf2 = YfI.imag();
    const double lambda = Xf1 * Yf2 - Yf1 * Xf2; // = |Zf_I|^2 - |Zbf_I|^2
    const double n1 = nd.n_h.a, n2 = nd.n_h.b;
    HVec img{lambda * (n1 * Yf2 - n2 * Xf2), lambda * (n2 * Xf1 - n1 * Yf1)};
    const double norm = img.norm();
    return NormalData{img, norm, norm < characteristic_eps(s, u, v)};
}

Sandwich normal_sandwich(const ContactMap& f, const SurfacePatch& s, double u,
                         double v) {
    const NormalData nd = horizontal_normal(s, u, v);
    if (nd.is_characteristic)
        raise(ErrorCode::CharacteristicPoint,
              "sandwich bound needs a non-characteristic point");
    const HorizDerivs d = f.derivs(s.at(u, v));
    const double az = std::abs(d.ZfI), azb = std::abs(d.ZbfI);
    const double lambda = std::norm(d.ZfI) - std::norm(d.ZbfI);
    Sandwich sw;
    sw.lower = lambda * (az - azb) * nd.norm;
    sw.upper = lambda * (az + azb) * nd.norm;
    sw.value = pushforward_normal(f, s, u, v).norm;
    return sw;
}

double msp_value(const ContactMap& f, const SurfacePatch& s, double u, double v) {
    const NormalData nd = horizontal_normal(s, u, v);
    if (nd.is_characteristic)
        raise(ErrorCode::CharacteristicPoint,
              "mSP quantity undefined at a characteristic point");
    const BeltramiData b = beltrami(f, s.at(u, v));
    const Complex m = nd.n_h.m();
    // e^{-2i arg m} = conj(m)^2 / |m|^2
    const Complex cm = std::conj(m);
    return std::real(b.mu * cm * cm) / std::norm(m);
}

MspClass msp_check(const ContactMap& f, const SurfacePatch& s, double u, double v,
                   double tol) {
    const NormalData nd = horizontal_normal(s, u, v);
    if (nd.is_characteristic)
        raise(ErrorCode::CharacteristicPoint,
              "mSP classification needs a non-characteristic point");
    const BeltramiData b = beltrami(f, s.at(u, v));
    const double amu = std::abs(b.mu);
    if (amu <= tol) return MspClass::Conformal;
    const Complex cm = std::conj(nd.n_h.m());
    const double val = std::real(b.mu * cm * cm) / std::norm(nd.n_h.m());
    const double scale = tol * (1.0 + amu);
    if (amu - val <= scale) return MspClass::Minimal;
    if (amu + val <= scale) return MspClass::Maximal;
    return MspClass::Interior;
}

LogResiduals log_contact_residuals(const ContactMap& f, const LogPoint& q) {
    const LogDerivs d = f.log_derivs(q);
    const LogPoint img = f.log_apply(q);
    const double tps = std::tan(q.psi); // source psi in W_{xi,eta}
    auto W = [tps](const Vec3& g) { return g[0] - (tps / 3.0) * g[2]; };
    LogResiduals r;
    r.r1 = d.dH[1] + img.psi * d.dXi[1] / 3.0;
    r.r1_alt = d.dH[1] + std::tan(img.psi) * d.dXi[1] / 3.0;
    r.r2 = W(d.dH) + std::tan(img.psi) * W(d.dXi) / 3.0;
    return r;
}

double log_beltrami_abs(const LogDerivs& d, double tan_psi) {
    const Complex Xi_xi(d.dXi[0], d.dPsi[0]);
    const Complex Xi_psi(d.dXi[1], d.dPsi[1]);
    const Complex Xi_eta(d.dXi[2], d.dPsi[2]);
    const Complex Wd = Xi_xi - (tan_psi / 3.0) * Xi_eta; // W_{xi,eta}(Xi + i Psi)
    const Complex Wm = Wd - kI * Xi_psi;                 // W = W_{xi,eta} - i d_psi
    const Complex Wp = Wd + kI * Xi_psi;
    const double denom = std::abs(Wm);
    if (denom <= 1e-300)
        raise(ErrorCode::DegenerateDerivative, "W(Xi + i Psi) vanishes");
    return std::abs(Wp) / denom;
}

Complex log_beltrami(const ContactMap& f, const LogPoint& q) {
    const LogDerivs d = f.log_derivs(q);
    const double tps = std::tan(q.psi);
    const Complex Xi_xi(d.dXi[0], d.dPsi[0]);
    const Complex Xi_psi(d.dXi[1], d.dPsi[1]);
    const Complex Xi_eta(d.dXi[2], d.dPsi[2]);
    const Complex Wd = Xi_xi - (tps / 3.0) * Xi_eta;
    const Complex Wm = Wd - kI * Xi_psi;
    const Complex Wp = Wd + kI * Xi_psi;
    if (std::abs(Wm) <= 1e-12 * (1.0 + std::abs(Wp)))
        raise(ErrorCode::DegenerateDerivative, "W(Xi + i Psi) vanishes");
    return -std::polar(1.0, 3.0 * (q.psi - q.eta)) * Wp / Wm;
}

SurfacePatch composed_patch(const ContactMap& f, const SurfacePatch& s) {
    return SurfacePatch(s.domain(),
                        [f, s](double u, double v) { return f(s.at(u, v)); });
}

SurfaceContactoReport surface_contacto_residual(const ContactMap& f,
                                                const SurfacePatch& s,
                                                int grid_n) {
    const SurfacePatch img = composed_patch(f, s);
    const num::Rect& dom = s.domain();
    SurfaceContactoReport rep;
    bool first = true;
    for (int i = 0; i < grid_n; ++i) {
        const double u = dom.u0 + (i + 0.5) * dom.width() / grid_n;
        for (int j = 0; j < grid_n; ++j) {
            const double v = dom.v0 + (j + 0.5) * dom.height() / grid_n;
            if (characteristic_test(s, u, v, characteristic_eps(s, u, v))) continue;
            const auto [wu, wv] = induced_form(s, u, v);
            const auto [tu, tv] = induced_form(img, u, v);
            const double denom = wu * wu + wv * wv;
            const double lam = (tu * wu + tv * wv) / denom;
            const double du = tu - lam * wu, dv = tv - lam * wv;
            rep.max_defect = std::max(rep.max_defect, std::hypot(du, dv));
            rep.min_lambda = first ? lam : std::min(rep.min_lambda, lam);
            rep.max_lambda = first ? lam : std::max(rep.max_lambda, lam);
            first = false;
            ++rep.points_used;
        }
    }
    return rep;
}

ContactMap identity_map() {
    ContactMap m([](const Point& p) { return p; });
    m.with_oracle([](const Point& p) {
        HorizDerivs d;
        d.ZfI = Complex(1.0, 0.0);
        d.Zf3 = kI * std::conj(p.z);
        d.Tf3 = 1.0;
        return d;
    });
    m.with_log_form([](const LogPoint& q) { return q; },
                    [](const LogPoint&) {
                        LogDerivs d;
                        d.dXi = Vec3{1.0, 0.0, 0.0};
                        d.dPsi = Vec3{0.0, 1.0, 0.0};
                        d.dH = Vec3{0.0, 0.0, 1.0};
                        return d;
                    });
    return m;
}

ContactMap rotation_map(double theta) {
    const Complex rot = std::polar(1.0, theta);
    ContactMap m([rot](const Point& p) { return Point{rot * p.z, p.t}; });
    m.with_oracle([rot](const Point& p) {
        HorizDerivs d;
        d.ZfI = rot;
        d.Zf3 = kI * std::conj(p.z);
        d.Tf3 = 1.0;
        return d;
    });
    // In log coordinates a rotation is the eta translation eta - 2 theta / 3.
    const double eta_shift = -2.0 * theta / 3.0;
    m.with_log_form(
        [eta_shift](const LogPoint& q) {
            return LogPoint{q.xi, q.psi, wrap_eta(q.eta + eta_shift)};
        },
        [](const LogPoint&) {
            LogDerivs d;
            d.dXi = Vec3{1.0, 0.0, 0.0};
            d.dPsi = Vec3{0.0, 1.0, 0.0};
            d.dH = Vec3{0.0, 0.0, 1.0};
            return d;
        });
    return m;
}

ContactMap dilation_map(double delta) {
    if (!(delta > 0.0))
        raise(ErrorCode::InvalidArgument, "dilation factor must be positive");
    ContactMap m([delta](const Point& p) { return dilate(delta, p); });
    m.with_oracle([delta](const Point& p) {
        HorizDerivs d;
        d.ZfI = Complex(delta, 0.0);
        d.Zf3 = kI * std::conj(p.z) * (delta * delta);
        d.Tf3 = delta * delta;
        return d;
    });
    const double xi_shift = 2.0 * std::log(delta);
    m.with_log_form(
        [xi_shift](const LogPoint& q) {
            return LogPoint{q.xi + xi_shift, q.psi, q.eta};
        },
        [](const LogPoint&) {
            LogDerivs d;
            d.dXi = Vec3{1.0, 0.0, 0.0};
            d.dPsi = Vec3{0.0, 1.0, 0.0};
            d.dH = Vec3{0.0, 0.0, 1.0};
            return d;
        });
    return m;
}

ContactMap translation_map(const Point& g) {
    ContactMap m([g](const Point& p) { return left_translate(g, p); });
    m.with_oracle([g](const Point& p) {
        HorizDerivs d;
        d.ZfI = Complex(1.0, 0.0);
        d.Zf3 = kI * std::conj(g.z + p.z);
        d.Tf3 = 1.0;
        return d;
    });
    return m;
}

ContactMap inversion_map() {
    ContactMap m([](const Point& p) { return invert(p); });
    m.with_oracle([](const Point& p) {
        if (p.z == Complex(0.0, 0.0) && p.t == 0.0)
            raise(ErrorCode::InversionAtOrigin, "inversion derivative at origin");
        const Complex w = p.w();
        const Complex w2 = w * w;
        const double aw2 = std::norm(w); // |w|^2 = |z|^4 + t^2
        const double r2 = std::norm(p.z);
        HorizDerivs d;
        d.ZfI = std::conj(w) / w2;
        d.ZbfI = Complex(0.0, 0.0);
        d.TfI = -kI * p.z / w2;
        d.Zf3 = std::conj(p.z) *
                Complex(2.0 * p.t * r2, p.t * p.t - r2 * r2) / (aw2 * aw2);
        d.Tf3 = (p.t * p.t - r2 * r2) / (aw2 * aw2);
        return d;
    });
    return m;
}

ContactMap compose(const ContactMap& a, const ContactMap& b) {
    ContactMap m([a, b](const Point& p) { return a(b(p)); });
    m.with_oracle([a, b](const Point& p) {
        const Point pb = b(p);
        const HorizDerivs db = b.derivs(p);
        const HorizDerivs da = a.derivs(pb);
        const Point pc = a(pb);
        const Mat3 M = mat_mul(frame_matrix(da, pb.z), frame_matrix(db, p.z));
        const Complex XfI(M[0][0], M[1][0]);
        const Complex YfI(M[0][1], M[1][1]);
        HorizDerivs d;
        d.ZfI = 0.5 * (XfI - kI * YfI);
        d.ZbfI = 0.5 * (XfI + kI * YfI);
        d.TfI = Complex(M[0][2], M[1][2]);
        // f_3 derivatives recovered from contactness of the factors.
        const double Xf3 = 2.0 * pc.y() * M[0][0] - 2.0 * pc.x() * M[1][0];
        const double Yf3 = 2.0 * pc.y() * M[0][1] - 2.0 * pc.x() * M[1][1];
        d.Zf3 = 0.5 * Complex(Xf3, -Yf3);
        d.Tf3 = M[2][2] - 2.0 * std::imag(std::conj(pc.z) * d.TfI);
        return d;
    });
    if (a.has_log_form() && b.has_log_form()) {
        m.with_log_form(
            [a, b](const LogPoint& q) { return a.log_apply(b.log_apply(q)); },
            (a.has_log_oracle() && b.has_log_oracle())
                ? ContactMap::LogOracle([a, b](const LogPoint& q) {
                      const LogDerivs db = b.log_derivs(q);
                      const LogDerivs da = a.log_derivs(b.log_apply(q));
                      const Mat3 Ma{{da.dXi, da.dPsi, da.dH}};
                      const Mat3 Mb{{db.dXi, db.dPsi, db.dH}};
                      const Mat3 M = mat_mul(Ma, Mb);
                      return LogDerivs{M[0], M[1], M[2]};
                  })
                : ContactMap::LogOracle(nullptr));
    }
    return m;
}

} // namespace heis
