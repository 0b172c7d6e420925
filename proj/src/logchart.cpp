#include "heis/logchart.hpp"

#include <cmath>

namespace heis {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kBand = 2.0 * std::numbers::pi / 3.0; // eta band half-width

void check_psi(double psi) {
    if (!(psi > -kHalfPi && psi < kHalfPi))
        raise(ErrorCode::PsiOutOfRange, "psi must lie in (-pi/2, pi/2)");
}
} // namespace

double wrap_eta(double eta) {
    double e = std::remainder(eta, kEtaPeriod); // (-2pi/3, 2pi/3], up to the edge
    if (e <= -kBand) e += kEtaPeriod;
    return e;
}

double eta_diff(double eta1, double eta0) {
    return std::remainder(eta1 - eta0, kEtaPeriod);
}

Point phi(const LogPoint& q) {
    check_psi(q.psi);
    const double r = std::sqrt(std::cos(q.psi)) * std::exp(q.xi / 2.0);
    const double phase = (q.psi - 3.0 * q.eta) / 2.0;
    // i e^{i phase} = e^{i(phase + pi/2)}
    const Complex z = r * Complex(-std::sin(phase), std::cos(phase));
    return Point{z, -std::sin(q.psi) * std::exp(q.xi)};
}

LogPoint phi_inv(const Point& p) {
    const double r2 = std::norm(p.z);
    if (r2 == 0.0)
        raise(ErrorCode::OnVerticalAxis, "log chart undefined on the vertical axis");
    LogPoint q;
    q.xi = std::log(std::hypot(r2, p.t)); // = (1/2) ln(|z|^4 + t^2)
    q.psi = std::atan2(-p.t, r2);
    q.eta = wrap_eta((q.psi - 2.0 * std::arg(p.z) + std::numbers::pi) / 3.0);
    return q;
}

double jacobian_phi(const LogPoint& q) { return -0.75 * std::exp(2.0 * q.xi); }

double lebesgue_weight(const LogPoint& q) { return 0.75 * std::exp(2.0 * q.xi); }

PhiJacobian phi_jacobian(const LogPoint& q) {
    check_psi(q.psi);
    const Point p = phi(q);
    const double ex = std::exp(q.xi);
    const double tp = std::tan(q.psi);
    // d ln z: dz = z * (coefficient) for each coordinate direction
    const Complex dz_xi = p.z * 0.5;
    const Complex dz_psi = p.z * Complex(-tp / 2.0, 0.5);
    const Complex dz_eta = p.z * Complex(0.0, -1.5);
    PhiJacobian J;
    J.d_xi = Vec3{dz_xi.real(), dz_xi.imag(), -std::sin(q.psi) * ex};
    J.d_psi = Vec3{dz_psi.real(), dz_psi.imag(), -std::cos(q.psi) * ex};
    J.d_eta = Vec3{dz_eta.real(), dz_eta.imag(), 0.0};
    return J;
}

WFields w_fields(const LogPoint& q) {
    check_psi(q.psi);
    const Point p = phi(q);
    const double tp = std::tan(q.psi);
    // Phi_*(W_{xi,eta}) has complex alias (z/2)(1 + i tan psi); Phi_*(d_psi)
    // is its image under J. Both lie in ker omega.
    const Complex mw = 0.5 * p.z * Complex(1.0, tp);
    const Complex mp = Complex(0.0, 1.0) * mw;
    return WFields{HVec{mw.real(), mw.imag()}, HVec{mp.real(), mp.imag()}};
}

} // namespace heis
