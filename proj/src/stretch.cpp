#include "heis/stretch.hpp"

#include <cmath>

namespace heis {

namespace {
void check_k(double k) {
    if (!(k > 0.0))
        raise(ErrorCode::InvalidArgument, "stretch parameter k must be positive");
}
} // namespace

LogPoint stretch_log(double k, const LogPoint& q) {
    check_k(k);
    if (k == 1.0) return q;
    return LogPoint{k * q.xi, std::atan(std::tan(q.psi) / k), q.eta};
}

Point stretch_cart(double k, const Point& p) {
    check_k(k);
    if (p.z == Complex(0.0, 0.0))
        raise(ErrorCode::OnVerticalAxis, "stretch formula needs z != 0");
    if (k == 1.0) return p;
    const Complex w = p.w(); // |z|^2 - it
    const double aw = std::abs(w);
    const Complex denom(k * std::norm(p.z), p.t); // k|z|^2 + it
    const Complex fI = std::sqrt(k) * p.z * std::sqrt(std::conj(w) / denom) *
                       std::pow(aw, 0.5 * (k - 1.0));
    const double f3 = p.t * std::pow(aw, k) / std::abs(denom);
    return Point{fI, f3};
}

Complex stretch_beltrami(double k, const LogPoint& q) {
    check_k(k);
    const double t = std::tan(q.psi);
    const double ratio = (k * k - 1.0) / (k * k + 1.0 + 2.0 * t * t);
    return -std::polar(1.0, 3.0 * (q.psi - q.eta)) * ratio;
}

double stretch_distortion(double k, double psi) {
    check_k(k);
    if (!(std::abs(psi) < std::numbers::pi / 2.0))
        raise(ErrorCode::PsiOutOfRange, "psi must lie in (-pi/2, pi/2)");
    const double t2 = std::tan(psi) * std::tan(psi);
    return (1.0 + t2) / (k * k + t2);
}

ContactMap stretch_map(double k) {
    check_k(k);
    ContactMap m([k](const Point& p) { return stretch_cart(k, p); });
    m.with_log_form(
        [k](const LogPoint& q) { return stretch_log(k, q); },
        [k](const LogPoint& q) {
            const double t = std::tan(q.psi);
            LogDerivs d;
            d.dXi = Vec3{k, 0.0, 0.0};
            d.dPsi = Vec3{0.0, k * (1.0 + t * t) / (k * k + t * t), 0.0};
            d.dH = Vec3{0.0, 0.0, 1.0};
            return d;
        });
    return m;
}

} // namespace heis
