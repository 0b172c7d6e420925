#include "heis/core.hpp"

namespace heis {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::OnVerticalAxis: return "OnVerticalAxis";
        case ErrorCode::PsiOutOfRange: return "PsiOutOfRange";
        case ErrorCode::InversionAtOrigin: return "InversionAtOrigin";
        case ErrorCode::CharacteristicPoint: return "CharacteristicPoint";
        case ErrorCode::DegenerateDerivative: return "DegenerateDerivative";
        case ErrorCode::DerivOracleFailure: return "DerivOracleFailure";
        case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
        case ErrorCode::PointNotOnFoliation: return "PointNotOnFoliation";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::UnknownMap: return "UnknownMap";
        case ErrorCode::SpecParse: return "SpecParse";
        case ErrorCode::KOutOfRange: return "KOutOfRange";
        case ErrorCode::NotLeafConstant: return "NotLeafConstant";
        case ErrorCode::Internal: return "Internal";
    }
    return "Internal";
}

Point group_mul(const Point& p, const Point& q) {
    // (z,t)*(w,s) = (z+w, t+s+2 Im(conj(w) z))
    return Point{p.z + q.z, p.t + q.t + 2.0 * std::imag(std::conj(q.z) * p.z)};
}

Point group_inv(const Point& p) { return Point{-p.z, -p.t}; }

double gauge(const Point& p) {
    // | |z|^2 - i t |^{1/2}; hypot avoids overflow in the squares
    return std::sqrt(std::hypot(std::norm(p.z), p.t));
}

double dist(const Point& p, const Point& q) {
    return gauge(group_mul(group_inv(p), q));
}

Point left_translate(const Point& g, const Point& p) { return group_mul(g, p); }

Point rotate(double theta, const Point& p) {
    return Point{p.z * std::polar(1.0, theta), p.t};
}

Point dilate(double delta, const Point& p) {
    return Point{delta * p.z, delta * delta * p.t};
}

Point invert(const Point& p) {
    if (p.z == Complex(0.0, 0.0) && p.t == 0.0)
        raise(ErrorCode::InversionAtOrigin, "inversion is undefined at the origin");
    const Complex denom(-std::norm(p.z), p.t); // -|z|^2 + it = -w
    const double w2 = std::norm(denom);        // |z|^4 + t^2
    return Point{p.z / denom, -p.t / w2};
}

double contact_form(const Point& p, const Vec3& v) {
    return v[2] + 2.0 * p.x() * v[1] - 2.0 * p.y() * v[0];
}

TangentVec to_frame(const Point& p, const Vec3& v) {
    return TangentVec{v[0], v[1], v[2] - 2.0 * p.y() * v[0] + 2.0 * p.x() * v[1]};
}

Vec3 to_cartesian(const Point& p, const TangentVec& v) {
    return Vec3{v.a, v.b, v.c + 2.0 * p.y() * v.a - 2.0 * p.x() * v.b};
}

TangentVec heis_wedge(const TangentVec& u, const TangentVec& v) {
    return TangentVec{u.b * v.c - u.c * v.b,
                      u.c * v.a - u.a * v.c,
                      u.a * v.b - u.b * v.a};
}

} // namespace heis
