#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "heis/error.hpp"

namespace heis {

using Complex = std::complex<double>;

/// Cartesian components (x, y, t) of a point or of a tangent vector.
using Vec3 = std::array<double, 3>;

/// A point of the first Heisenberg group: horizontal part z, vertical part t.
struct Point {
    Complex z{0.0, 0.0};
    double t = 0.0;

    double x() const { return z.real(); }
    double y() const { return z.imag(); }

    /// w = |z|^2 - i t, the complex combination whose modulus is gauge^2.
    Complex w() const { return Complex(std::norm(z), -t); }
};

/// Group law: (z,t)*(w,s) = (z+w, t+s+2 Im(conj(w) z)).
Point group_mul(const Point& p, const Point& q);

/// Inverse of (z,t) is (-z,-t).
Point group_inv(const Point& p);

/// Koranyi gauge ||(z,t)|| = | |z|^2 - i t |^{1/2}.
double gauge(const Point& p);

/// Left-invariant distance d(p,q) = ||p^{-1} * q||.
double dist(const Point& p, const Point& q);

// Similarities of the group.
Point left_translate(const Point& g, const Point& p);
Point rotate(double theta, const Point& p);
Point dilate(double delta, const Point& p);
/// Inversion in the unit gauge sphere; rejects the origin.
Point invert(const Point& p);

/// Tangent vector in the left-invariant frame {X, Y, T} at a base point.
struct TangentVec {
    double a = 0.0; // X component
    double b = 0.0; // Y component
    double c = 0.0; // T component
};

/// Horizontal vector, components in {X, Y}; m = a + i b is the complex alias.
struct HVec {
    double a = 0.0;
    double b = 0.0;

    Complex m() const { return Complex(a, b); }
    double norm() const { return std::hypot(a, b); }
};

/// Contact form omega = dt + 2x dy - 2y dx applied to cartesian components.
double contact_form(const Point& p, const Vec3& v_cart);

/// Cartesian components -> frame components at p. The T component equals
/// omega(v), so horizontal vectors have c = 0.
TangentVec to_frame(const Point& p, const Vec3& v_cart);

/// Frame components at p -> cartesian components (exact inverse of to_frame).
Vec3 to_cartesian(const Point& p, const TangentVec& v);

/// Heisenberg wedge product, the formal determinant in frame components.
/// Satisfies the clock rule X ^ Y = T, Y ^ T = X, T ^ X = Y.
TangentVec heis_wedge(const TangentVec& u, const TangentVec& v);

/// The complex operator J on horizontal vectors: JX = Y, JY = -X.
inline HVec j_op(const HVec& h) { return HVec{-h.b, h.a}; }

} // namespace heis
