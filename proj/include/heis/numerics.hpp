#pragma once

#include <array>
#include <functional>
#include <vector>

#include "heis/error.hpp"

namespace heis::num {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
};

/// Cached rule lookup; rules are computed once and shared read-only.
const QuadratureRule& gauss_legendre(int n);

/// Axis-aligned open rectangle (u0,u1) x (v0,v1).
struct Rect {
    double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
    double width() const { return u1 - u0; }
    double height() const { return v1 - v0; }
    double area() const { return width() * height(); }
    bool contains(double u, double v) const {
        return u > u0 && u < u1 && v > v0 && v < v1;
    }
};

/// n-point Gauss-Legendre estimate of the 1-D integral over [a, b].
double gauss_interval(const std::function<double(double)>& f, double a,
                      double b, int n);

/// Tensor Gauss-Legendre estimate over a rectangle, n points per axis.
double gauss_rect(const std::function<double(double, double)>& f,
                  const Rect& r, int n);

/// Tensor rule at order n paired with a Richardson check at 2n.
/// Returns the 2n value; throws QuadratureNonConvergence when
/// |Q_n - Q_2n| > rtol |Q_2n| + atol.
double gauss_rect_checked(const std::function<double(double, double)>& f,
                          const Rect& r, int n, double rtol = 1e-9,
                          double atol = 1e-12);

/// Log-gamma by a Lanczos approximation, x > 0.
double lgamma_lanczos(double x);

/// Beta function B(x, y) = exp(lgamma x + lgamma y - lgamma(x+y)), x, y > 0.
double beta_fn(double x, double y);

/// Integral of h over [-Z, Z] by dyadic panels [0,1], [1,2], [2,4], ...
/// mirrored to the negative side, n Gauss points per panel.
double dyadic_line_integral(const std::function<double(double)>& h, double z_max,
                            int n = 32);

/// int_{-inf}^{inf} dz / (k^2 + z^2)^{2/3}, equal to k^{-1/3} B(1/2, 1/6).
/// Truncated at |z| = Z with the tail bound 6 Z^{-1/3} <= tol.
double tan_substitution_integral(double k, double tol = 1e-8);

/// Integral over the real line of a function decaying at least like
/// |h(z)| <= C |z|^{-4/3}; the truncation point is chosen so that the
/// analytic tail bound 6 C Z^{-1/3} falls below tol_rel times the
/// integral's magnitude. Deterministic for fixed inputs.
double real_line_integral(const std::function<double(double)>& h,
                          double tol_rel = 1e-9, int n = 32);

using State2 = std::array<double, 2>;

/// One classical fourth-order Runge-Kutta step.
State2 rk4_step(const std::function<State2(const State2&)>& field,
                const State2& state, double h);

} // namespace heis::num
