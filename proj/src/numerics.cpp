#include "heis/numerics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace heis::num {

namespace {

QuadratureRule build_gauss_legendre(int n) {
    if (n < 1) raise(ErrorCode::InvalidArgument, "quadrature order must be >= 1");
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double eps = 4.0 * std::numeric_limits<double>::epsilon();
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-node starting guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= eps * std::max(1.0, std::abs(x))) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

const QuadratureRule& gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

double gauss_interval(const std::function<double(double)>& f, double a, double b,
                      int n) {
    const QuadratureRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double gauss_rect(const std::function<double(double, double)>& f, const Rect& r,
                  int n) {
    const QuadratureRule& rule = gauss_legendre(n);
    const double um = 0.5 * (r.u0 + r.u1), uh = 0.5 * r.width();
    const double vm = 0.5 * (r.v0 + r.v1), vh = 0.5 * r.height();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = um + uh * rule.nodes[i];
        double row = 0.0;
        for (int j = 0; j < n; ++j)
            row += rule.weights[j] * f(u, vm + vh * rule.nodes[j]);
        sum += rule.weights[i] * row;
    }
    return uh * vh * sum;
}

double gauss_rect_checked(const std::function<double(double, double)>& f,
                          const Rect& r, int n, double rtol, double atol) {
    const double qn = gauss_rect(f, r, n);
    const double q2n = gauss_rect(f, r, 2 * n);
    if (std::abs(qn - q2n) > rtol * std::abs(q2n) + atol)
        raise(ErrorCode::QuadratureNonConvergence,
              "tensor quadrature failed the Richardson check");
    return q2n;
}

double lgamma_lanczos(double x) {
    if (!(x > 0.0)) raise(ErrorCode::InvalidArgument, "lgamma requires x > 0");
    // 14-term Lanczos data, g = 671/128; accurate to full double precision.
    static const double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,
        14.1360979747417471,     -0.491913816097620199,
        0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3,
        -0.210264441724104883e-3, 0.217439618115212643e-3,
        -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

double beta_fn(double x, double y) {
    return std::exp(lgamma_lanczos(x) + lgamma_lanczos(y) - lgamma_lanczos(x + y));
}

double dyadic_line_integral(const std::function<double(double)>& h, double z_max,
                            int n) {
    double total = 0.0;
    double lo = 0.0, hi = 1.0;
    while (lo < z_max) {
        if (hi > z_max) hi = z_max;
        total += gauss_interval([&](double z) { return h(z) + h(-z); }, lo, hi, n);
        lo = hi;
        hi *= 2.0;
    }
    return total;
}

double tan_substitution_integral(double k, double tol) {
    if (!(k > 0.0)) raise(ErrorCode::InvalidArgument, "k must be positive");
    if (!(tol > 0.0)) raise(ErrorCode::InvalidArgument, "tol must be positive");
    // (k^2 + z^2)^{2/3} >= z^{4/3}, so the two-sided tail beyond Z is at
    // most 2 int_Z^inf z^{-4/3} dz = 6 Z^{-1/3}.
    const double z_cut = std::pow(6.0 / tol, 3.0);
    return dyadic_line_integral(
        [k](double z) { return std::pow(k * k + z * z, -2.0 / 3.0); }, z_cut);
}

double real_line_integral(const std::function<double(double)>& h, double tol_rel,
                          int n) {
    // First pass to a moderate cut, then extend until the z^{-4/3} tail
    // bound drops below the relative target.
    const double probe = 1.0e3;
    double total = dyadic_line_integral(h, probe, n);
    double c_est = 0.0;
    for (double z : {1.0e3, 3.0e4, 1.0e6})
        c_est = std::max(c_est,
                         std::max(std::abs(h(z)), std::abs(h(-z))) *
                             std::pow(z, 4.0 / 3.0));
    const double scale = std::max(std::abs(total), 1e-300);
    double z_cut = std::pow(6.0 * std::max(c_est, 1e-300) / (tol_rel * scale), 3.0);
    z_cut = std::min(std::max(z_cut, probe), 1e28);
    double lo = probe, hi = 2.0 * probe;
    while (lo < z_cut) {
        if (hi > z_cut) hi = z_cut;
        total += gauss_interval([&](double z) { return h(z) + h(-z); }, lo, hi, n);
        lo = hi;
        hi *= 2.0;
    }
    return total;
}

State2 rk4_step(const std::function<State2(const State2&)>& field,
                const State2& s, double h) {
    auto add = [](const State2& a, const State2& b, double c) {
        return State2{a[0] + c * b[0], a[1] + c * b[1]};
    };
    const State2 k1 = field(s);
    const State2 k2 = field(add(s, k1, h / 2.0));
    const State2 k3 = field(add(s, k2, h / 2.0));
    const State2 k4 = field(add(s, k3, h));
    return State2{s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                  s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

} // namespace heis::num
