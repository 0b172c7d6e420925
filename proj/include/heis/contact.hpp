#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "heis/core.hpp"
#include "heis/logchart.hpp"
#include "heis/surface.hpp"

namespace heis {

/// Horizontal and vertical derivatives of a map f = (f_I, f_3) at a point.
/// Conjugate-component derivatives follow from these: Z conj(f_I) =
/// conj(Zbar f_I), Zbar f_3 = conj(Z f_3), and T f_3 is real.
struct HorizDerivs {
    Complex ZfI{0.0, 0.0};  // Z f_I
    Complex ZbfI{0.0, 0.0}; // Zbar f_I
    Complex TfI{0.0, 0.0};  // T f_I
    Complex Zf3{0.0, 0.0};  // Z f_3
    double Tf3 = 0.0;       // T f_3
};

/// Partials of the log-coordinate components (Xi, Psi, H) with respect to
/// (xi, psi, eta); row i holds the gradient of component i.
struct LogDerivs {
    Vec3 dXi{};
    Vec3 dPsi{};
    Vec3 dH{};
};

/// A C^2 map of the group with a horizontal-derivative oracle (analytic or
/// finite differences along group flows) and an optional logarithmic form.
/// Bijectivity on the stated domain is a documented contract, not checked.
class ContactMap {
public:
    using Fwd = std::function<Point(const Point&)>;
    using Oracle = std::function<HorizDerivs(const Point&)>;
    using LogFwd = std::function<LogPoint(const LogPoint&)>;
    using LogOracle = std::function<LogDerivs(const LogPoint&)>;

    explicit ContactMap(Fwd fwd) : fwd_(std::move(fwd)) {}

    ContactMap& with_oracle(Oracle oracle) {
        oracle_ = std::move(oracle);
        return *this;
    }
    ContactMap& with_log_form(LogFwd log_fwd, LogOracle log_oracle = nullptr) {
        log_fwd_ = std::move(log_fwd);
        log_oracle_ = std::move(log_oracle);
        return *this;
    }

    Point operator()(const Point& p) const { return fwd_(p); }

    bool has_analytic_oracle() const { return static_cast<bool>(oracle_); }
    bool has_log_form() const { return static_cast<bool>(log_fwd_); }
    bool has_log_oracle() const { return static_cast<bool>(log_oracle_); }

    LogPoint log_apply(const LogPoint& q) const;

    /// Analytic oracle when present, else finite differences with the
    /// default step 1e-5 (1 + gauge(p)).
    HorizDerivs derivs(const Point& p) const;

    /// Finite differences along the group flows p * (±h, 0), p * (±ih, 0),
    /// p * (0, ±h), regardless of any analytic oracle.
    HorizDerivs derivs_fd(const Point& p, double h) const;
    double default_fd_step(const Point& p) const;

    /// Analytic log oracle when present, else central differences on the
    /// log form (eta differences reduced modulo the period).
    LogDerivs log_derivs(const LogPoint& q) const;
    LogDerivs log_derivs_fd(const LogPoint& q, double h) const;

private:
    Fwd fwd_;
    Oracle oracle_;
    LogFwd log_fwd_;
    LogOracle log_oracle_;
};

struct BeltramiData {
    Complex mu{0.0, 0.0};
    double K = 1.0;      // (1 + |mu|) / (1 - |mu|)
    double lambda = 1.0; // |Z f_I|^2 - |Zbar f_I|^2
    double jac = 1.0;    // lambda^2
};

/// (Z f_I, Zbar f_I) at p.
std::pair<Complex, Complex> horiz_derivatives(const ContactMap& f, const Point& p);

/// Beltrami coefficient mu = Zbar f_I / Z f_I with distortion and Jacobian.
/// Throws DegenerateDerivative when |Z f_I| is below threshold.
BeltramiData beltrami(const ContactMap& f, const Point& p);

struct ContactResiduals {
    Complex r1{0.0, 0.0}; // conj(f_I) Z f_I - f_I Z conj(f_I) + i Z f_3
    Complex r2{0.0, 0.0}; // f_I Zbar conj(f_I) - conj(f_I) Zbar f_I - i Zbar f_3
    double lambda = 0.0;  // -i (conj(f_I) T f_I - f_I T conj(f_I) + i T f_3)
};

/// Residuals of the contact conditions; contactness means r1, r2 vanish and
/// lambda does not.
ContactResiduals contact_residuals(const ContactMap& f, const Point& p);
ContactResiduals contact_residuals_fd(const ContactMap& f, const Point& p, double h);

/// Jacobian determinant of f by plain coordinate central differences;
/// independent route for the det J_f = lambda^2 check.
double jacobian_det_fd(const ContactMap& f, const Point& p, double h);

/// Horizontal normal of the image patch f(sigma) by the closed formula
/// N^h_{f.sigma} = lambda((n1 Yf2 - n2 Xf2) X + (n2 Xf1 - n1 Yf1) Y).
NormalData pushforward_normal(const ContactMap& f, const SurfacePatch& s,
                              double u, double v);

struct Sandwich {
    double lower = 0.0; // lambda (|Z f_I| - |Zbar f_I|) ||N^h_sigma||
    double value = 0.0; // ||N^h_{f.sigma}||
    double upper = 0.0; // lambda (|Z f_I| + |Zbar f_I|) ||N^h_sigma||
};

/// The two-sided normal-stretching bound at a non-characteristic point.
Sandwich normal_sandwich(const ContactMap& f, const SurfacePatch& s, double u,
                         double v);

enum class MspClass { Minimal, Maximal, Interior, Conformal };

/// Re(mu e^{-2i arg m}) with m the complex alias of N^h_sigma; positive
/// means minimal stretching on this surface.
double msp_value(const ContactMap& f, const SurfacePatch& s, double u, double v);

/// Classifies Re(mu e^{-2i arg m}) against ±|mu| within tol.
MspClass msp_check(const ContactMap& f, const SurfacePatch& s, double u,
                   double v, double tol = 1e-9);

struct LogResiduals {
    double r1 = 0.0;     // H_psi + (1/3) Psi Xi_psi, as printed
    double r1_alt = 0.0; // H_psi + (1/3) tan(Psi) Xi_psi, suspected intent
    double r2 = 0.0;     // W_{xi,eta} H + (1/3) tan(Psi) W_{xi,eta} Xi
};

/// Contact-condition residuals in logarithmic coordinates. Both variants of
/// the first condition are reported; they coincide whenever Xi_psi = 0.
LogResiduals log_contact_residuals(const ContactMap& f, const LogPoint& q);

/// mu(Phi(q)) = -e^{3i(psi-eta)} Wbar(Xi + i Psi) / W(Xi + i Psi) with
/// W = W_{xi,eta} - i d_psi.
Complex log_beltrami(const ContactMap& f, const LogPoint& q);

/// |mu| at a log point from the same quotient; stable for tail evaluation.
double log_beltrami_abs(const LogDerivs& d, double tan_psi);

/// The image patch f(sigma) over the same domain, finite-difference oracle;
/// the direct evaluation route used to cross-check pushforward_normal.
SurfacePatch composed_patch(const ContactMap& f, const SurfacePatch& s);

struct SurfaceContactoReport {
    double max_defect = 0.0;
    double min_lambda = 0.0;
    double max_lambda = 0.0;
    int points_used = 0;
};

/// Max over a grid of the defect |omega_{f.sigma} - lambda_hat omega_sigma|
/// after a least-squares fit of lambda_hat at each non-characteristic point.
SurfaceContactoReport surface_contacto_residual(const ContactMap& f,
                                                const SurfacePatch& s,
                                                int grid_n = 21);

// Built-in maps.
ContactMap identity_map();
ContactMap rotation_map(double theta);
ContactMap dilation_map(double delta);
ContactMap translation_map(const Point& g);
ContactMap inversion_map();
/// a after b. Derivative oracles are chained through the frame matrices,
/// which presumes both factors are contact.
ContactMap compose(const ContactMap& a, const ContactMap& b);

} // namespace heis
