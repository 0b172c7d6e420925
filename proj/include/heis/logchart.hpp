#pragma once

#include <numbers>
#include <utility>

#include "heis/core.hpp"

namespace heis {

/// Logarithmic-chart coordinates. psi must lie strictly inside
/// (-pi/2, pi/2); eta lives on a circle of circumference 4 pi / 3 and is
/// stored in the principal band (-2 pi/3, 2 pi/3].
struct LogPoint {
    double xi = 0.0;
    double psi = 0.0;
    double eta = 0.0;
};

inline constexpr double kEtaPeriod = 4.0 * std::numbers::pi / 3.0;

/// Wrap eta into the principal band (-2 pi/3, 2 pi/3].
double wrap_eta(double eta);

/// Signed difference of two eta values, reduced modulo the period to the
/// representative closest to zero (in (-2 pi/3, 2 pi/3]).
double eta_diff(double eta1, double eta0);

/// The chart Phi(xi, psi, eta) = (i cos^{1/2}(psi) e^{(xi+i(psi-3 eta))/2},
/// -sin(psi) e^xi). gauge(Phi(q)) = e^{xi/2}.
Point phi(const LogPoint& q);

/// Inverse chart with the fixed branch eta in (-2 pi/3, 2 pi/3].
/// Rejects points on the vertical axis z = 0.
LogPoint phi_inv(const Point& p);

/// Jacobian determinant of Phi: -(3/4) e^{2 xi}.
double jacobian_phi(const LogPoint& q);

/// |J_Phi|, the Lebesgue weight (3/4) e^{2 xi} in log coordinates.
double lebesgue_weight(const LogPoint& q);

/// Cartesian columns of the differential of Phi at q, i.e. the pushforwards
/// of d/dxi, d/dpsi, d/deta as (x, y, t) component triples.
struct PhiJacobian {
    Vec3 d_xi;
    Vec3 d_psi;
    Vec3 d_eta;
};
PhiJacobian phi_jacobian(const LogPoint& q);

/// Pushforwards of W_{xi,eta} = d_xi - (tan(psi)/3) d_eta and of d_psi
/// under Phi. Both are horizontal at phi(q); the second is J of the first.
struct WFields {
    HVec w_xi_eta;
    HVec d_psi;
};
WFields w_fields(const LogPoint& q);

} // namespace heis
