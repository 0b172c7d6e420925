#pragma once

#include "heis/contact.hpp"
#include "heis/core.hpp"
#include "heis/logchart.hpp"

namespace heis {

/// Radial stretch in log coordinates: (xi, psi, eta) -> (k xi,
/// arctan(tan(psi)/k), eta). k = 1 gives the identity.
LogPoint stretch_log(double k, const LogPoint& q);

/// Cartesian form f_k(z,t) = (k^{1/2} z (conj(w)/(k|z|^2+it))^{1/2}
/// |w|^{(k-1)/2}, t |w|^k / |k|z|^2+it|) with w = |z|^2 - it; principal
/// branch. Agrees with the log form through the chart. Rejects the
/// vertical axis.
Point stretch_cart(double k, const Point& p);

/// Beltrami coefficient of the stretch,
///   mu(Phi(q)) = -e^{3i(psi-eta)} (k^2-1) / (k^2 + 1 + 2 tan^2 psi).
/// The denominator carries the factor 2: it is the unique form consistent
/// with the distortion (1+tan^2)/(k^2+tan^2) through K = (1+|mu|)/(1-|mu|)
/// and with the W-quotient of the log form.
Complex stretch_beltrami(double k, const LogPoint& q);

/// Distortion of the stretch, constant on cone leaves:
/// K(psi) = (1 + tan^2 psi) / (k^2 + tan^2 psi); sup at psi = 0 is k^{-2}.
double stretch_distortion(double k, double psi);

/// The stretch as a ContactMap with exact derivative oracles (cartesian via
/// the chart chain rule, logarithmic in closed form).
ContactMap stretch_map(double k);

} // namespace heis
