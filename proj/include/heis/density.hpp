#pragma once

#include <functional>
#include <optional>

#include "heis/core.hpp"

namespace heis {

/// Spherical ring S_{a,b} = { a^4 < |z|^4 + t^2 < b^4 }.
struct SphericalRing {
    double a = 1.0;
    double b = 2.0;

    /// ln(b/a).
    double log_ratio() const { return std::log(b / a); }
    bool contains(const Point& p) const {
        double g4 = std::norm(p.z) * std::norm(p.z) + p.t * p.t;
        double a2 = a * a, b2 = b * b;
        return g4 > a2 * a2 && g4 < b2 * b2;
    }
};

/// Nonnegative Borel weight on the group. The support descriptor keeps
/// indicator factors exact instead of thresholded.
class Density {
public:
    using Eval = std::function<double(const Point&)>;

    /// Density supported everywhere.
    explicit Density(Eval eval) : eval_(std::move(eval)) {}

    /// Density cut off outside a spherical ring.
    Density(Eval eval, const SphericalRing& support)
        : eval_(std::move(eval)), ring_(support) {}

    double operator()(const Point& p) const {
        if (ring_ && !ring_->contains(p)) return 0.0;
        return eval_(p);
    }

    const std::optional<SphericalRing>& support_ring() const { return ring_; }

private:
    Eval eval_;
    std::optional<SphericalRing> ring_;
};

} // namespace heis
