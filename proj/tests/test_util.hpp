#pragma once

#include <random>

#include "heis/core.hpp"
#include "heis/logchart.hpp"

namespace heis::test {

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random point of the ring S_{1,e} in log coordinates, away from the chart
/// edges so finite differences stay well-posed.
inline LogPoint random_ring_log(std::mt19937_64& rng, double psi_max = 1.45) {
    return LogPoint{uniform(rng, 0.0, 2.0), uniform(rng, -psi_max, psi_max),
                    uniform(rng, -2.0, 2.0)};
}

inline Point random_ring_point(std::mt19937_64& rng, double psi_max = 1.45) {
    return phi(random_ring_log(rng, psi_max));
}

inline Point random_point(std::mt19937_64& rng, double box = 2.0) {
    return Point{Complex(uniform(rng, -box, box), uniform(rng, -box, box)),
                 uniform(rng, -box, box)};
}

} // namespace heis::test
