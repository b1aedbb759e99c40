#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bubbly/errors.hpp"

namespace bubbly {

struct BubbleCloud {
    std::vector<Eigen::Vector3d> centers;
    double radius = 0.0;       // common bubble radius R
    double half_length = 0.0;  // cube is [-half_length, half_length]^3
    std::uint64_t seed = 0;

    std::size_t size() const { return centers.size(); }
};

namespace detail {

// Uniform double in [0, 1) from the top 53 bits of the generator output.
// Avoids std::uniform_real_distribution, whose stream is not pinned by the
// standard, so placements are reproducible across toolchains.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}

// Rejection-sampled hard-sphere placement: centers i.i.d. uniform in the cube,
// accepted when at least 2R from every prior center and at least
// exclusion_radius from every exclusion point. max_attempts caps the total
// number of candidate draws.
inline BubbleCloud place_bubbles(std::uint64_t seed, std::size_t n, double L, double R,
                                 const std::vector<Eigen::Vector3d>& exclusion_points = {},
                                 double exclusion_radius = 0.0,
                                 std::uint64_t max_attempts = 1000000) {
    if (!(L > 0.0) || !(R > 0.0))
        throw invalid_input_error("box side and radius must be positive");
    if (exclusion_radius < 0.0)
        throw invalid_input_error("exclusion radius must be nonnegative");
    if (n > 0 && 8.0 * R * R * R * static_cast<double>(n) > L * L * L)
        throw invalid_input_error("requested count cannot pack into the box");

    BubbleCloud cloud;
    cloud.radius = R;
    cloud.half_length = L / 2.0;
    cloud.seed = seed;
    cloud.centers.reserve(n);

    std::mt19937_64 rng(seed);
    const double min_gap2 = 4.0 * R * R;
    const double excl2 = exclusion_radius * exclusion_radius;
    std::uint64_t attempts = 0;
    while (cloud.centers.size() < n) {
        if (attempts++ >= max_attempts)
            throw packing_failure_error("bubble placement exhausted its attempt budget of " +
                                        std::to_string(max_attempts) + " draws");
        Eigen::Vector3d c;
        for (int d = 0; d < 3; ++d)
            c[d] = (detail::uniform_unit(rng) - 0.5) * L;
        bool ok = true;
        for (const auto& p : exclusion_points) {
            if ((c - p).squaredNorm() < excl2) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;
        for (const auto& p : cloud.centers) {
            if ((c - p).squaredNorm() < min_gap2) {
                ok = false;
                break;
            }
        }
        if (ok)
            cloud.centers.push_back(c);
    }
    return cloud;
}

}
