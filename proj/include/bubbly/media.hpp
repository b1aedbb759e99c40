#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "bubbly/errors.hpp"

namespace bubbly {

// Densities and bulk moduli of the host liquid (w) and the gas phase (b).
struct MediaParams {
    double rho_w = 0.0;    // kg/m^3
    double rho_b = 0.0;    // kg/m^3
    double kappa_w = 0.0;  // N/m^2
    double kappa_b = 0.0;  // N/m^2
};

inline void validate(const MediaParams& m) {
    if (!(m.rho_w > 0.0) || !(m.rho_b > 0.0) || !(m.kappa_w > 0.0) || !(m.kappa_b > 0.0))
        throw invalid_input_error("media parameters must be strictly positive");
}

// True in the intended regime (light, soft gas inside a dense, stiff liquid).
// Callers warn rather than fail when this does not hold.
inline bool water_air_regime(const MediaParams& m) {
    return m.rho_b < m.rho_w && m.kappa_b < m.kappa_w;
}

struct DerivedAcoustics {
    double c_w = 0.0;    // m/s
    double c_b = 0.0;    // m/s
    double delta = 0.0;  // rho_b / rho_w
    double omega = 0.0;  // rad/s
    double k_w = 0.0;    // 1/m
    double k_b = 0.0;    // 1/m
    double x_w = 0.0;    // k_w * R
    double x_b = 0.0;    // k_b * R
};

inline DerivedAcoustics derive_acoustics(const MediaParams& media, double omega, double R) {
    validate(media);
    if (!(omega >= 0.0))
        throw invalid_input_error("omega must be nonnegative");
    if (!(R > 0.0))
        throw invalid_input_error("radius must be positive");
    DerivedAcoustics d;
    d.c_w = std::sqrt(media.kappa_w / media.rho_w);
    d.c_b = std::sqrt(media.kappa_b / media.rho_b);
    d.delta = media.rho_b / media.rho_w;
    d.omega = omega;
    d.k_w = omega / d.c_w;
    d.k_b = omega / d.c_b;
    d.x_w = d.k_w * R;
    d.x_b = d.k_b * R;
    return d;
}

// Number of bubbles of radius R giving gas volume fraction phi in a cube of
// side L.
inline std::int64_t bubble_count_for_fraction(double phi, double L, double R) {
    if (!(phi > 0.0) || !(phi < 0.5))
        throw invalid_input_error("volume fraction must lie in (0, 0.5)");
    if (!(R > 0.0) || !(L > 2.0 * R))
        throw invalid_input_error("box side must exceed one bubble diameter");
    const double volume_ratio = phi * L * L * L / (4.0 / 3.0 * std::numbers::pi * R * R * R);
    const auto n = static_cast<std::int64_t>(std::floor(volume_ratio));
    if (n == 0)
        throw degenerate_configuration_error("volume fraction too small for a single bubble");
    return n;
}

}
