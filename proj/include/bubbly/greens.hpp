#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "bubbly/detail/math.hpp"
#include "bubbly/errors.hpp"

namespace bubbly {

// Outgoing Helmholtz kernel, G(r) = -e^{ikr} / (4 pi r). The leading minus
// sign is a convention; every downstream formula assumes it.
inline std::complex<double> greens_fn(double r, double k) {
    if (!(r > 0.0))
        throw singular_evaluation_error("Green's function evaluated at zero separation");
    return -std::polar(1.0, k * r) / (4.0 * std::numbers::pi * r);
}

inline std::complex<double> greens_fn(const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                                      double k) {
    return greens_fn((x - y).norm(), k);
}

// Im G(r) = -k sinc(kr) / (4 pi); finite at r = 0 with limit -k / (4 pi).
inline double im_greens_fn(double r, double k) {
    if (r < 0.0)
        throw invalid_input_error("separation must be nonnegative");
    return -k * detail::sinc(k * r) / (4.0 * std::numbers::pi);
}

}
