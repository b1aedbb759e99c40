#pragma once

#include <complex>

#include "bubbly/media.hpp"

namespace testutil {

inline bubbly::MediaParams water_air() {
    return {1e3, 1.2, 2.07e9, 1.27e5};
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    return std::abs(got - want) / std::abs(want);
}

}
