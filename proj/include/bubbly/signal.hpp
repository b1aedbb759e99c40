#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "bubbly/errors.hpp"

namespace bubbly {

struct TimeSeries {
    std::vector<double> samples;
    double dt = 0.0;       // s
    double t_start = 0.0;  // s

    std::size_t size() const { return samples.size(); }
    double duration() const { return static_cast<double>(samples.size()) * dt; }
    double time_at(std::size_t i) const { return t_start + static_cast<double>(i) * dt; }
};

// Full-length DFT coefficients on the angular frequency grid m * domega,
// m = 0 .. n-1, with the upper half holding the negative frequencies
// (conjugate-symmetric for real signals).
struct Spectrum {
    std::vector<std::complex<double>> coefficients;
    double domega = 0.0;  // rad/s

    std::size_t size() const { return coefficients.size(); }
    double omega_at(std::size_t m) const { return static_cast<double>(m) * domega; }
    double omega_max() const { return static_cast<double>(size() / 2) * domega; }
};

// Carrier sin(omega_R t) under a single half-arch envelope
// sin(pi (t - t0)/window) supported on t0 < t < t0 + window. The default
// window of 0.2 ms makes the envelope sin(5000 pi (t - t0)).
inline TimeSeries synthesize_pulse(double omega_R, double t0, double T, double dt,
                                   double window = 2e-4) {
    if (!(dt > 0.0) || !(T > 0.0) || !(omega_R > 0.0) || !(window > 0.0))
        throw invalid_input_error("pulse parameters must be positive");
    if (!(t0 > 0.0) || !(t0 < T))
        throw invalid_input_error("pulse onset must lie inside (0, T)");
    if (t0 + window > T)
        throw invalid_window_error("pulse window extends past the signal duration");
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    if (n < 2 || std::abs(static_cast<double>(n) * dt - T) > dt)
        throw invalid_input_error("dt must divide the duration to within one sample");
    TimeSeries ts;
    ts.dt = dt;
    ts.samples.resize(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double u = t - t0;
        if (u > 0.0 && u < window)
            ts.samples[i] = std::sin(omega_R * t) * std::sin(std::numbers::pi * u / window);
    }
    return ts;
}

// DFT pair with the e^{-i omega t} synthesis kernel:
//   s_hat_m = (dt / 2 pi) sum_n s_n e^{+i omega_m t_n},
//   s_n    = domega sum_m s_hat_m e^{-i omega_m t_n}.
inline Spectrum to_spectrum(const TimeSeries& ts) {
    const std::size_t n = ts.size();
    if (n < 2 || !(ts.dt > 0.0))
        throw invalid_input_error("time series needs at least two samples and dt > 0");
    if (ts.t_start != 0.0)
        throw invalid_input_error("transforms assume the series starts at t = 0");
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> input(ts.samples.begin(), ts.samples.end());
    std::vector<std::complex<double>> out;
    fft.inv(out, input);
    Spectrum sp;
    sp.domega = 2.0 * std::numbers::pi / (static_cast<double>(n) * ts.dt);
    const double scale = static_cast<double>(n) * ts.dt / (2.0 * std::numbers::pi);
    sp.coefficients.resize(n);
    for (std::size_t m = 0; m < n; ++m)
        sp.coefficients[m] = out[m] * scale;
    return sp;
}

inline std::vector<std::complex<double>> to_time_complex(const Spectrum& sp) {
    const std::size_t n = sp.size();
    if (n < 2 || !(sp.domega > 0.0))
        throw invalid_input_error("spectrum needs at least two coefficients and domega > 0");
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out;
    fft.fwd(out, sp.coefficients);
    for (auto& v : out)
        v *= sp.domega;
    return out;
}

inline TimeSeries to_time(const Spectrum& sp) {
    const std::vector<std::complex<double>> full = to_time_complex(sp);
    TimeSeries ts;
    ts.dt = 2.0 * std::numbers::pi / (static_cast<double>(sp.size()) * sp.domega);
    ts.samples.resize(full.size());
    for (std::size_t i = 0; i < full.size(); ++i)
        ts.samples[i] = full[i].real();
    return ts;
}

// Indices m in the positive-frequency half with lo < omega_m <= hi.
inline std::vector<std::size_t> band_indices(const Spectrum& sp, double lo, double hi) {
    std::vector<std::size_t> idx;
    for (std::size_t m = 1; m <= sp.size() / 2; ++m) {
        const double omega = sp.omega_at(m);
        if (omega > lo && omega <= hi)
            idx.push_back(m);
    }
    return idx;
}

// r_sharp(t) = r(T - t) on the periodic sample grid.
inline TimeSeries time_reverse(const TimeSeries& ts, double T) {
    const std::size_t n = ts.size();
    if (n < 2)
        throw invalid_input_error("time series needs at least two samples");
    if (std::abs(static_cast<double>(n) * ts.dt - T) > 0.5 * ts.dt)
        throw invalid_input_error("reversal time must equal the series duration");
    TimeSeries out;
    out.dt = ts.dt;
    out.t_start = ts.t_start;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.samples[i] = ts.samples[(n - i) % n];
    return out;
}

// Real signal reconstructed from the selected positive-frequency bins and
// their conjugate mirrors; all other bins are zeroed.
inline TimeSeries band_limited_signal(const Spectrum& sp, const std::vector<std::size_t>& band) {
    const std::size_t n = sp.size();
    Spectrum restricted;
    restricted.domega = sp.domega;
    restricted.coefficients.assign(n, 0.0);
    for (std::size_t m : band) {
        if (m == 0 || m > n / 2)
            throw invalid_input_error("band index outside the positive-frequency half");
        const std::size_t mirror = (n - m) % n;
        if (mirror == m)
            restricted.coefficients[m] = sp.coefficients[m].real();
        else {
            restricted.coefficients[m] = sp.coefficients[m];
            restricted.coefficients[mirror] = std::conj(sp.coefficients[m]);
        }
    }
    return to_time(restricted);
}

}
