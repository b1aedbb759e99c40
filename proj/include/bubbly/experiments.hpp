#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bubbly/cloud.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/foldy_lax.hpp"
#include "bubbly/greens.hpp"
#include "bubbly/hash.hpp"
#include "bubbly/media.hpp"
#include "bubbly/parallel.hpp"
#include "bubbly/scattering.hpp"
#include "bubbly/signal.hpp"

namespace bubbly {

struct ExperimentConfig {
    MediaParams media{1e3, 1.2, 2.07e9, 1.27e5};
    double radius = 5e-5;      // bubble radius R, m
    double box_length = 0.01;  // cube side L, m
    double phi = 2e-4;         // gas volume fraction
    std::int64_t count = 0;    // explicit bubble count; 0 derives it from phi
    std::uint64_t seed = 0;
    unsigned threads = 0;           // worker count; 0 uses hardware concurrency
    double exclusion_radius = 0.0;  // keep-out around source/receivers/line; 0 means 2R
    std::uint64_t max_place_attempts = 1000000;

    Eigen::Vector3d source{0.0, 0.0, 0.0};
    std::vector<Eigen::Vector3d> receivers{{0.02, 0.0, 0.0},
                                           {-0.02, 0.0, 0.0},
                                           {0.0, 0.02, 0.0},
                                           {0.0, -0.02, 0.0}};

    double omega_R = 2.0 * std::numbers::pi * 57.5e3;  // rad/s
    double t0 = 2e-3;                                  // pulse onset, s
    double pulse_window = 2e-4;                        // envelope support, s
    double duration = 5e-2;                            // recording length T, s
    double dt = 1e-6;                                  // sample step, s

    double band_lo = 0.0;  // processed band; lo = hi = 0 selects (0, 2 omega_R]
    double band_hi = 0.0;

    int line_samples = 201;     // evaluation line x = (x1, 0, 0)
    double line_extent = 0.0;   // x1 in [-extent, extent]; 0 means extent = L

    double map_omega_lo = 2.0 * std::numbers::pi * 15e3;   // greenmap sweep bounds, rad/s
    double map_omega_hi = 2.0 * std::numbers::pi * 155e3;
    int map_omega_samples = 281;

    double avg_lo = 0.8;   // averaging band in multiples of omega_M
    double avg_hi = 0.99;
    int avg_omega_samples = 401;

    int map_time_stride = 50;  // time decimation when writing the refocus map

    ScatteringVariant variant = ScatteringVariant::simplified;

    double band_lo_effective() const { return band_lo; }
    double band_hi_effective() const { return band_hi > 0.0 ? band_hi : 2.0 * omega_R; }
    double line_extent_effective() const { return line_extent > 0.0 ? line_extent : box_length; }
    double exclusion_radius_effective() const {
        return exclusion_radius > 0.0 ? exclusion_radius : 2.0 * radius;
    }

    void validate() const {
        auto fail = [](const std::string& msg, const std::string& field) {
            throw validation_error(msg, field);
        };
        if (!(media.rho_w > 0.0)) fail("density must be positive", "media.rho_w");
        if (!(media.rho_b > 0.0)) fail("density must be positive", "media.rho_b");
        if (!(media.kappa_w > 0.0)) fail("bulk modulus must be positive", "media.kappa_w");
        if (!(media.kappa_b > 0.0)) fail("bulk modulus must be positive", "media.kappa_b");
        if (!(radius > 0.0)) fail("bubble radius must be positive", "cloud.radius");
        if (!(box_length > 2.0 * radius)) fail("box side must exceed one diameter", "cloud.box_length");
        if (!(phi >= 0.0) || phi >= 0.5) fail("volume fraction must lie in [0, 0.5)", "cloud.phi");
        if (count < 0) fail("bubble count must be nonnegative", "cloud.count");
        if (!(max_place_attempts > 0)) fail("placement budget must be positive", "cloud.max_attempts");
        if (!(dt > 0.0)) fail("time step must be positive", "signal.dt");
        if (!(duration > 0.0)) fail("duration must be positive", "signal.duration");
        if (!(omega_R > 0.0)) fail("carrier frequency must be positive", "pulse.omega_r");
        if (!(t0 > 0.0) || !(t0 < duration)) fail("pulse onset must lie in (0, T)", "pulse.t0");
        if (!(pulse_window > 0.0)) fail("pulse window must be positive", "pulse.window");
        if (t0 + pulse_window > duration) fail("pulse extends past the duration", "pulse.window");
        if (band_lo < 0.0) fail("band start must be nonnegative", "band.lo");
        if (!(band_hi_effective() > band_lo_effective())) fail("band must be nonempty", "band.hi");
        const double nyquist = std::numbers::pi / dt;
        if (band_hi_effective() > nyquist * (1.0 + 1e-9))
            fail("band exceeds the representable frequency range", "band.hi");
        if (line_samples < 2) fail("need at least two line samples", "line.samples");
        if (line_extent < 0.0) fail("line extent must be nonnegative", "line.extent");
        if (!(map_omega_lo > 0.0) || !(map_omega_hi > map_omega_lo))
            fail("map frequency bounds must be ordered and positive", "map.omega_hi");
        if (map_omega_samples < 2) fail("need at least two map samples", "map.omega_samples");
        if (!(avg_lo > 0.0) || !(avg_hi > avg_lo))
            fail("averaging band must be ordered and positive", "avg.hi");
        if (avg_omega_samples < 2) fail("need at least two averaging samples", "avg.omega_samples");
        if (map_time_stride < 1) fail("time stride must be at least one", "timereverse.map_time_stride");
        if (receivers.empty()) fail("at least one receiver is required", "receivers");
        const double half = box_length / 2.0;
        for (const auto& r : receivers)
            if (r.cwiseAbs().maxCoeff() <= half)
                fail("receivers must lie outside the bubble cube", "receivers");
        if (source.cwiseAbs().maxCoeff() >= half)
            fail("source must lie inside the bubble cube", "source");
    }
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

}

inline std::vector<double> line_coordinates(const ExperimentConfig& cfg) {
    const double a = cfg.line_extent_effective();
    return detail::linspace(-a, a, cfg.line_samples);
}

inline std::vector<Eigen::Vector3d> line_points(const ExperimentConfig& cfg) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(static_cast<std::size_t>(cfg.line_samples));
    for (double x : line_coordinates(cfg))
        pts.emplace_back(x, 0.0, 0.0);
    return pts;
}

// Places the configured cloud, keeping bubbles away from the source, the
// receivers and the evaluation line.
inline BubbleCloud make_cloud(const ExperimentConfig& cfg) {
    std::int64_t n = cfg.count;
    if (n == 0 && cfg.phi > 0.0)
        n = bubble_count_for_fraction(cfg.phi, cfg.box_length, cfg.radius);
    BubbleCloud cloud;
    cloud.radius = cfg.radius;
    cloud.half_length = cfg.box_length / 2.0;
    cloud.seed = cfg.seed;
    if (n == 0)
        return cloud;
    std::vector<Eigen::Vector3d> exclusions = line_points(cfg);
    exclusions.push_back(cfg.source);
    exclusions.insert(exclusions.end(), cfg.receivers.begin(), cfg.receivers.end());
    return place_bubbles(cfg.seed, static_cast<std::size_t>(n), cfg.box_length, cfg.radius,
                         exclusions, cfg.exclusion_radius_effective(), cfg.max_place_attempts);
}

// Hash of everything the recorded traces depend on; used to reject replaying
// recordings against a different configuration.
inline std::uint64_t experiment_fingerprint(const ExperimentConfig& cfg,
                                            const BubbleCloud& cloud) {
    std::uint64_t h = fnv1a64_offset;
    auto mix = [&h](double v) { h = fnv1a64_value(v, h); };
    mix(static_cast<double>(cloud.seed));
    mix(static_cast<double>(cloud.size()));
    mix(cloud.radius);
    mix(cloud.half_length);
    for (const auto& c : cloud.centers)
        for (int d = 0; d < 3; ++d)
            mix(c[d]);
    mix(static_cast<double>(static_cast<int>(cfg.variant)));
    mix(cfg.media.rho_w);
    mix(cfg.media.rho_b);
    mix(cfg.media.kappa_w);
    mix(cfg.media.kappa_b);
    mix(cfg.omega_R);
    mix(cfg.t0);
    mix(cfg.pulse_window);
    mix(cfg.duration);
    mix(cfg.dt);
    mix(cfg.band_lo_effective());
    mix(cfg.band_hi_effective());
    for (int d = 0; d < 3; ++d)
        mix(cfg.source[d]);
    mix(static_cast<double>(cfg.receivers.size()));
    for (const auto& r : cfg.receivers)
        for (int d = 0; d < 3; ++d)
            mix(r[d]);
    return h;
}

struct Recordings {
    std::vector<TimeSeries> traces;  // one per receiver
    std::uint64_t fingerprint = 0;
};

struct ForwardResult {
    TimeSeries pulse;
    Spectrum pulse_spectrum;
    std::vector<std::size_t> band;
    Recordings recordings;
    BubbleCloud cloud;
    std::map<std::string, double> timings_s;
    std::vector<std::string> warnings;
};

struct FieldMap {
    std::vector<double> axis1;  // space samples, m
    std::vector<double> axis2;  // omega (rad/s) or t (s)
    Eigen::MatrixXd values;     // axis1 rows by axis2 columns
    std::string axis1_label;
    std::string axis2_label;
    std::string normalization;
};

namespace detail {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Complex kernel values over a matrix of pairwise distances.
inline Eigen::MatrixXcd greens_matrix(const Eigen::MatrixXd& dist, double k) {
    using namespace std::complex_literals;
    return (((1i * k) * dist.cast<std::complex<double>>().array()).exp() /
            (-4.0 * std::numbers::pi * dist.cast<std::complex<double>>().array()))
        .matrix();
}

inline Eigen::MatrixXd distance_matrix(const std::vector<Eigen::Vector3d>& rows,
                                       const std::vector<Eigen::Vector3d>& cols) {
    Eigen::MatrixXd d(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (rows[i] - cols[j]).norm();
    return d;
}

inline std::string condition_warning(std::size_t flagged, std::size_t total) {
    return "interaction matrix condition estimate exceeded 1e12 at " + std::to_string(flagged) +
           " of " + std::to_string(total) + " frequencies";
}

}

// Point-source emission of the pulse, one Helmholtz solve per banded
// frequency, recordings synthesized at each receiver.
inline ForwardResult run_forward(const ExperimentConfig& cfg) {
    cfg.validate();
    ForwardResult out;
    detail::Timer total;

    const ScatteringModel model = make_scattering_model(cfg.variant, cfg.media, cfg.radius);
    const double c_w = model.c_w;

    out.pulse = synthesize_pulse(cfg.omega_R, cfg.t0, cfg.duration, cfg.dt, cfg.pulse_window);
    out.pulse_spectrum = to_spectrum(out.pulse);
    out.band = band_indices(out.pulse_spectrum, cfg.band_lo_effective(), cfg.band_hi_effective());
    if (out.band.empty())
        throw invalid_input_error("selected band contains no frequencies");

    detail::Timer place;
    out.cloud = make_cloud(cfg);
    out.timings_s["place"] = place.seconds();

    const std::size_t nb = out.band.size();
    const std::size_t nr = cfg.receivers.size();
    const std::size_t n = out.cloud.size();

    Eigen::MatrixXcd gm(nb, nr);  // effective Green's function, receiver vs source
    const Eigen::MatrixXd d_recv_src =
        detail::distance_matrix(cfg.receivers, {cfg.source});
    Eigen::MatrixXd d_bub_src;
    Eigen::MatrixXd d_bub_recv;
    if (n > 0) {
        d_bub_src = detail::distance_matrix(out.cloud.centers, {cfg.source});
        d_bub_recv = detail::distance_matrix(out.cloud.centers, cfg.receivers);
    }
    std::vector<char> flagged(nb, 0);

    detail::Timer sweep;
    parallel_for(nb, cfg.threads, [&](std::size_t b) {
        const double omega = out.pulse_spectrum.omega_at(out.band[b]);
        const double k = omega / c_w;
        for (std::size_t j = 0; j < nr; ++j)
            gm(b, j) = greens_fn(d_recv_src(static_cast<Eigen::Index>(j), 0), k);
        if (n == 0)
            return;
        const std::complex<double> f = monopole_amplitude(model, omega);
        const InteractionMatrix m = assemble(out.cloud, f, k);
        const FoldySolver solver(m);
        const Eigen::VectorXcd w = solver.solve(detail::greens_matrix(d_bub_src, k));
        const Eigen::MatrixXcd g_recv = detail::greens_matrix(d_bub_recv, k);
        const Eigen::RowVectorXcd scattered = w.transpose() * g_recv;
        const std::complex<double> coupling = 4.0 * std::numbers::pi * f;
        for (std::size_t j = 0; j < nr; ++j)
            gm(b, j) -= coupling * scattered(static_cast<Eigen::Index>(j));
        if (solver.ill_conditioned())
            flagged[b] = 1;
    });
    out.timings_s["sweep"] = sweep.seconds();

    detail::Timer synth;
    out.recordings.traces.resize(nr);
    const std::size_t nt = out.pulse.size();
    for (std::size_t j = 0; j < nr; ++j) {
        Spectrum rec;
        rec.domega = out.pulse_spectrum.domega;
        rec.coefficients.assign(nt, 0.0);
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t m = out.band[b];
            rec.coefficients[m] = out.pulse_spectrum.coefficients[m] * gm(b, j);
        }
        out.recordings.traces[j] = band_limited_signal(rec, out.band);
    }
    out.timings_s["synthesis"] = synth.seconds();

    const auto bad = static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), 1));
    if (bad > 0)
        out.warnings.push_back(detail::condition_warning(bad, nb));

    out.recordings.fingerprint = experiment_fingerprint(cfg, out.cloud);
    out.timings_s["total"] = total.seconds();
    return out;
}

struct TimeReversalResult {
    TimeSeries s_sharp;                  // refocused signal at the source
    FieldMap map;                        // line coordinate by time
    std::size_t peak_index = 0;
    double peak_time = 0.0;
    std::vector<double> profile_at_peak; // |field| along the line at the peak time
    BubbleCloud cloud;
    std::map<std::string, double> timings_s;
    std::vector<std::string> warnings;
};

// Each receiver re-emits its recording reversed in time; the superposed field
// is evaluated along the line and at the source.
inline TimeReversalResult run_time_reversal(const ExperimentConfig& cfg,
                                            const Recordings& recordings) {
    cfg.validate();
    TimeReversalResult out;
    detail::Timer total;

    detail::Timer place;
    out.cloud = make_cloud(cfg);
    out.timings_s["place"] = place.seconds();
    if (recordings.fingerprint != experiment_fingerprint(cfg, out.cloud))
        throw config_mismatch_error(
            "recordings were produced by a different configuration or cloud");
    if (recordings.traces.size() != cfg.receivers.size())
        throw config_mismatch_error("recording count does not match receiver count");

    const ScatteringModel model = make_scattering_model(cfg.variant, cfg.media, cfg.radius);
    const double c_w = model.c_w;
    const std::size_t nr = cfg.receivers.size();
    const std::size_t nt = recordings.traces[0].size();

    std::vector<Spectrum> r_hat(nr);
    for (std::size_t j = 0; j < nr; ++j) {
        if (recordings.traces[j].size() != nt ||
            std::abs(recordings.traces[j].dt - cfg.dt) > 1e-15)
            throw config_mismatch_error("recordings disagree on the sample grid");
        r_hat[j] = to_spectrum(recordings.traces[j]);
    }
    const std::vector<std::size_t> band =
        band_indices(r_hat[0], cfg.band_lo_effective(), cfg.band_hi_effective());
    if (band.empty())
        throw invalid_input_error("selected band contains no frequencies");

    // Evaluation points: the line, plus the source position as a final extra.
    std::vector<Eigen::Vector3d> points = line_points(cfg);
    const std::size_t np = points.size() + 1;
    points.push_back(cfg.source);

    const std::size_t nb = band.size();
    const std::size_t n = out.cloud.size();
    Eigen::MatrixXcd u_hat(nb, np);
    const Eigen::MatrixXd d_pts_recv = detail::distance_matrix(points, cfg.receivers);
    Eigen::MatrixXd d_bub_recv;
    Eigen::MatrixXd d_bub_pts;
    if (n > 0) {
        d_bub_recv = detail::distance_matrix(out.cloud.centers, cfg.receivers);
        d_bub_pts = detail::distance_matrix(out.cloud.centers, points);
    }
    std::vector<char> flagged(nb, 0);

    detail::Timer sweep;
    parallel_for(nb, cfg.threads, [&](std::size_t b) {
        const std::size_t m = band[b];
        const double omega = r_hat[0].omega_at(m);
        const double k = omega / c_w;
        Eigen::VectorXcd emitted(nr);
        for (std::size_t j = 0; j < nr; ++j)
            emitted(static_cast<Eigen::Index>(j)) = std::conj(r_hat[j].coefficients[m]);
        Eigen::MatrixXcd gm_pts_recv = detail::greens_matrix(d_pts_recv, k);
        if (n > 0) {
            const std::complex<double> f = monopole_amplitude(model, omega);
            const InteractionMatrix mat = assemble(out.cloud, f, k);
            const FoldySolver solver(mat);
            const Eigen::MatrixXcd w = solver.solve(detail::greens_matrix(d_bub_recv, k));
            const Eigen::MatrixXcd g_pts = detail::greens_matrix(d_bub_pts, k);
            gm_pts_recv -= (4.0 * std::numbers::pi * f) * (g_pts.transpose() * w);
            if (solver.ill_conditioned())
                flagged[b] = 1;
        }
        u_hat.row(b) = (gm_pts_recv * emitted).transpose();
    });
    out.timings_s["sweep"] = sweep.seconds();

    detail::Timer synth;
    const double domega = r_hat[0].domega;
    auto synthesize_point = [&](std::size_t p) {
        Spectrum sp;
        sp.domega = domega;
        sp.coefficients.assign(nt, 0.0);
        for (std::size_t b = 0; b < nb; ++b)
            sp.coefficients[band[b]] = u_hat(b, p);
        return band_limited_signal(sp, band);
    };
    out.s_sharp = synthesize_point(np - 1);

    out.map.axis1 = line_coordinates(cfg);
    out.map.axis2.resize(nt);
    for (std::size_t i = 0; i < nt; ++i)
        out.map.axis2[i] = static_cast<double>(i) * cfg.dt;
    out.map.axis1_label = "x1 [m]";
    out.map.axis2_label = "t [s]";
    out.map.normalization = "none";
    out.map.values.resize(static_cast<Eigen::Index>(out.map.axis1.size()),
                          static_cast<Eigen::Index>(nt));
    parallel_for(out.map.axis1.size(), cfg.threads, [&](std::size_t p) {
        const TimeSeries row = synthesize_point(p);
        for (std::size_t i = 0; i < nt; ++i)
            out.map.values(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i)) =
                row.samples[i];
    });
    out.timings_s["synthesis"] = synth.seconds();

    std::size_t peak = 0;
    for (std::size_t i = 1; i < nt; ++i)
        if (std::abs(out.s_sharp.samples[i]) > std::abs(out.s_sharp.samples[peak]))
            peak = i;
    out.peak_index = peak;
    out.peak_time = static_cast<double>(peak) * cfg.dt;
    out.profile_at_peak.resize(out.map.axis1.size());
    for (std::size_t p = 0; p < out.map.axis1.size(); ++p)
        out.profile_at_peak[p] =
            std::abs(out.map.values(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(peak)));

    const auto bad = static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), 1));
    if (bad > 0)
        out.warnings.push_back(detail::condition_warning(bad, nb));
    out.timings_s["total"] = total.seconds();
    return out;
}

struct GreenMaps {
    FieldMap bubbly;
    FieldMap free_space;
    BubbleCloud cloud;
    std::vector<std::string> warnings;
};

// Im G_m over (x, omega) for a point source at cfg.source, with the
// free-space companion map.
inline GreenMaps green_map(const ExperimentConfig& cfg, const std::vector<double>& omega_grid,
                           const std::vector<double>& x_line) {
    cfg.validate();
    if (omega_grid.size() < 2 || x_line.size() < 2)
        throw invalid_input_error("need at least two frequencies and two line points");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (!(omega_grid[i] > 0.0))
            throw invalid_input_error("map frequencies must be positive");
        if (omega_grid[i] < cfg.map_omega_lo * (1.0 - 1e-12) ||
            omega_grid[i] > cfg.map_omega_hi * (1.0 + 1e-12))
            throw invalid_input_error("omega grid extends outside the configured map bounds");
        if (i > 0 && !(omega_grid[i] > omega_grid[i - 1]))
            throw invalid_input_error("omega grid must be strictly increasing");
    }

    GreenMaps out;
    out.cloud = make_cloud(cfg);
    const ScatteringModel model = make_scattering_model(cfg.variant, cfg.media, cfg.radius);
    const double c_w = model.c_w;

    std::vector<Eigen::Vector3d> points;
    points.reserve(x_line.size());
    for (double x : x_line)
        points.emplace_back(x, 0.0, 0.0);

    const std::size_t np = points.size();
    const std::size_t nw = omega_grid.size();
    const std::size_t n = out.cloud.size();

    auto init_map = [&](FieldMap& m) {
        m.axis1 = x_line;
        m.axis2 = omega_grid;
        m.axis1_label = "x1 [m]";
        m.axis2_label = "omega [rad/s]";
        m.normalization = "none";
        m.values.resize(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(nw));
    };
    init_map(out.bubbly);
    init_map(out.free_space);

    std::vector<double> d_pts_src(np);
    for (std::size_t p = 0; p < np; ++p)
        d_pts_src[p] = (points[p] - cfg.source).norm();
    Eigen::MatrixXd d_bub_src;
    Eigen::MatrixXd d_bub_pts;
    if (n > 0) {
        d_bub_src = detail::distance_matrix(out.cloud.centers, {cfg.source});
        d_bub_pts = detail::distance_matrix(out.cloud.centers, points);
    }
    std::vector<char> flagged(nw, 0);

    parallel_for(nw, cfg.threads, [&](std::size_t iw) {
        const double omega = omega_grid[iw];
        const double k = omega / c_w;
        for (std::size_t p = 0; p < np; ++p) {
            const double im_free = im_greens_fn(d_pts_src[p], k);
            out.free_space.values(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(iw)) =
                im_free;
            out.bubbly.values(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(iw)) =
                im_free;
        }
        if (n == 0)
            return;
        const std::complex<double> f = monopole_amplitude(model, omega);
        const InteractionMatrix mat = assemble(out.cloud, f, k);
        const FoldySolver solver(mat);
        const Eigen::VectorXcd w = solver.solve(detail::greens_matrix(d_bub_src, k));
        const Eigen::VectorXcd scattered =
            detail::greens_matrix(d_bub_pts, k).transpose() * w;
        const std::complex<double> coupling = 4.0 * std::numbers::pi * f;
        for (std::size_t p = 0; p < np; ++p)
            out.bubbly.values(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(iw)) -=
                (coupling * scattered(static_cast<Eigen::Index>(p))).imag();
        if (solver.ill_conditioned())
            flagged[iw] = 1;
    });
    const auto bad = static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), 1));
    if (bad > 0)
        out.warnings.push_back(detail::condition_warning(bad, nw));
    return out;
}

// Trapezoid average of the map over omega in [lo, hi], per line sample.
inline std::vector<double> frequency_average(const FieldMap& map, double lo, double hi) {
    const auto& w = map.axis2;
    if (w.size() < 2)
        throw invalid_input_error("map has no frequency axis to average over");
    if (!(hi > lo))
        throw invalid_input_error("averaging band must be nonempty");
    const double tol = 1e-9 * (std::abs(lo) + std::abs(hi));
    if (lo < w.front() - tol || hi > w.back() + tol)
        throw invalid_input_error("averaging band extends outside the map frequency axis");
    std::size_t first = 0;
    while (first < w.size() && w[first] < lo - tol)
        ++first;
    std::size_t last = w.size() - 1;
    while (last > 0 && w[last] > hi + tol)
        --last;
    if (last <= first)
        throw invalid_input_error("averaging band contains fewer than two samples");

    std::vector<double> profile(map.axis1.size(), 0.0);
    const double span = w[last] - w[first];
    for (std::size_t p = 0; p < profile.size(); ++p) {
        double acc = 0.0;
        for (std::size_t i = first; i < last; ++i) {
            const double fa = map.values(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i));
            const double fb =
                map.values(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i + 1));
            acc += 0.5 * (fa + fb) * (w[i + 1] - w[i]);
        }
        profile[p] = acc / span;
    }
    return profile;
}

// Width between the two half-maximum crossings nearest the global magnitude
// peak, linearly interpolated between samples.
inline double fwhm(const std::vector<double>& xs, const std::vector<double>& profile,
                   bool normalize = true) {
    if (xs.size() != profile.size() || xs.size() < 3)
        throw invalid_input_error("profile and coordinates must match, with at least 3 samples");
    std::vector<double> m(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i)
        m[i] = std::abs(profile[i]);
    const std::size_t peak = static_cast<std::size_t>(
        std::max_element(m.begin(), m.end()) - m.begin());
    if (!(m[peak] > 0.0))
        throw invalid_input_error("profile is identically zero");
    if (normalize) {
        const double scale = m[peak];
        for (auto& v : m)
            v /= scale;
    }
    const double half = m[peak] / 2.0;
    auto crossing = [&](bool right) -> double {
        std::size_t prev = peak;
        for (;;) {
            std::size_t i;
            if (right) {
                if (prev + 1 >= m.size())
                    break;
                i = prev + 1;
            } else {
                if (prev == 0)
                    break;
                i = prev - 1;
            }
            if (m[i] < half) {
                const double t = (half - m[prev]) / (m[i] - m[prev]);
                return xs[prev] + t * (xs[i] - xs[prev]);
            }
            prev = i;
        }
        throw unbounded_width_error("no half-maximum crossing inside the profile domain");
    };
    const double left = crossing(false);
    const double right = crossing(true);
    return right - left;
}

struct GreenAverageResult {
    std::vector<double> xs;
    std::vector<double> profile_bubbly;
    std::vector<double> profile_free;
    GreenMaps maps;
};

// Frequency-averaged Im G profiles over [lo, hi] (absolute rad/s), sampled on
// a uniform grid of n_samples frequencies.
inline GreenAverageResult green_average(const ExperimentConfig& cfg, double lo, double hi,
                                        int n_samples) {
    if (!(lo > 0.0) || !(hi > lo))
        throw invalid_input_error("averaging band must be ordered and positive");
    if (n_samples < 2)
        throw invalid_input_error("need at least two averaging samples");
    ExperimentConfig widened = cfg;
    widened.map_omega_lo = std::min(cfg.map_omega_lo, lo);
    widened.map_omega_hi = std::max(cfg.map_omega_hi, hi);
    GreenAverageResult out;
    out.xs = line_coordinates(cfg);
    out.maps = green_map(widened, detail::linspace(lo, hi, n_samples), out.xs);
    out.profile_bubbly = frequency_average(out.maps.bubbly, lo, hi);
    out.profile_free = frequency_average(out.maps.free_space, lo, hi);
    return out;
}

}
