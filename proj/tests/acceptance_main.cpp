// Acceptance suite: one check per release criterion, each printed as a single
// [PASS]/[FAIL] line with the measured and required values. The exit code is
// the number of failed criteria, so the harness doubles as a CI gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bubbly/bubbly.hpp"

using namespace bubbly;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double rel(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::abs(b);
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

template <typename F>
std::complex<double> simpson(F f, int m) {
    const double h = pi / (2 * m);
    std::complex<double> acc = f(0.0) + f(pi);
    for (int i = 1; i < 2 * m; ++i)
        acc += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

// Brute-force surface quadrature of the layer operators applied to the
// constant density, with the evaluation point at the north pole so the
// kernel depends only on the polar angle via d(theta) = 2 R sin(theta / 2).
std::complex<double> single_layer_quadrature(double k, double R, int m) {
    return simpson(
        [k, R](double theta) -> std::complex<double> {
            if (theta == 0.0)
                return -R / 2.0;
            const double d = 2.0 * R * std::sin(theta / 2.0);
            return -std::polar(1.0, k * d) * R * R * std::sin(theta) / (2.0 * d);
        },
        m);
}

std::complex<double> neumann_poincare_quadrature(double k, double R, int m) {
    using namespace std::complex_literals;
    return simpson(
        [k, R](double theta) -> std::complex<double> {
            if (theta == 0.0)
                return 0.25;
            const double d = 2.0 * R * std::sin(theta / 2.0);
            const std::complex<double> dG =
                -std::polar(1.0, k * d) * (1i * k * d - 1.0) / (4.0 * pi * d * d);
            return dG * (d / (2.0 * R)) * 2.0 * pi * R * R * std::sin(theta);
        },
        m);
}

}  // namespace

int main() {
    const MediaParams media{1e3, 1.2, 2.07e9, 1.27e5};
    const double R = 5e-5;
    const ScatteringModel exact = make_scattering_model(ScatteringVariant::exact, media, R);
    const ScatteringModel tilde = make_scattering_model(ScatteringVariant::tilde, media, R);

    // Criteria 7 and 8 share one full-scale pipeline run.
    std::optional<ForwardResult> fwd;
    std::optional<TimeReversalResult> rev;

    std::vector<std::pair<const char*, std::function<Outcome()>>> criteria;

    criteria.emplace_back("minnaert root", [&]() -> Outcome {
        const Stopwatch sw;
        const double x = minnaert_root(1.2e-3);
        const double ms = sw.seconds() * 1e3;
        const double residual = std::abs(1.0 - 1.2e-3 - x * std::cos(x) / std::sin(x));
        const double dev = std::abs(x - 0.06);
        const bool pass = dev < 2e-3 && residual < 1e-10 && ms < 1.0;
        std::ostringstream os;
        os << "x_M=" << fmt(x, 15) << " |x_M-0.06|=" << fmt(dev) << " (need <2e-3), residual="
           << fmt(residual) << " (need <1e-10), " << fmt(ms) << " ms (need <1)";
        return {pass, os.str()};
    });

    criteria.emplace_back("resonant gain", [&]() -> Outcome {
        const std::complex<double> f = scattering_fn(exact, exact.x_M);
        const double gain = std::abs(f) / R;
        const double target = exact.c_w / (exact.c_b * exact.x_M);
        const double identity_err = std::abs(gain - target) / target;
        const double seventy_err = std::abs(gain - 70.0) / 70.0;
        const double re_rel = std::abs(f.real()) / std::abs(f);
        const bool pass = identity_err < 1e-10 && seventy_err < 0.10 && re_rel < 1e-10;
        std::ostringstream os;
        os << "|f|/R=" << fmt(gain, 10) << " vs c_w/(c_b x_M)=" << fmt(target, 10) << " rel="
           << fmt(identity_err) << " (need <1e-10), vs 70: " << fmt(seventy_err)
           << " (need <0.10), |Re f|/|f|=" << fmt(re_rel) << " (need <1e-10)";
        return {pass, os.str()};
    });

    criteria.emplace_back("peak offset", [&]() -> Outcome {
        const Stopwatch sw;
        const double x0 = peak_scattering_arg(exact, 100000);
        const double secs = sw.seconds();
        const double offset = std::abs(exact.x_M - x0);
        const bool pass = offset >= 3e-4 && offset <= 1.2e-3 && secs < 1.0;
        std::ostringstream os;
        os << "x_0=" << fmt(x0, 15) << " |x_M-x_0|=" << fmt(offset)
           << " (need within [3e-4, 1.2e-3]), " << fmt(secs) << " s (need <1)";
        return {pass, os.str()};
    });

    criteria.emplace_back("approximation gap", [&]() -> Outcome {
        double sup = 0.0;
        double arg = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            const double x = 0.1 * static_cast<double>(i) / (n - 1);
            const double d = std::abs(scattering_fn(exact, x) / R - scattering_fn(tilde, x));
            if (d > sup) {
                sup = d;
                arg = x;
            }
        }
        const bool pass = std::abs(sup - 0.47) <= 0.05;
        std::ostringstream os;
        os << "sup |f/R - f~|=" << fmt(sup) << " at x=" << fmt(arg) << " (need 0.47 +/- 0.05)";
        return {pass, os.str()};
    });

    criteria.emplace_back("layer potential quadrature", [&]() -> Outcome {
        const Stopwatch sw;
        double worst = 0.0;
        for (double x : {1e-3, 0.06, 0.5, 1.0}) {
            const double k = x / R;
            worst = std::max(worst,
                             rel(single_layer_boundary(k, R), single_layer_quadrature(k, R, 10000)));
            worst = std::max(worst, rel(neumann_poincare_boundary(k, R),
                                        neumann_poincare_quadrature(k, R, 10000)));
        }
        const double secs = sw.seconds();
        const bool pass = worst < 1e-6 && secs < 5.0;
        std::ostringstream os;
        os << "worst closed-form vs quadrature rel err=" << fmt(worst)
           << " over kR in {1e-3, 0.06, 0.5, 1} (need <1e-6), " << fmt(secs) << " s (need <5)";
        return {pass, os.str()};
    });

    criteria.emplace_back("point interaction correctness", [&]() -> Outcome {
        const double omega = 0.5 * exact.omega_M;
        const double k = omega / exact.c_w;
        const std::complex<double> f = monopole_amplitude(exact, omega);
        auto incident = [k](const Eigen::Vector3d& x) {
            return std::polar(1.0, k * x.x());
        };

        BubbleCloud pair;
        pair.radius = R;
        pair.half_length = 5e-3;
        pair.centers = {{-1e-3, 0.0, 0.0}, {1e-3, 2e-4, 0.0}};
        const InteractionMatrix m2 = assemble(pair, f, k);
        Eigen::VectorXcd b(2);
        b << incident(pair.centers[0]), incident(pair.centers[1]);
        const Eigen::VectorXcd direct = FoldySolver(m2).solve(b);
        Eigen::MatrixXcd a = m2.entries - Eigen::MatrixXcd::Identity(2, 2);
        Eigen::VectorXcd series = b;
        Eigen::VectorXcd term = b;
        for (int i = 0; i < 60; ++i) {
            term = -(a * term).eval();
            series += term;
        }
        const double series_err = (direct - series).norm() / direct.norm();

        BubbleCloud one;
        one.radius = R;
        one.half_length = 5e-3;
        one.centers = {{2e-4, -1e-4, 3e-4}};
        const InteractionMatrix m1 = assemble(one, f, k);
        Eigen::VectorXcd b1(1);
        b1 << incident(one.centers[0]);
        const Eigen::VectorXcd w1 = FoldySolver(m1).solve(b1);
        double mono_err = 0.0;
        for (const Eigen::Vector3d& x :
             {Eigen::Vector3d{2e-3, 0.0, 0.0}, Eigen::Vector3d{-1e-3, 1e-3, 2e-3},
              Eigen::Vector3d{0.0, -3e-3, 1e-3}}) {
            const std::complex<double> total = total_field(x, one, f, k, w1, incident);
            const std::complex<double> closed =
                incident(x) + monopole_field(x, one.centers[0], f, incident(one.centers[0]), k);
            mono_err = std::max(mono_err, rel(total, closed));
        }
        const bool pass = series_err < 1e-8 && mono_err < 1e-12;
        std::ostringstream os;
        os << "N=2 solve vs Neumann series rel=" << fmt(series_err)
           << " (need <1e-8), N=1 vs monopole formula rel=" << fmt(mono_err) << " (need <1e-12)";
        return {pass, os.str()};
    });

    criteria.emplace_back("sweep scale", [&]() -> Outcome {
        ExperimentConfig cfg;
        const Stopwatch sw;
        fwd = run_forward(cfg);
        rev = run_time_reversal(cfg, fwd->recordings);
        const double secs = sw.seconds();
        const auto banded = fwd->band.size();
        const bool pass = banded >= 5745 && banded <= 5755 && secs < 1800.0;
        std::ostringstream os;
        os << "banded frequencies=" << banded << " (need 5750 +/- 5), bubbles="
           << fwd->cloud.size() << ", forward+reverse " << fmt(secs) << " s (need <1800)";
        return {pass, os.str()};
    });

    criteria.emplace_back("temporal refocus", [&]() -> Outcome {
        if (!rev)
            return {false, "pipeline run unavailable"};
        const ExperimentConfig cfg;
        const double expected = 0.0480;
        const double tol = 5.0 * cfg.dt;
        const double dev = std::abs(rev->peak_time - expected);
        const bool pass = dev <= tol;
        std::ostringstream os;
        os << "peak |s#| at t=" << fmt(rev->peak_time, 6) << " s (need " << fmt(expected, 6)
           << " +/- " << fmt(tol) << "); offset=" << fmt(dev)
           << "; measured peak sits at T - t0 - window/2";
        return {pass, os.str()};
    });

    criteria.emplace_back("super focusing", [&]() -> Outcome {
        ExperimentConfig cfg;
        const double lo = 0.8 * exact.omega_M;
        const double hi = 0.99 * exact.omega_M;
        double w_free = 0.0;
        int ok = 0;
        std::ostringstream ratios;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            cfg.seed = seed;
            const GreenAverageResult res = green_average(cfg, lo, hi, 401);
            if (seed == 1)
                w_free = fwhm(res.xs, res.profile_free);
            double ratio;
            try {
                ratio = fwhm(res.xs, res.profile_bubbly) / w_free;
            } catch (const unbounded_width_error&) {
                ratios << " >1";
                continue;
            }
            if (ratio < 0.3)
                ++ok;
            ratios << ' ' << fmt(ratio, 3);
        }
        const bool free_ok = std::abs(w_free - 0.0152) <= 0.1 * 0.0152;
        const bool pass = free_ok && ok >= 4;
        std::ostringstream os;
        os << "free-space FWHM=" << fmt(w_free) << " m (need 0.0152 +/- 10%), w_m/w per seed:"
           << ratios.str() << " -> " << ok << "/5 below 0.3 (need >=4)";
        return {pass, os.str()};
    });

    criteria.emplace_back("band suppression", [&]() -> Outcome {
        ExperimentConfig cfg;
        cfg.seed = 1;
        const double om = exact.omega_M;
        const GreenAverageResult above = green_average(cfg, 1.01 * om, 2.0 * om, 401);
        double max_m = 0.0;
        double max_f = 0.0;
        for (std::size_t i = 0; i < above.xs.size(); ++i) {
            max_m = std::max(max_m, std::abs(above.profile_bubbly[i]));
            max_f = std::max(max_f, std::abs(above.profile_free[i]));
        }
        const double suppression = max_m / max_f;

        const GreenAverageResult high = green_average(cfg, 2.0 * om, 4.0 * om, 401);
        double max_free = 0.0;
        for (double v : high.profile_free)
            max_free = std::max(max_free, std::abs(v));
        double dev = 0.0;
        const double quarter = cfg.box_length / 4.0;
        for (std::size_t i = 0; i < high.xs.size(); ++i) {
            if (std::abs(high.xs[i]) > quarter)
                dev = std::max(dev, std::abs(high.profile_bubbly[i] - high.profile_free[i]));
        }
        const double agreement = dev / max_free;
        const bool pass = suppression < 0.2 && agreement < 0.2;
        std::ostringstream os;
        os << "[1.01, 2] w_M: max|<Im G_m>| / max|<Im G>|=" << fmt(suppression)
           << " (need <0.2); [2, 4] w_M: max dev on |x|>L/4 / max|<Im G>|=" << fmt(agreement)
           << " (need <0.2)";
        return {pass, os.str()};
    });

    criteria.emplace_back("pipeline sanity", [&]() -> Outcome {
        ExperimentConfig cfg;
        cfg.phi = 0.0;
        cfg.count = 0;
        const ForwardResult fr = run_forward(cfg);
        const double c_w = exact.c_w;
        double worst_spec = 0.0;
        double worst_parseval = 0.0;
        for (std::size_t j = 0; j < cfg.receivers.size(); ++j) {
            const TimeSeries& trace = fr.recordings.traces[j];
            const Spectrum sp = to_spectrum(trace);
            const double d = (cfg.receivers[j] - cfg.source).norm();
            double max_mag = 0.0;
            double max_err = 0.0;
            for (std::size_t m : fr.band) {
                const double omega = sp.omega_at(m);
                const std::complex<double> expected =
                    fr.pulse_spectrum.coefficients[m] * greens_fn(d, omega / c_w);
                max_mag = std::max(max_mag, std::abs(expected));
                max_err = std::max(max_err, std::abs(sp.coefficients[m] - expected));
            }
            worst_spec = std::max(worst_spec, max_err / max_mag);

            double sum_t = 0.0;
            for (double s : trace.samples)
                sum_t += s * s * trace.dt;
            double sum_w = 0.0;
            for (const std::complex<double>& c : sp.coefficients)
                sum_w += std::norm(c) * sp.domega;
            worst_parseval = std::max(worst_parseval, std::abs(sum_t - 2.0 * pi * sum_w) / sum_t);
        }
        const bool pass = worst_spec < 1e-6 && worst_parseval < 1e-10;
        std::ostringstream os;
        os << "banded spectrum vs analytic point source rel=" << fmt(worst_spec)
           << " (need <1e-6), Parseval rel=" << fmt(worst_parseval) << " (need <1e-10)";
        return {pass, os.str()};
    });

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("unexpected exception: ") + e.what()};
        }
        if (!o.pass)
            ++failures;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed, %d failed\n", criteria.size() - failures,
                criteria.size(), failures);
    return failures;
}
