#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bubbly/bubbly.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string variant = "exact";
    std::string range = "0:0.1:1e-3";
    std::string band;
    int samples = 0;
    std::string recordings;
};

bubbly::ExperimentConfig effective_config(const Options& opt) {
    bubbly::ExperimentConfig cfg;
    if (!opt.config_path.empty())
        cfg = bubbly::load_config(opt.config_path);
    if (opt.seed)
        cfg.seed = *opt.seed;
    if (opt.threads)
        cfg.threads = *opt.threads;
    cfg.validate();
    return cfg;
}

std::vector<double> parse_range(const std::string& spec) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3)
        throw bubbly::invalid_input_error("range must be lo:hi:step, got '" + spec + "'");
    if (!(step > 0.0) || !(hi >= lo))
        throw bubbly::invalid_input_error("range must be increasing with positive step");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

std::pair<double, double> parse_band(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf%c", &lo, &hi, &extra) != 2)
        throw bubbly::invalid_input_error("band must be lo:hi, got '" + spec + "'");
    return {lo, hi};
}

std::string out_path(const Options& opt, const std::string& name) {
    return (std::filesystem::path(opt.out_dir) / name).string();
}

void add_output(bubbly::RunManifest& manifest, const Options& opt, const std::string& name) {
    manifest.outputs.push_back({name, bubbly::to_hex(bubbly::hash_file(out_path(opt, name)))});
}

void finish_manifest(bubbly::RunManifest& manifest, const Options& opt,
                     const bubbly::ExperimentConfig& cfg, const std::string& command) {
    manifest.command = command;
    manifest.seed = cfg.seed;
    manifest.threads = cfg.threads;
    manifest.config = bubbly::config_snapshot(cfg);
    bubbly::write_manifest(out_path(opt, "manifest.json"), manifest);
}

int run_minnaert(const Options& opt) {
    const bubbly::ExperimentConfig cfg = effective_config(opt);
    bubbly::detail::Timer timer;
    const bubbly::ScatteringModel model =
        bubbly::make_scattering_model(bubbly::ScatteringVariant::exact, cfg.media, cfg.radius);
    const double x = model.x_M;
    const double residual = 1.0 - model.delta - x * std::cos(x) / std::sin(x);
    bubbly::CsvTable table;
    table.header = {"x_m [1]",      "omega_m [rad/s]", "f_m [Hz]",  "residual [1]",
                    "delta [1]",    "c_b [m/s]",       "c_w [m/s]", "radius [m]"};
    table.rows.push_back({x, model.omega_M, model.omega_M / (2.0 * std::numbers::pi), residual,
                          model.delta, model.c_b, model.c_w, model.radius});
    bubbly::write_csv(out_path(opt, "minnaert.csv"), table);
    bubbly::RunManifest manifest;
    manifest.timings_s["total"] = timer.seconds();
    add_output(manifest, opt, "minnaert.csv");
    finish_manifest(manifest, opt, cfg, "minnaert");
    return 0;
}

int run_scatterfn(const Options& opt) {
    bubbly::ExperimentConfig cfg = effective_config(opt);
    cfg.variant = bubbly::parse_variant(opt.variant);
    bubbly::detail::Timer timer;
    const bubbly::ScatteringModel model =
        bubbly::make_scattering_model(cfg.variant, cfg.media, cfg.radius);
    const std::vector<double> grid = parse_range(opt.range);
    const bool takes_omega = cfg.variant == bubbly::ScatteringVariant::simplified;
    bubbly::CsvTable table;
    table.header = {takes_omega ? "omega [rad/s]" : "x [1]", "f.re [m]", "f.im [m]",
                    "abs_over_radius [1]"};
    for (double arg : grid) {
        const std::complex<double> f = bubbly::scattering_fn(model, arg);
        table.rows.push_back({arg, f.real(), f.imag(), std::abs(f) / model.radius});
    }
    bubbly::write_csv(out_path(opt, "scatterfn.csv"), table);
    bubbly::RunManifest manifest;
    manifest.timings_s["total"] = timer.seconds();
    add_output(manifest, opt, "scatterfn.csv");
    finish_manifest(manifest, opt, cfg, "scatterfn");
    return 0;
}

void write_recordings_csv(const Options& opt, const bubbly::ExperimentConfig& cfg,
                          const bubbly::Recordings& rec) {
    bubbly::CsvTable table;
    table.header = {"t [s]"};
    for (std::size_t j = 0; j < rec.traces.size(); ++j)
        table.header.push_back("r" + std::to_string(j + 1) + " [1]");
    const std::size_t nt = rec.traces[0].size();
    table.rows.reserve(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        std::vector<double> row;
        row.reserve(rec.traces.size() + 1);
        row.push_back(static_cast<double>(i) * cfg.dt);
        for (const auto& trace : rec.traces)
            row.push_back(trace.samples[i]);
        table.rows.push_back(std::move(row));
    }
    bubbly::write_csv(out_path(opt, "recordings.csv"), table);
}

int run_forward(const Options& opt) {
    const bubbly::ExperimentConfig cfg = effective_config(opt);
    const bubbly::ForwardResult fr = bubbly::run_forward(cfg);

    bubbly::CsvTable pulse;
    pulse.header = {"t [s]", "s [1]"};
    pulse.rows.reserve(fr.pulse.size());
    for (std::size_t i = 0; i < fr.pulse.size(); ++i)
        pulse.rows.push_back({fr.pulse.time_at(i), fr.pulse.samples[i]});
    bubbly::write_csv(out_path(opt, "pulse.csv"), pulse);
    write_recordings_csv(opt, cfg, fr.recordings);

    bubbly::RunManifest manifest;
    manifest.timings_s = fr.timings_s;
    manifest.warnings = fr.warnings;
    manifest.fingerprint = bubbly::to_hex(fr.recordings.fingerprint);
    add_output(manifest, opt, "pulse.csv");
    add_output(manifest, opt, "recordings.csv");
    finish_manifest(manifest, opt, cfg, "forward");
    return 0;
}

bubbly::Recordings load_recordings(const std::string& path, const bubbly::ExperimentConfig& cfg) {
    const bubbly::CsvTable table = bubbly::read_csv(path);
    if (table.header.size() != cfg.receivers.size() + 1)
        throw bubbly::config_mismatch_error("recordings hold " +
                                            std::to_string(table.header.size() - 1) +
                                            " traces but the configuration names " +
                                            std::to_string(cfg.receivers.size()) + " receivers");
    if (table.rows.size() < 2)
        throw bubbly::invalid_input_error("recordings need at least two samples");
    const double file_dt = table.rows[1][0] - table.rows[0][0];
    if (std::abs(file_dt - cfg.dt) > 1e-12 * cfg.dt)
        throw bubbly::config_mismatch_error("recordings sample step does not match the config");

    bubbly::Recordings rec;
    rec.traces.resize(cfg.receivers.size());
    for (std::size_t j = 0; j < rec.traces.size(); ++j) {
        rec.traces[j].dt = cfg.dt;
        rec.traces[j].t_start = 0.0;
        rec.traces[j].samples.reserve(table.rows.size());
    }
    for (const auto& row : table.rows)
        for (std::size_t j = 0; j < rec.traces.size(); ++j)
            rec.traces[j].samples.push_back(row[j + 1]);

    const auto manifest_path =
        (std::filesystem::path(path).parent_path() / "manifest.json").string();
    const bubbly::RunManifest source = bubbly::read_manifest(manifest_path);
    if (source.fingerprint.empty())
        throw bubbly::config_mismatch_error("manifest next to the recordings has no fingerprint");
    rec.fingerprint = std::stoull(source.fingerprint, nullptr, 16);
    return rec;
}

int run_timereverse(const Options& opt) {
    const bubbly::ExperimentConfig cfg = effective_config(opt);
    bubbly::RunManifest manifest;

    bubbly::Recordings rec;
    if (!opt.recordings.empty()) {
        rec = load_recordings(opt.recordings, cfg);
    } else {
        const bubbly::ForwardResult fr = bubbly::run_forward(cfg);
        rec = fr.recordings;
        manifest.timings_s["forward"] = fr.timings_s.at("total");
        write_recordings_csv(opt, cfg, rec);
        add_output(manifest, opt, "recordings.csv");
    }

    const bubbly::TimeReversalResult tr = bubbly::run_time_reversal(cfg, rec);

    bubbly::CsvTable sharp;
    sharp.header = {"t [s]", "s_sharp [1]"};
    sharp.rows.reserve(tr.s_sharp.size());
    for (std::size_t i = 0; i < tr.s_sharp.size(); ++i)
        sharp.rows.push_back({tr.s_sharp.time_at(i), tr.s_sharp.samples[i]});
    bubbly::write_csv(out_path(opt, "s_sharp.csv"), sharp);

    bubbly::CsvTable profile;
    profile.header = {"x [m]", "u_abs [1]"};
    for (std::size_t p = 0; p < tr.map.axis1.size(); ++p)
        profile.rows.push_back({tr.map.axis1[p], tr.profile_at_peak[p]});
    bubbly::write_csv(out_path(opt, "refocus_profile.csv"), profile);

    bubbly::CsvTable map;
    map.header = {"x [m]", "t [s]", "u [1]"};
    const auto stride = static_cast<std::size_t>(cfg.map_time_stride);
    for (std::size_t p = 0; p < tr.map.axis1.size(); ++p)
        for (std::size_t i = 0; i < tr.map.axis2.size(); i += stride)
            map.rows.push_back({tr.map.axis1[p], tr.map.axis2[i],
                                tr.map.values(static_cast<Eigen::Index>(p),
                                              static_cast<Eigen::Index>(i))});
    bubbly::write_csv(out_path(opt, "refocus_map.csv"), map);

    double width = std::numeric_limits<double>::quiet_NaN();
    try {
        width = bubbly::fwhm(tr.map.axis1, tr.profile_at_peak);
    } catch (const bubbly::error&) {
    }
    bubbly::CsvTable summary;
    summary.header = {"peak_index [1]", "peak_time [s]", "fwhm [m]"};
    summary.rows.push_back({static_cast<double>(tr.peak_index), tr.peak_time, width});
    bubbly::write_csv(out_path(opt, "refocus_summary.csv"), summary);

    for (const auto& t : tr.timings_s)
        manifest.timings_s[t.first] = t.second;
    manifest.warnings = tr.warnings;
    manifest.fingerprint = bubbly::to_hex(rec.fingerprint);
    add_output(manifest, opt, "s_sharp.csv");
    add_output(manifest, opt, "refocus_profile.csv");
    add_output(manifest, opt, "refocus_map.csv");
    add_output(manifest, opt, "refocus_summary.csv");
    finish_manifest(manifest, opt, cfg, "timereverse");
    return 0;
}

int run_greenmap(const Options& opt) {
    const bubbly::ExperimentConfig cfg = effective_config(opt);
    bubbly::detail::Timer timer;
    const std::vector<double> grid =
        bubbly::detail::linspace(cfg.map_omega_lo, cfg.map_omega_hi, cfg.map_omega_samples);
    const bubbly::GreenMaps maps = bubbly::green_map(cfg, grid, bubbly::line_coordinates(cfg));

    bubbly::CsvTable table;
    table.header = {"x [m]", "omega [rad/s]", "im_g_m [1/m]", "im_g_free [1/m]"};
    for (std::size_t p = 0; p < maps.bubbly.axis1.size(); ++p)
        for (std::size_t w = 0; w < maps.bubbly.axis2.size(); ++w)
            table.rows.push_back({maps.bubbly.axis1[p], maps.bubbly.axis2[w],
                                  maps.bubbly.values(static_cast<Eigen::Index>(p),
                                                     static_cast<Eigen::Index>(w)),
                                  maps.free_space.values(static_cast<Eigen::Index>(p),
                                                         static_cast<Eigen::Index>(w))});
    bubbly::write_csv(out_path(opt, "green_map.csv"), table);

    bubbly::RunManifest manifest;
    manifest.timings_s["total"] = timer.seconds();
    manifest.warnings = maps.warnings;
    add_output(manifest, opt, "green_map.csv");
    finish_manifest(manifest, opt, cfg, "greenmap");
    return 0;
}

int run_greenavg(const Options& opt) {
    bubbly::ExperimentConfig cfg = effective_config(opt);
    if (!opt.band.empty()) {
        const auto [lo, hi] = parse_band(opt.band);
        cfg.avg_lo = lo;
        cfg.avg_hi = hi;
    }
    if (opt.samples > 0)
        cfg.avg_omega_samples = opt.samples;
    cfg.validate();

    bubbly::detail::Timer timer;
    const bubbly::ScatteringModel model =
        bubbly::make_scattering_model(cfg.variant, cfg.media, cfg.radius);
    const bubbly::GreenAverageResult res = bubbly::green_average(
        cfg, cfg.avg_lo * model.omega_M, cfg.avg_hi * model.omega_M, cfg.avg_omega_samples);

    bubbly::CsvTable table;
    table.header = {"x [m]", "avg_im_g_m [1/m]", "avg_im_g_free [1/m]"};
    for (std::size_t p = 0; p < res.xs.size(); ++p)
        table.rows.push_back({res.xs[p], res.profile_bubbly[p], res.profile_free[p]});
    bubbly::write_csv(out_path(opt, "green_avg.csv"), table);

    bubbly::RunManifest manifest;
    manifest.timings_s["total"] = timer.seconds();
    manifest.warnings = res.maps.warnings;
    add_output(manifest, opt, "green_avg.csv");
    finish_manifest(manifest, opt, cfg, "greenavg");
    return 0;
}

void emit_error_record(const std::string& kind, const std::string& message,
                       const bubbly::error* err = nullptr) {
    nlohmann::ordered_json record;
    record["error"] = kind;
    record["message"] = message;
    if (const auto* p = dynamic_cast<const bubbly::parse_error*>(err)) {
        record["line"] = p->line;
        if (!p->field.empty())
            record["field"] = p->field;
    }
    if (const auto* v = dynamic_cast<const bubbly::validation_error*>(err))
        record["field"] = v->field;
    std::cerr << record.dump() << '\n';
}

}

int main(int argc, char** argv) {
    CLI::App app{"bubbly cloud acoustics: resonance, scattering, time reversal"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "configuration file (key = value lines)");
        cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        cmd->add_option("--seed", opt.seed, "override the placement seed");
        cmd->add_option("--threads", opt.threads, "override the worker count (0 = all cores)");
    };

    CLI::App* minnaert = app.add_subcommand("minnaert", "resonance root and frequency");
    add_common(minnaert);

    CLI::App* scatterfn = app.add_subcommand("scatterfn", "tabulate a scattering function");
    add_common(scatterfn);
    scatterfn->add_option("--variant", opt.variant, "exact, tilde or simplified")
        ->capture_default_str();
    scatterfn->add_option("--range", opt.range, "argument grid lo:hi:step")
        ->capture_default_str();

    CLI::App* forward = app.add_subcommand("forward", "emit the pulse and record it");
    add_common(forward);

    CLI::App* timereverse =
        app.add_subcommand("timereverse", "re-emit reversed recordings and map the refocus");
    add_common(timereverse);
    timereverse->add_option("--recordings", opt.recordings,
                            "recordings.csv from a forward run (manifest.json beside it)");

    CLI::App* greenmap = app.add_subcommand("greenmap", "Im G over the line and frequency grid");
    add_common(greenmap);

    CLI::App* greenavg = app.add_subcommand("greenavg", "frequency-averaged Im G profiles");
    add_common(greenavg);
    greenavg->add_option("--band", opt.band, "averaging band lo:hi in multiples of omega_M");
    greenavg->add_option("--samples", opt.samples, "frequency samples across the band");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error_record("cli", e.what());
        return 2;
    }

    try {
        std::filesystem::create_directories(opt.out_dir);
        if (minnaert->parsed())
            return run_minnaert(opt);
        if (scatterfn->parsed())
            return run_scatterfn(opt);
        if (forward->parsed())
            return run_forward(opt);
        if (timereverse->parsed())
            return run_timereverse(opt);
        if (greenmap->parsed())
            return run_greenmap(opt);
        if (greenavg->parsed())
            return run_greenavg(opt);
    } catch (const bubbly::error& e) {
        emit_error_record(e.kind(), e.what(), &e);
        return 1;
    } catch (const std::exception& e) {
        emit_error_record("internal", e.what());
        return 1;
    }
    return 0;
}
