#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bubbly/csv.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/experiments.hpp"

namespace bubbly {

inline const char* variant_name(ScatteringVariant v) {
    switch (v) {
        case ScatteringVariant::exact: return "exact";
        case ScatteringVariant::tilde: return "tilde";
        case ScatteringVariant::simplified: return "simplified";
    }
    return "simplified";
}

inline ScatteringVariant parse_variant(const std::string& s) {
    if (s == "exact") return ScatteringVariant::exact;
    if (s == "tilde") return ScatteringVariant::tilde;
    if (s == "simplified") return ScatteringVariant::simplified;
    throw invalid_input_error("unknown scattering variant: '" + s + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& value, std::size_t line, const std::string& key) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *detail::trim(end).c_str() != '\0')
        throw parse_error("not a number: '" + value + "'", line, key);
    return v;
}

inline std::int64_t parse_integer(const std::string& value, std::size_t line,
                                  const std::string& key) {
    const double v = parse_number(value, line, key);
    const auto i = static_cast<std::int64_t>(v);
    if (static_cast<double>(i) != v)
        throw parse_error("not an integer: '" + value + "'", line, key);
    return i;
}

inline Eigen::Vector3d parse_triple(const std::string& value, std::size_t line,
                                    const std::string& key) {
    std::stringstream ss(value);
    std::string cell;
    std::vector<double> parts;
    while (std::getline(ss, cell, ','))
        parts.push_back(parse_number(trim(cell), line, key));
    if (parts.size() != 3)
        throw parse_error("expected three comma-separated coordinates: '" + value + "'", line,
                          key);
    return {parts[0], parts[1], parts[2]};
}

inline std::vector<Eigen::Vector3d> parse_triples(const std::string& value, std::size_t line,
                                                  const std::string& key) {
    std::stringstream ss(value);
    std::string group;
    std::vector<Eigen::Vector3d> out;
    while (std::getline(ss, group, ';')) {
        group = trim(group);
        if (!group.empty())
            out.push_back(parse_triple(group, line, key));
    }
    if (out.empty())
        throw parse_error("expected semicolon-separated coordinate triples", line, key);
    return out;
}

}

// Flat key = value format; '#' starts a comment, section names are dotted
// into the keys. Unknown keys are rejected so typos cannot silently fall back
// to defaults.
inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("expected 'key = value'", line_number, "");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error("expected 'key = value'", line_number, key);

        auto num = [&]() { return detail::parse_number(value, line_number, key); };
        auto integer = [&]() { return detail::parse_integer(value, line_number, key); };

        if (key == "media.rho_w") cfg.media.rho_w = num();
        else if (key == "media.rho_b") cfg.media.rho_b = num();
        else if (key == "media.kappa_w") cfg.media.kappa_w = num();
        else if (key == "media.kappa_b") cfg.media.kappa_b = num();
        else if (key == "cloud.radius") cfg.radius = num();
        else if (key == "cloud.box_length") cfg.box_length = num();
        else if (key == "cloud.phi") cfg.phi = num();
        else if (key == "cloud.count") cfg.count = integer();
        else if (key == "cloud.exclusion_radius") cfg.exclusion_radius = num();
        else if (key == "cloud.max_attempts") cfg.max_place_attempts = static_cast<std::uint64_t>(integer());
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(integer());
        else if (key == "threads") cfg.threads = static_cast<unsigned>(integer());
        else if (key == "source") cfg.source = detail::parse_triple(value, line_number, key);
        else if (key == "receivers") cfg.receivers = detail::parse_triples(value, line_number, key);
        else if (key == "pulse.omega_r") cfg.omega_R = num();
        else if (key == "pulse.t0") cfg.t0 = num();
        else if (key == "pulse.window") cfg.pulse_window = num();
        else if (key == "signal.duration") cfg.duration = num();
        else if (key == "signal.dt") cfg.dt = num();
        else if (key == "band.lo") cfg.band_lo = num();
        else if (key == "band.hi") cfg.band_hi = num();
        else if (key == "line.samples") cfg.line_samples = static_cast<int>(integer());
        else if (key == "line.extent") cfg.line_extent = num();
        else if (key == "map.omega_lo") cfg.map_omega_lo = num();
        else if (key == "map.omega_hi") cfg.map_omega_hi = num();
        else if (key == "map.omega_samples") cfg.map_omega_samples = static_cast<int>(integer());
        else if (key == "avg.lo") cfg.avg_lo = num();
        else if (key == "avg.hi") cfg.avg_hi = num();
        else if (key == "avg.omega_samples") cfg.avg_omega_samples = static_cast<int>(integer());
        else if (key == "timereverse.map_time_stride") cfg.map_time_stride = static_cast<int>(integer());
        else if (key == "model.variant") cfg.variant = parse_variant(value);
        else
            throw parse_error("unknown key", line_number, key);
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open config: " + path);
    return parse_config(in);
}

// Canonical key to value map mirroring the config grammar; written into the
// run manifest so outputs carry the exact inputs that produced them.
inline std::map<std::string, std::string> config_snapshot(const ExperimentConfig& cfg) {
    std::map<std::string, std::string> out;
    auto put = [&out](const std::string& key, double v) { out[key] = format_double(v); };
    put("media.rho_w", cfg.media.rho_w);
    put("media.rho_b", cfg.media.rho_b);
    put("media.kappa_w", cfg.media.kappa_w);
    put("media.kappa_b", cfg.media.kappa_b);
    put("cloud.radius", cfg.radius);
    put("cloud.box_length", cfg.box_length);
    put("cloud.phi", cfg.phi);
    out["cloud.count"] = std::to_string(cfg.count);
    put("cloud.exclusion_radius", cfg.exclusion_radius);
    out["cloud.max_attempts"] = std::to_string(cfg.max_place_attempts);
    out["seed"] = std::to_string(cfg.seed);
    out["threads"] = std::to_string(cfg.threads);
    auto triple = [](const Eigen::Vector3d& v) {
        return format_double(v[0]) + "," + format_double(v[1]) + "," + format_double(v[2]);
    };
    out["source"] = triple(cfg.source);
    std::string recv;
    for (std::size_t i = 0; i < cfg.receivers.size(); ++i) {
        if (i > 0)
            recv += "; ";
        recv += triple(cfg.receivers[i]);
    }
    out["receivers"] = recv;
    put("pulse.omega_r", cfg.omega_R);
    put("pulse.t0", cfg.t0);
    put("pulse.window", cfg.pulse_window);
    put("signal.duration", cfg.duration);
    put("signal.dt", cfg.dt);
    put("band.lo", cfg.band_lo);
    put("band.hi", cfg.band_hi);
    out["line.samples"] = std::to_string(cfg.line_samples);
    put("line.extent", cfg.line_extent);
    put("map.omega_lo", cfg.map_omega_lo);
    put("map.omega_hi", cfg.map_omega_hi);
    out["map.omega_samples"] = std::to_string(cfg.map_omega_samples);
    put("avg.lo", cfg.avg_lo);
    put("avg.hi", cfg.avg_hi);
    out["avg.omega_samples"] = std::to_string(cfg.avg_omega_samples);
    out["timereverse.map_time_stride"] = std::to_string(cfg.map_time_stride);
    out["model.variant"] = variant_name(cfg.variant);
    return out;
}

}
