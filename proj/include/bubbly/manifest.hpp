#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bubbly/config.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/hash.hpp"
#include "bubbly/version.hpp"

namespace bubbly {

struct OutputRecord {
    std::string file;       // path relative to the manifest
    std::string fnv1a64;    // content hash, hex
};

struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::map<std::string, std::string> config;
    std::map<std::string, double> timings_s;
    std::vector<OutputRecord> outputs;
    std::string fingerprint;  // cloud/config fingerprint, hex; empty if not applicable
    std::vector<std::string> warnings;
};

inline std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open for hashing: " + path);
    std::uint64_t h = fnv1a64_offset;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
    return h;
}

inline nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["version"] = version_string;
    j["command"] = m.command;
    j["seed"] = m.seed;
    j["threads"] = m.threads;
    j["config"] = m.config;
    j["timings_s"] = m.timings_s;
    auto outputs = nlohmann::ordered_json::array();
    for (const auto& o : m.outputs)
        outputs.push_back({{"file", o.file}, {"fnv1a64", o.fnv1a64}});
    j["outputs"] = outputs;
    if (!m.fingerprint.empty())
        j["fingerprint"] = m.fingerprint;
    j["warnings"] = m.warnings;
    return j;
}

// Atomic write: the manifest appears complete or not at all, so a partial
// file never looks like a finished run.
inline void write_manifest(const std::string& path, const RunManifest& m) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw io_error("cannot open for writing: " + tmp);
        out << manifest_to_json(m).dump(2) << '\n';
        out.flush();
        if (!out)
            throw io_error("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw io_error("cannot move manifest into place: " + path + " (" + ec.message() + ")");
}

inline RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open manifest: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("manifest is not valid JSON: ") + e.what(), 0, "");
    }
    RunManifest m;
    m.command = j.value("command", "");
    m.seed = j.value("seed", std::uint64_t{0});
    m.threads = j.value("threads", 0u);
    if (j.contains("config"))
        m.config = j.at("config").get<std::map<std::string, std::string>>();
    if (j.contains("timings_s"))
        m.timings_s = j.at("timings_s").get<std::map<std::string, double>>();
    if (j.contains("outputs"))
        for (const auto& o : j.at("outputs"))
            m.outputs.push_back({o.value("file", ""), o.value("fnv1a64", "")});
    m.fingerprint = j.value("fingerprint", "");
    if (j.contains("warnings"))
        m.warnings = j.at("warnings").get<std::vector<std::string>>();
    return m;
}

}
