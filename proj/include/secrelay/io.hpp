#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "secrelay/channel.hpp"
#include "secrelay/experiments.hpp"

namespace secrelay {

/// 12 significant digits; enough to round-trip comparisons across languages.
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Writes via a sibling temp file and renames, so failures never leave a
/// partial output behind.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// channel JSON

inline nlohmann::json to_json(const ChannelRealization& ch) {
    return nlohmann::json{{"N", ch.num_subcarriers},
                          {"M", ch.num_users},
                          {"sigma2", ch.noise_power},
                          {"gain_sr", ch.gain_sr},
                          {"gain_su", ch.gain_su},
                          {"gain_ru", ch.gain_ru}};
}

inline ChannelRealization channel_from_json(const nlohmann::json& j) {
    ChannelRealization ch;
    ch.num_subcarriers = j.at("N").get<std::size_t>();
    ch.num_users = j.at("M").get<std::size_t>();
    ch.noise_power = j.at("sigma2").get<double>();
    ch.gain_sr = j.at("gain_sr").get<std::vector<double>>();
    ch.gain_su = j.at("gain_su").get<std::vector<double>>();
    ch.gain_ru = j.at("gain_ru").get<std::vector<double>>();
    validate(ch);
    return ch;
}

inline ChannelRealization load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel file: " + path);
    nlohmann::json j;
    in >> j;
    return channel_from_json(j);
}

// ---------------------------------------------------------------------------
// experiment config JSON

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const char* where) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument(std::string("config: unknown key '") + key + "' in " + where);
    }
}

inline NodePosition pos_from(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("config: positions must be [x, y] arrays");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

/// Parses an ExperimentConfig; absent fields keep their defaults, unknown
/// keys are rejected.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    detail::check_keys(j, {"num_subcarriers", "num_users", "sigma2", "path_loss_exponent",
                           "master_seed", "relay_sweep", "mode_gain", "utility_region"},
                       "top level");
    if (j.contains("num_subcarriers")) cfg.num_subcarriers = j["num_subcarriers"].get<std::size_t>();
    if (j.contains("num_users")) cfg.num_users = j["num_users"].get<std::size_t>();
    if (j.contains("sigma2")) cfg.sigma2 = j["sigma2"].get<double>();
    if (j.contains("path_loss_exponent")) cfg.path_loss_exponent = j["path_loss_exponent"].get<double>();
    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();

    if (j.contains("relay_sweep")) {
        const auto& s = j["relay_sweep"];
        detail::check_keys(s, {"trials", "alpha_grid", "relay_x_min", "relay_x_max", "relay_x_step",
                               "source", "user_center", "user_side"}, "relay_sweep");
        auto& c = cfg.relay_sweep;
        if (s.contains("trials")) c.trials = s["trials"].get<std::size_t>();
        if (s.contains("alpha_grid")) c.alpha_grid = s["alpha_grid"].get<std::vector<double>>();
        if (s.contains("relay_x_min")) c.relay_x_min = s["relay_x_min"].get<double>();
        if (s.contains("relay_x_max")) c.relay_x_max = s["relay_x_max"].get<double>();
        if (s.contains("relay_x_step")) c.relay_x_step = s["relay_x_step"].get<double>();
        if (s.contains("source")) c.source = detail::pos_from(s["source"]);
        if (s.contains("user_center")) c.user_center = detail::pos_from(s["user_center"]);
        if (s.contains("user_side")) c.user_side = s["user_side"].get<double>();
    }
    if (j.contains("mode_gain")) {
        const auto& s = j["mode_gain"];
        detail::check_keys(s, {"trials", "ps_grid", "source", "relay", "user_center", "user_side"},
                           "mode_gain");
        auto& c = cfg.mode_gain;
        if (s.contains("trials")) c.trials = s["trials"].get<std::size_t>();
        if (s.contains("ps_grid")) c.ps_grid = s["ps_grid"].get<std::vector<double>>();
        if (s.contains("source")) c.source = detail::pos_from(s["source"]);
        if (s.contains("relay")) c.relay = detail::pos_from(s["relay"]);
        if (s.contains("user_center")) c.user_center = detail::pos_from(s["user_center"]);
        if (s.contains("user_side")) c.user_side = s["user_side"].get<double>();
    }
    if (j.contains("utility_region")) {
        const auto& s = j["utility_region"];
        detail::check_keys(s, {"locations", "trials_per_location", "alpha", "source", "relay",
                               "region_center", "region_side"}, "utility_region");
        auto& c = cfg.utility_region;
        if (s.contains("locations")) c.locations = s["locations"].get<std::size_t>();
        if (s.contains("trials_per_location")) c.trials_per_location = s["trials_per_location"].get<std::size_t>();
        if (s.contains("alpha")) c.alpha = s["alpha"].get<double>();
        if (s.contains("source")) c.source = detail::pos_from(s["source"]);
        if (s.contains("relay")) c.relay = detail::pos_from(s["relay"]);
        if (s.contains("region_center")) c.region_center = detail::pos_from(s["region_center"]);
        if (s.contains("region_side")) c.region_side = s["region_side"].get<double>();
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return experiment_config_from_json(j);
}

/// Canonical serialization of the effective config; hashed into output
/// metadata so a result can be matched to the exact run settings.
inline std::string experiment_config_canonical(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "N=" << c.num_subcarriers << ";M=" << c.num_users << ";sigma2=" << fmt12(c.sigma2)
       << ";eta=" << fmt12(c.path_loss_exponent) << ";seed=" << c.master_seed;
    os << ";rs={trials=" << c.relay_sweep.trials << ";alpha=[";
    for (double a : c.relay_sweep.alpha_grid) os << fmt12(a) << ",";
    os << "];x=[" << fmt12(c.relay_sweep.relay_x_min) << ":" << fmt12(c.relay_sweep.relay_x_step)
       << ":" << fmt12(c.relay_sweep.relay_x_max) << "];src=(" << fmt12(c.relay_sweep.source.x) << ","
       << fmt12(c.relay_sweep.source.y) << ");uc=(" << fmt12(c.relay_sweep.user_center.x) << ","
       << fmt12(c.relay_sweep.user_center.y) << ");side=" << fmt12(c.relay_sweep.user_side) << "}";
    os << ";mg={trials=" << c.mode_gain.trials << ";ps=[";
    for (double p : c.mode_gain.ps_grid) os << fmt12(p) << ",";
    os << "];src=(" << fmt12(c.mode_gain.source.x) << "," << fmt12(c.mode_gain.source.y)
       << ");relay=(" << fmt12(c.mode_gain.relay.x) << "," << fmt12(c.mode_gain.relay.y)
       << ");uc=(" << fmt12(c.mode_gain.user_center.x) << "," << fmt12(c.mode_gain.user_center.y)
       << ");side=" << fmt12(c.mode_gain.user_side) << "}";
    os << ";ur={locs=" << c.utility_region.locations << ";tpl=" << c.utility_region.trials_per_location
       << ";alpha=" << fmt12(c.utility_region.alpha) << ";src=(" << fmt12(c.utility_region.source.x)
       << "," << fmt12(c.utility_region.source.y) << ");relay=(" << fmt12(c.utility_region.relay.x)
       << "," << fmt12(c.utility_region.relay.y) << ");rc=(" << fmt12(c.utility_region.region_center.x)
       << "," << fmt12(c.utility_region.region_center.y) << ");side="
       << fmt12(c.utility_region.region_side) << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// experiment CSV rendering

inline std::string metadata_block(const char* experiment, const ExperimentConfig& cfg,
                                  std::size_t trials) {
    std::ostringstream os;
    os << "# secrelay " << experiment << "\n";
    os << "# generator: " << kGeneratorId << "\n";
    os << "# seed: " << cfg.master_seed << "\n";
    os << "# trials: " << trials << "\n";
    os << "# config_hash: " << hex64(fnv1a64(experiment_config_canonical(cfg))) << "\n";
    return os.str();
}

inline std::string relay_sweep_csv(const RelaySweepResult& r, const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << metadata_block("relay-sweep", cfg, r.trials);
    os << "alpha,relay_x,pct_rc_mean,pct_rc_se,trials\n";
    for (std::size_t ai = 0; ai < r.alphas.size(); ++ai)
        for (std::size_t xi = 0; xi < r.relay_x.size(); ++xi) {
            const MeanStderr& m = r.pct_rc[ai * r.relay_x.size() + xi];
            os << fmt12(r.alphas[ai]) << "," << fmt12(r.relay_x[xi]) << "," << fmt12(m.mean)
               << "," << fmt12(m.stderr_) << "," << r.trials << "\n";
        }
    return os.str();
}

inline std::string mode_gain_csv(const ModeGainResult& r, const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << metadata_block("mode-gain", cfg, r.trials);
    os << "# equal power split: ps = ps_total / N\n";
    os << "ps_total,policy,improvement_pct_mean,improvement_pct_se,trials\n";
    for (std::size_t gi = 0; gi < r.ps_grid.size(); ++gi)
        for (std::size_t pi = 0; pi < 3; ++pi) {
            const MeanStderr& m = r.improvement_pct[gi * 3 + pi];
            os << fmt12(r.ps_grid[gi]) << "," << kGainPolicyNames[pi] << "," << fmt12(m.mean)
               << "," << fmt12(m.stderr_) << "," << r.trials << "\n";
        }
    return os.str();
}

inline std::string utility_region_csv(const UtilityRegionResult& r, const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << metadata_block("utility-region", cfg, r.trials_per_location);
    os << "# alpha: " << fmt12(r.alpha) << "\n";
    os << "x,y,pct_rc,pct_rc_se,category\n";
    for (const auto& p : r.points)
        os << fmt12(p.location.x) << "," << fmt12(p.location.y) << "," << fmt12(p.pct_rc) << ","
           << fmt12(p.pct_rc_se) << "," << utility_category(p.pct_rc) << "\n";
    return os.str();
}

}  // namespace secrelay
