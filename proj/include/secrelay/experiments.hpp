#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "secrelay/channel.hpp"
#include "secrelay/geometry.hpp"
#include "secrelay/policy.hpp"
#include "secrelay/rng.hpp"

namespace secrelay {

/// Seed for one unit of work: splitmix64(master + (i+1)*golden). Injective
/// in the index for a fixed master seed, so trials can run in any order.
inline std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return splitmix64(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ull);
}

/// Worker count: SECRELAY_THREADS caps it, 0 or unset means auto.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("SECRELAY_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v) < hw ? static_cast<unsigned>(v) : hw;
    }
    return hw;
}

/// Runs fn(0..count) on a small thread pool. Each index must write only its
/// own slots; results are then independent of scheduling.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// ---------------------------------------------------------------------------
// configuration

struct RelaySweepConfig {
    std::size_t trials = 500;
    std::vector<double> alpha_grid{0.1, 1.0, 10.0};
    double relay_x_min = 0.1;
    double relay_x_max = 1.5;
    double relay_x_step = 0.1;
    NodePosition source{0.0, 0.0};
    NodePosition user_center{2.0, 0.0};
    double user_side = 1.0;
};

struct ModeGainConfig {
    std::size_t trials = 500;
    std::vector<double> ps_grid{16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    NodePosition source{0.0, 0.0};
    NodePosition relay{0.5, 0.0};
    NodePosition user_center{2.0, 0.0};
    double user_side = 1.0;
};

struct UtilityRegionConfig {
    std::size_t locations = 2000;
    std::size_t trials_per_location = 12;
    double alpha = 1.0;
    NodePosition source{0.0, 0.5};
    NodePosition relay{0.0, -0.5};
    NodePosition region_center{0.0, 0.0};
    double region_side = 4.0;
};

struct ExperimentConfig {
    std::size_t num_subcarriers = 64;
    std::size_t num_users = 8;
    double sigma2 = 1.0;
    double path_loss_exponent = 3.0;
    std::uint64_t master_seed = 1;
    RelaySweepConfig relay_sweep;
    ModeGainConfig mode_gain;
    UtilityRegionConfig utility_region;
};

inline void require_increasing(const std::vector<double>& grid, const char* what) {
    if (grid.empty()) throw std::invalid_argument(std::string(what) + ": grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
}

inline void validate(const ExperimentConfig& c) {
    if (c.num_users < 2) throw std::invalid_argument("experiment: need at least 2 users");
    if (c.num_subcarriers < 1) throw std::invalid_argument("experiment: need at least 1 subcarrier");
    if (!(c.sigma2 > 0.0)) throw std::invalid_argument("experiment: sigma2 must be > 0");
    if (c.relay_sweep.trials < 1 || c.mode_gain.trials < 1 || c.utility_region.trials_per_location < 1)
        throw std::invalid_argument("experiment: trials must be >= 1");
    if (c.utility_region.locations < 1)
        throw std::invalid_argument("experiment: locations must be >= 1");
    require_increasing(c.relay_sweep.alpha_grid, "relay_sweep.alpha_grid");
    require_increasing(c.mode_gain.ps_grid, "mode_gain.ps_grid");
    if (!(c.relay_sweep.relay_x_step > 0.0) || !(c.relay_sweep.relay_x_max >= c.relay_sweep.relay_x_min))
        throw std::invalid_argument("relay_sweep: bad relay_x range");
    if (!(c.relay_sweep.user_side > 0.0) || !(c.mode_gain.user_side > 0.0) || !(c.utility_region.region_side > 0.0))
        throw std::invalid_argument("experiment: region sides must be > 0");
}

inline std::vector<double> relay_x_grid(const RelaySweepConfig& c) {
    std::vector<double> xs;
    for (double x = c.relay_x_min; x <= c.relay_x_max + 1e-9 * c.relay_x_step; x += c.relay_x_step)
        xs.push_back(x);
    return xs;
}

/// Users drawn uniformly inside a square; open intervals, so nobody lands
/// exactly on a node.
inline std::vector<NodePosition> draw_users(Engine& rng, NodePosition center, double side,
                                            std::size_t count) {
    std::vector<NodePosition> users(count);
    for (auto& u : users) {
        u.x = uniform_in(rng, center.x - 0.5 * side, center.x + 0.5 * side);
        u.y = uniform_in(rng, center.y - 0.5 * side, center.y + 0.5 * side);
    }
    return users;
}

// ---------------------------------------------------------------------------
// relay-position sweep

struct RelaySweepResult {
    std::vector<double> alphas;
    std::vector<double> relay_x;
    std::vector<MeanStderr> pct_rc;   ///< [alpha-major][relay_x], % of N in RC mode
    std::size_t trials = 0;
};

/// Percentage of subcarriers put into relayed mode by the satisfaction-level
/// policy, as the relay slides along the x axis. One user placement and one
/// fading draw per trial, shared across relay positions and alpha values.
inline RelaySweepResult run_relay_sweep(const ExperimentConfig& cfg) {
    validate(cfg);
    const RelaySweepConfig& sw = cfg.relay_sweep;
    const std::vector<double> xs = relay_x_grid(sw);
    const std::size_t n_a = sw.alpha_grid.size(), n_x = xs.size();
    const std::size_t n_cells = n_a * n_x;
    std::vector<std::vector<double>> per_trial(sw.trials, std::vector<double>(n_cells, 0.0));

    parallel_for(sw.trials, worker_count(), [&](std::size_t t) {
        const std::uint64_t ts = derive_trial_seed(cfg.master_seed, t);
        Engine pos_rng(ts);
        SystemGeometry geom;
        geom.source = sw.source;
        geom.users = draw_users(pos_rng, sw.user_center, sw.user_side, cfg.num_users);
        FadingConfig fad{cfg.path_loss_exponent, cfg.sigma2, cfg.num_subcarriers, splitmix64(ts)};
        for (std::size_t xi = 0; xi < n_x; ++xi) {
            geom.relay = {xs[xi], 0.0};
            const ChannelRealization ch = generate_channel(geom, fad);
            for (std::size_t ai = 0; ai < n_a; ++ai) {
                std::size_t cnt = 0;
                for (std::size_t n = 0; n < ch.num_subcarriers; ++n) {
                    std::span<const double> su(&ch.gain_su[n * ch.num_users], ch.num_users);
                    std::span<const double> ru(&ch.gain_ru[n * ch.num_users], ch.num_users);
                    const auto d = decide_subcarrier(ch.gain_sr[n], su, ru, cfg.sigma2,
                                                     PolicyKind::ALPHA, 0.0, sw.alpha_grid[ai]);
                    if (d.mode == Mode::RC) ++cnt;
                }
                per_trial[t][ai * n_x + xi] =
                    100.0 * static_cast<double>(cnt) / static_cast<double>(ch.num_subcarriers);
            }
        }
    });

    RelaySweepResult res;
    res.alphas = sw.alpha_grid;
    res.relay_x = xs;
    res.trials = sw.trials;
    res.pct_rc.resize(n_cells);
    std::vector<double> cell(sw.trials);
    for (std::size_t c = 0; c < n_cells; ++c) {
        for (std::size_t t = 0; t < sw.trials; ++t) cell[t] = per_trial[t][c];
        res.pct_rc[c] = mean_stderr(cell);
    }
    return res;
}

// ---------------------------------------------------------------------------
// mode-selection gain

inline constexpr const char* kGainPolicyNames[3] = {"optimal", "low_snr", "high_snr"};

struct ModeGainResult {
    std::vector<double> ps_grid;
    std::vector<MeanStderr> improvement_pct;   ///< [ps-major][policy 0..2]
    std::size_t trials = 0;
};

/// Total secure-rate improvement of the mode-selection policies over static
/// direct mode, under an equal split of the source budget (Ps_total/N per
/// subcarrier) and hop-balancing relay power.
inline ModeGainResult run_mode_gain(const ExperimentConfig& cfg) {
    validate(cfg);
    const ModeGainConfig& mg = cfg.mode_gain;
    const std::size_t n_ps = mg.ps_grid.size();
    constexpr std::size_t n_pol = 3;
    std::vector<std::vector<double>> per_trial(mg.trials, std::vector<double>(n_ps * n_pol, 0.0));
    constexpr PolicyKind kinds[n_pol] = {PolicyKind::OPTIMAL, PolicyKind::LOW_SNR, PolicyKind::HIGH_SNR};

    parallel_for(mg.trials, worker_count(), [&](std::size_t t) {
        const std::uint64_t ts = derive_trial_seed(cfg.master_seed, t);
        Engine pos_rng(ts);
        SystemGeometry geom;
        geom.source = mg.source;
        geom.relay = mg.relay;
        geom.users = draw_users(pos_rng, mg.user_center, mg.user_side, cfg.num_users);
        FadingConfig fad{cfg.path_loss_exponent, cfg.sigma2, cfg.num_subcarriers, splitmix64(ts)};
        const ChannelRealization ch = generate_channel(geom, fad);
        for (std::size_t gi = 0; gi < n_ps; ++gi) {
            const double ps = mg.ps_grid[gi] / static_cast<double>(ch.num_subcarriers);
            double tot_dc = 0.0, tot[n_pol] = {0.0, 0.0, 0.0};
            for (std::size_t n = 0; n < ch.num_subcarriers; ++n) {
                std::span<const double> su(&ch.gain_su[n * ch.num_users], ch.num_users);
                std::span<const double> ru(&ch.gain_ru[n * ch.num_users], ch.num_users);
                for (std::size_t pi = 0; pi < n_pol; ++pi) {
                    const auto d = decide_subcarrier(ch.gain_sr[n], su, ru, cfg.sigma2, kinds[pi], ps);
                    tot[pi] += d.secure_rate;
                    if (pi == 0) tot_dc += d.rate_dc;
                }
            }
            for (std::size_t pi = 0; pi < n_pol; ++pi)
                per_trial[t][gi * n_pol + pi] =
                    tot_dc > 0.0 ? 100.0 * (tot[pi] - tot_dc) / tot_dc : 0.0;
        }
    });

    ModeGainResult res;
    res.ps_grid = mg.ps_grid;
    res.trials = mg.trials;
    res.improvement_pct.resize(n_ps * n_pol);
    std::vector<double> cell(mg.trials);
    for (std::size_t c = 0; c < n_ps * n_pol; ++c) {
        for (std::size_t t = 0; t < mg.trials; ++t) cell[t] = per_trial[t][c];
        res.improvement_pct[c] = mean_stderr(cell);
    }
    return res;
}

// ---------------------------------------------------------------------------
// relay utility region

struct UtilityPoint {
    NodePosition location;
    double pct_rc = 0.0;       ///< mean over trials at this location
    double pct_rc_se = 0.0;
};

struct UtilityRegionResult {
    std::vector<UtilityPoint> points;
    double alpha = 1.0;
    std::size_t trials_per_location = 0;
};

/// Category buckets for the share of relayed subcarriers won by a user.
inline const char* utility_category(double pct) {
    if (pct < 2.0) return "lt2";
    if (pct < 6.0) return "2to6";
    if (pct < 10.0) return "6to10";
    if (pct < 14.0) return "10to14";
    return "gt14";
}

/// Share of subcarriers a tagged user at a sampled location wins in relayed
/// mode under the satisfaction-level policy, with the remaining users and
/// the fading resampled every trial.
inline UtilityRegionResult run_utility_region(const ExperimentConfig& cfg) {
    validate(cfg);
    const UtilityRegionConfig& ur = cfg.utility_region;
    Engine loc_rng(derive_trial_seed(cfg.master_seed, 0));
    std::vector<NodePosition> locs(ur.locations);
    for (auto& l : locs) {
        l.x = uniform_in(loc_rng, ur.region_center.x - 0.5 * ur.region_side,
                         ur.region_center.x + 0.5 * ur.region_side);
        l.y = uniform_in(loc_rng, ur.region_center.y - 0.5 * ur.region_side,
                         ur.region_center.y + 0.5 * ur.region_side);
    }

    UtilityRegionResult res;
    res.alpha = ur.alpha;
    res.trials_per_location = ur.trials_per_location;
    res.points.resize(ur.locations);

    parallel_for(ur.locations, worker_count(), [&](std::size_t li) {
        std::vector<double> pct(ur.trials_per_location, 0.0);
        for (std::size_t t = 0; t < ur.trials_per_location; ++t) {
            const std::uint64_t ts =
                derive_trial_seed(cfg.master_seed, 1 + li * ur.trials_per_location + t);
            Engine pos_rng(ts);
            SystemGeometry geom;
            geom.source = ur.source;
            geom.relay = ur.relay;
            geom.users = draw_users(pos_rng, ur.region_center, ur.region_side, cfg.num_users);
            geom.users[0] = locs[li];
            FadingConfig fad{cfg.path_loss_exponent, cfg.sigma2, cfg.num_subcarriers, splitmix64(ts)};
            const ChannelRealization ch = generate_channel(geom, fad);
            std::size_t cnt = 0;
            for (std::size_t n = 0; n < ch.num_subcarriers; ++n) {
                std::span<const double> su(&ch.gain_su[n * ch.num_users], ch.num_users);
                std::span<const double> ru(&ch.gain_ru[n * ch.num_users], ch.num_users);
                const auto d = decide_subcarrier(ch.gain_sr[n], su, ru, cfg.sigma2,
                                                 PolicyKind::ALPHA, 0.0, ur.alpha);
                if (d.mode == Mode::RC && d.main_user == 0) ++cnt;
            }
            pct[t] = 100.0 * static_cast<double>(cnt) / static_cast<double>(ch.num_subcarriers);
        }
        const MeanStderr ms = mean_stderr(pct);
        res.points[li] = {locs[li], ms.mean, ms.stderr_};
    });
    return res;
}

}  // namespace secrelay
