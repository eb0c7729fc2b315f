// secrelay - secure-rate computations and experiments for a DF-relay OFDMA
// downlink where every user is a potential eavesdropper.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secrelay/channel.hpp"
#include "secrelay/experiments.hpp"
#include "secrelay/io.hpp"
#include "secrelay/reports.hpp"

namespace {

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        secrelay::write_file_atomic(out_path, content);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace secrelay;

    CLI::App app{"secrelay: secure rates, subcarrier allocation and mode selection for a "
                 "DF-relay OFDMA downlink with untrusted users"};
    app.require_subcommand(1);

    std::string channel_path, out_path, config_path;
    double ps = 1.0, pr = 0.0;
    std::optional<double> opt_ps, opt_alpha;
    std::optional<std::uint64_t> opt_seed;
    std::optional<std::size_t> opt_n, opt_m, opt_trials;
    std::vector<double> opt_alpha_grid, opt_ps_grid;

    auto* rates = app.add_subcommand("rates", "per-user link, effective and secure rates");
    rates->add_option("--channel", channel_path, "channel realization JSON")->required();
    rates->add_option("--ps", ps, "source power per subcarrier")->check(CLI::NonNegativeNumber);
    rates->add_option("--pr", pr, "relay power per subcarrier")->check(CLI::NonNegativeNumber);
    rates->add_option("-o,--output", out_path, "output CSV (default: stdout)");

    auto* alloc = app.add_subcommand("allocate", "per-subcarrier mode, main user and eavesdropper");
    alloc->add_option("--channel", channel_path, "channel realization JSON")->required();
    alloc->add_option("--ps", ps, "source power per subcarrier")->check(CLI::NonNegativeNumber);
    alloc->add_option("--pr", pr, "relay power per subcarrier")->check(CLI::NonNegativeNumber);
    alloc->add_option("-o,--output", out_path, "output CSV (default: stdout)");

    auto* msel = app.add_subcommand("mode-select", "mode thresholds and the RC/DC decision");
    msel->add_option("--channel", channel_path, "channel realization JSON")->required();
    auto* msel_ps = msel->add_option("--ps", opt_ps, "known source power per subcarrier")
                        ->check(CLI::NonNegativeNumber);
    auto* msel_alpha = msel->add_option("--alpha", opt_alpha, "satisfaction level (power-free policy)")
                           ->check(CLI::NonNegativeNumber);
    msel_ps->excludes(msel_alpha);
    msel->add_option("-o,--output", out_path, "output CSV (default: stdout)");

    auto* exp = app.add_subcommand("experiment", "run a seeded Monte-Carlo experiment");
    exp->require_subcommand(1);
    auto* sweep = exp->add_subcommand("relay-sweep", "share of relayed subcarriers vs relay position");
    auto* gain = exp->add_subcommand("mode-gain", "secure-rate improvement of mode selection");
    auto* region = exp->add_subcommand("utility-region", "spatial map of relay benefit");
    for (auto* sc : {sweep, gain, region}) {
        sc->add_option("--config", config_path, "experiment config JSON");
        sc->add_option("--seed", opt_seed, "override master seed");
        sc->add_option("-N,--subcarriers", opt_n, "override subcarrier count");
        sc->add_option("-M,--users", opt_m, "override user count");
        sc->add_option("--trials", opt_trials, "override trial count");
        sc->add_option("-o,--output", out_path, "output CSV (default: <experiment>.csv)");
    }
    region->add_option("--alpha", opt_alpha, "override satisfaction level")
        ->check(CLI::NonNegativeNumber);
    sweep->add_option("--alpha-grid", opt_alpha_grid, "override alpha grid")->delimiter(',');
    gain->add_option("--ps-grid", opt_ps_grid, "override total source power grid")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (rates->parsed()) {
            emit(rates_csv(load_channel(channel_path), {ps, pr}), out_path);
            return 0;
        }
        if (alloc->parsed()) {
            emit(allocate_csv(load_channel(channel_path), {ps, pr}), out_path);
            return 0;
        }
        if (msel->parsed()) {
            if (!opt_ps && !opt_alpha) {
                std::cerr << "mode-select: one of --ps or --alpha is required\n";
                return 2;
            }
            emit(mode_select_csv(load_channel(channel_path), opt_ps, opt_alpha), out_path);
            return 0;
        }

        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_experiment_config(config_path);
        if (opt_seed) cfg.master_seed = *opt_seed;
        if (opt_n) cfg.num_subcarriers = *opt_n;
        if (opt_m) cfg.num_users = *opt_m;
        if (opt_trials) {
            cfg.relay_sweep.trials = *opt_trials;
            cfg.mode_gain.trials = *opt_trials;
            cfg.utility_region.trials_per_location = *opt_trials;
        }
        if (opt_alpha) cfg.utility_region.alpha = *opt_alpha;
        if (!opt_alpha_grid.empty()) cfg.relay_sweep.alpha_grid = opt_alpha_grid;
        if (!opt_ps_grid.empty()) cfg.mode_gain.ps_grid = opt_ps_grid;

        if (sweep->parsed()) {
            const RelaySweepResult r = run_relay_sweep(cfg);
            emit(relay_sweep_csv(r, cfg), out_path.empty() ? "relay_sweep.csv" : out_path);
        } else if (gain->parsed()) {
            const ModeGainResult r = run_mode_gain(cfg);
            emit(mode_gain_csv(r, cfg), out_path.empty() ? "mode_gain.csv" : out_path);
        } else if (region->parsed()) {
            const UtilityRegionResult r = run_utility_region(cfg);
            emit(utility_region_csv(r, cfg), out_path.empty() ? "utility_region.csv" : out_path);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "secrelay: " << e.what() << "\n";
        return 1;
    }
}
