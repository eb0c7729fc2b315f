#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "secrelay/geometry.hpp"
#include "secrelay/rng.hpp"

namespace secrelay {

struct FadingConfig {
    double path_loss_exponent = 3.0;
    double noise_power = 1.0;          ///< sigma^2, linear
    std::size_t num_subcarriers = 64;
    std::uint64_t seed = 0;
};

inline void validate(const FadingConfig& c) {
    if (!(c.path_loss_exponent >= 0.0))
        throw std::invalid_argument("fading: path_loss_exponent must be >= 0");
    if (!(c.noise_power > 0.0))
        throw std::invalid_argument("fading: noise_power must be > 0");
    if (c.num_subcarriers < 1)
        throw std::invalid_argument("fading: need at least 1 subcarrier");
}

/// Mean power gain of a link at the given distance, d^-eta with unit
/// reference distance.
inline double path_gain(double dist, double eta) {
    if (!(dist > 0.0))
        throw std::domain_error("path_gain: distance must be > 0");
    return std::pow(dist, -eta);
}

/// Per-subcarrier power gains of every link plus the noise power.
/// gain_su / gain_ru are row-major N x M.
struct ChannelRealization {
    std::size_t num_subcarriers = 0;   ///< N
    std::size_t num_users = 0;         ///< M
    double noise_power = 1.0;
    std::vector<double> gain_sr;       ///< source-relay, size N
    std::vector<double> gain_su;       ///< source-user, size N*M
    std::vector<double> gain_ru;       ///< relay-user, size N*M

    double su(std::size_t n, std::size_t m) const { return gain_su[n * num_users + m]; }
    double ru(std::size_t n, std::size_t m) const { return gain_ru[n * num_users + m]; }
};

inline void validate(const ChannelRealization& ch) {
    const std::size_t n = ch.num_subcarriers, m = ch.num_users;
    if (m < 2) throw std::invalid_argument("channel: need at least 2 users");
    if (n < 1) throw std::invalid_argument("channel: need at least 1 subcarrier");
    if (!(ch.noise_power > 0.0)) throw std::invalid_argument("channel: noise_power must be > 0");
    if (ch.gain_sr.size() != n || ch.gain_su.size() != n * m || ch.gain_ru.size() != n * m)
        throw std::invalid_argument("channel: gain array sizes inconsistent with N, M");
    const auto check = [](double g) {
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("channel: gains must be positive and finite");
    };
    for (double g : ch.gain_sr) check(g);
    for (double g : ch.gain_su) check(g);
    for (double g : ch.gain_ru) check(g);
}

/// Quasi-static Rayleigh fading: every power gain is an independent unit-mean
/// exponential draw scaled by the link's path gain. Pure function of
/// (geometry, config); the draw order is gain_sr[0..N), then gain_su
/// row-major, then gain_ru row-major.
inline ChannelRealization generate_channel(const SystemGeometry& geom, const FadingConfig& cfg) {
    validate(geom);
    validate(cfg);
    const std::size_t n_sub = cfg.num_subcarriers;
    const std::size_t n_usr = geom.users.size();
    const double eta = cfg.path_loss_exponent;

    ChannelRealization ch;
    ch.num_subcarriers = n_sub;
    ch.num_users = n_usr;
    ch.noise_power = cfg.noise_power;
    ch.gain_sr.resize(n_sub);
    ch.gain_su.resize(n_sub * n_usr);
    ch.gain_ru.resize(n_sub * n_usr);

    const double pg_sr = path_gain(distance(geom.source, geom.relay), eta);
    std::vector<double> pg_su(n_usr), pg_ru(n_usr);
    for (std::size_t m = 0; m < n_usr; ++m) {
        pg_su[m] = path_gain(distance(geom.source, geom.users[m]), eta);
        pg_ru[m] = path_gain(distance(geom.relay, geom.users[m]), eta);
    }

    Engine rng(cfg.seed);
    for (std::size_t n = 0; n < n_sub; ++n)
        ch.gain_sr[n] = unit_exponential(rng) * pg_sr;
    for (std::size_t n = 0; n < n_sub; ++n)
        for (std::size_t m = 0; m < n_usr; ++m)
            ch.gain_su[n * n_usr + m] = unit_exponential(rng) * pg_su[m];
    for (std::size_t n = 0; n < n_sub; ++n)
        for (std::size_t m = 0; m < n_usr; ++m)
            ch.gain_ru[n * n_usr + m] = unit_exponential(rng) * pg_ru[m];
    return ch;
}

}  // namespace secrelay
