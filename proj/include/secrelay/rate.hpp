#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace secrelay {

struct PowerPair {
    double p_source = 0.0;
    double p_relay = 0.0;
};

/// Gains seen by one user on one subcarrier.
struct UserLinkGains {
    double gain_su = 0.0;   ///< source-user
    double gain_sr = 0.0;   ///< source-relay
    double gain_ru = 0.0;   ///< relay-user
};

/// Rates in bit/s/Hz of the direct, relay-decode and combined links.
struct LinkRates {
    double r_sm = 0.0;   ///< direct source-user
    double r_sr = 0.0;   ///< source-relay (decode constraint)
    double r_srm = 0.0;  ///< MRC of direct and relayed copies
};

/// Per-user derived quantities controlling when relayed transmission is
/// usable and how much relay power balances the two hops.
struct ThresholdSet {
    double a = 2.0;              ///< 2 + Ps*gain_su/sigma2
    double p_src_upper = 0.0;    ///< largest Ps keeping the relay branch alive; negative = none
    double p_relay_lower = 0.0;  ///< smallest Pr making MRC beat the doubled direct rate
    double rsp_ratio = 0.0;      ///< relay-versus-source power ratio equalizing the hops
};

enum class RateBranch { SR_BOTTLENECK, MRC_BOTTLENECK, DC };

inline void check_rate_inputs(const UserLinkGains& g, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::domain_error("rates: sigma2 must be > 0");
    if (!(g.gain_su > 0.0 && g.gain_sr > 0.0 && g.gain_ru > 0.0))
        throw std::domain_error("rates: gains must be > 0");
}

inline void check_powers(const PowerPair& p) {
    if (!(p.p_source >= 0.0 && p.p_relay >= 0.0))
        throw std::domain_error("rates: powers must be >= 0");
}

inline LinkRates link_rates(const PowerPair& p, const UserLinkGains& g, double sigma2) {
    check_rate_inputs(g, sigma2);
    check_powers(p);
    LinkRates r;
    r.r_sm = std::log2(1.0 + p.p_source * g.gain_su / sigma2);
    r.r_sr = std::log2(1.0 + p.p_source * g.gain_sr / sigma2);
    r.r_srm = std::log2(1.0 + (p.p_source * g.gain_su + p.p_relay * g.gain_ru) / sigma2);
    return r;
}

/// Effective rate (1/2)*max{2*r_sm, min{r_sr, r_srm}}: best of a full-slot
/// direct transmission and a two-slot relayed one.
inline double effective_rate_maxmin(const PowerPair& p, const UserLinkGains& g, double sigma2) {
    const LinkRates r = link_rates(p, g, sigma2);
    return 0.5 * std::max(2.0 * r.r_sm, std::min(r.r_sr, r.r_srm));
}

inline ThresholdSet thresholds(double p_source, const UserLinkGains& g, double sigma2) {
    check_rate_inputs(g, sigma2);
    if (!(p_source >= 0.0)) throw std::domain_error("rates: powers must be >= 0");
    ThresholdSet t;
    t.a = 2.0 + p_source * g.gain_su / sigma2;
    t.p_src_upper = (g.gain_sr - 2.0 * g.gain_su) * sigma2 / (g.gain_su * g.gain_su);
    t.p_relay_lower = p_source * (g.gain_su / g.gain_ru) * (1.0 + p_source * g.gain_su / sigma2);
    t.rsp_ratio = (g.gain_sr - g.gain_su) / g.gain_ru;
    return t;
}

struct EffectiveRate {
    double rate = 0.0;
    RateBranch branch = RateBranch::DC;
};

/// Case-analysis form of the effective rate. Equal to effective_rate_maxmin
/// everywhere; additionally reports which link is the bottleneck. Pr = 0 is
/// the direct branch by definition (nothing is forwarded), and a tie
/// r_sr = r_srm is tagged SR_BOTTLENECK.
inline EffectiveRate effective_rate_cases(const PowerPair& p, const UserLinkGains& g, double sigma2) {
    const LinkRates r = link_rates(p, g, sigma2);
    if (p.p_relay <= 0.0)
        return {r.r_sm, RateBranch::DC};
    const ThresholdSet t = thresholds(p.p_source, g, sigma2);
    const double pr_equal = p.p_source * t.rsp_ratio;
    if (g.gain_sr >= g.gain_su * t.a) {
        if (p.p_relay >= std::max(t.p_relay_lower, pr_equal))
            return {0.5 * r.r_sr, RateBranch::SR_BOTTLENECK};
        if (p.p_relay >= t.p_relay_lower)
            return {0.5 * r.r_srm, RateBranch::MRC_BOTTLENECK};
    }
    return {r.r_sm, RateBranch::DC};
}

/// [rate of the main user - best rate among the others]^+ over one
/// subcarrier; all rates must come from one power pair and mode assignment.
inline double secure_rate(const std::vector<double>& user_rates, std::size_t main_user) {
    if (user_rates.size() < 2)
        throw std::invalid_argument("secure_rate: need at least 2 users");
    if (main_user >= user_rates.size())
        throw std::invalid_argument("secure_rate: main user out of range");
    double best_other = -1.0;
    for (std::size_t o = 0; o < user_rates.size(); ++o)
        if (o != main_user) best_other = std::max(best_other, user_rates[o]);
    return std::max(0.0, user_rates[main_user] - best_other);
}

/// Relayed-mode secure rate when both main user and eavesdropper combine the
/// two slots: (1/2)*log2 of the MRC SNR ratio.
inline double mrc_secure_rate(const PowerPair& p, double gain_sm, double gain_rm,
                              double gain_se, double gain_re, double sigma2) {
    const double num = sigma2 + p.p_source * gain_sm + p.p_relay * gain_rm;
    const double den = sigma2 + p.p_source * gain_se + p.p_relay * gain_re;
    return 0.5 * std::log2(num / den);
}

/// Rate a user can tap on a relayed subcarrier: half of min(decode
/// constraint, own MRC rate). Used for mode-consistent secure rates.
inline double rc_tapped_rate(const PowerPair& p, const UserLinkGains& g, double sigma2) {
    const LinkRates r = link_rates(p, g, sigma2);
    return 0.5 * std::min(r.r_sr, r.r_srm);
}

}  // namespace secrelay
