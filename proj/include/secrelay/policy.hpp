#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "secrelay/allocation.hpp"
#include "secrelay/mode_selection.hpp"
#include "secrelay/rate.hpp"

namespace secrelay {

enum class PolicyKind { OPTIMAL, LOW_SNR, HIGH_SNR, ALPHA };

inline constexpr std::size_t kNoUser = std::numeric_limits<std::size_t>::max();

/// Outcome of the per-subcarrier mode decision.
struct SubcarrierDecision {
    Mode mode = Mode::IDLE;
    std::size_t main_user = kNoUser;
    std::size_t eavesdropper = kNoUser;
    double secure_rate = 0.0;   ///< achieved by the chosen mode
    double rate_rc = 0.0;       ///< relayed candidate, 0 when invalid
    double rate_dc = 0.0;       ///< direct candidate, 0 when infeasible
    bool rc_valid = false;
    std::optional<RcCandidate> rc;
    AllocationResult dc;
    double p_source = 0.0;      ///< power the candidates were evaluated at
};

inline double strongest_other_gain(std::span<const double> gain_su, std::size_t m) {
    double best = 0.0;
    for (std::size_t o = 0; o < gain_su.size(); ++o)
        if (o != m && gain_su[o] > best) best = gain_su[o];
    return best;
}

inline ModeGains mode_gains_for(double gain_sr, std::span<const double> gain_su,
                                std::span<const double> gain_ru, const RcCandidate& rc) {
    ModeGains g;
    g.gain_sr = gain_sr;
    g.gain_sm = gain_su[rc.main_user];
    g.gain_se = gain_su[rc.eavesdropper];
    g.gain_se_dc = strongest_other_gain(gain_su, rc.main_user);
    g.gain_rm = gain_ru[rc.main_user];
    g.gain_re = gain_ru[rc.eavesdropper];
    return g;
}

/// Secure rate the RC candidate actually achieves: every user taps both
/// slots, so the penalty is the best tapped rate among the others.
inline double rc_achieved_rate(double gain_sr, std::span<const double> gain_su,
                               std::span<const double> gain_ru, std::size_t main,
                               const PowerPair& p, double sigma2) {
    std::vector<double> rates(gain_su.size());
    for (std::size_t o = 0; o < gain_su.size(); ++o)
        rates[o] = rc_tapped_rate(p, {gain_su[o], gain_sr, gain_ru[o]}, sigma2);
    return secure_rate(rates, main);
}

inline double dc_achieved_rate(std::span<const double> gain_su, const AllocationResult& dc,
                               double p_source, double sigma2) {
    if (!dc.feasible) return 0.0;
    const double num = sigma2 + p_source * gain_su[dc.main_user];
    const double den = sigma2 + p_source * gain_su[dc.eavesdropper];
    return std::max(0.0, std::log2(num / den));
}

/// Mode decision for one subcarrier. OPTIMAL compares the achieved secure
/// rates of the two candidates; the threshold policies compare the relay
/// gain ratio of the RC candidate against rho_low / rho_high / rho_alpha.
/// ALPHA derives the source power from the satisfaction level.
inline SubcarrierDecision decide_subcarrier(double gain_sr, std::span<const double> gain_su,
                                            std::span<const double> gain_ru, double sigma2,
                                            PolicyKind kind, double p_source, double alpha = 0.0) {
    SubcarrierDecision d;
    d.dc = allocate_dc(gain_su);
    d.rc = rc_candidate(gain_sr, gain_su, gain_ru);

    if (kind == PolicyKind::ALPHA)
        p_source = d.rc ? sigma2 * alpha / gain_su[d.rc->main_user] : 0.0;
    d.p_source = p_source;

    PowerPair power{p_source, 0.0};
    if (d.rc && p_source > 0.0) {
        power.p_relay = p_source * d.rc->delta_main;
        d.rc_valid = rc_valid_for_main(gain_sr, gain_su[d.rc->main_user],
                                       gain_ru[d.rc->main_user], power, sigma2);
        if (d.rc_valid)
            d.rate_rc = rc_achieved_rate(gain_sr, gain_su, gain_ru, d.rc->main_user, power, sigma2);
    }
    d.rate_dc = dc_achieved_rate(gain_su, d.dc, p_source, sigma2);

    bool pick_rc = false;
    if (d.rc_valid) {
        if (kind == PolicyKind::OPTIMAL) {
            pick_rc = d.rate_rc > d.rate_dc;
        } else {
            const ModeGains g = mode_gains_for(gain_sr, gain_su, gain_ru, *d.rc);
            std::optional<double> th;
            switch (kind) {
                case PolicyKind::LOW_SNR:  th = rho_low(g); break;
                case PolicyKind::HIGH_SNR: th = rho_high(g); break;
                default:                   th = rho_alpha(alpha, g); break;
            }
            pick_rc = th && g.gain_rm / g.gain_re > *th;
        }
    }

    if (pick_rc) {
        d.mode = Mode::RC;
        d.main_user = d.rc->main_user;
        d.eavesdropper = d.rc->eavesdropper;
        d.secure_rate = d.rate_rc;
    } else if (d.dc.feasible) {
        d.mode = Mode::DC;
        d.main_user = d.dc.main_user;
        d.eavesdropper = d.dc.eavesdropper;
        d.secure_rate = d.rate_dc;
    } else {
        d.mode = Mode::IDLE;
    }
    return d;
}

}  // namespace secrelay
