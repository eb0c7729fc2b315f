#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "secrelay/rate.hpp"

namespace secrelay {

enum class Mode { DC, RC, IDLE };

enum class FeasibilityReason { OK, SR_GAIN_FAIL, RELAY_POWER_FAIL };

/// Relative tolerance applied where the relay-power window degenerates to a
/// point (Pr = Ps*Delta = max lower bound).
inline constexpr double kPowerTol = 1e-12;

struct AllocationResult {
    std::size_t main_user = 0;
    std::size_t eavesdropper = 0;
    Mode mode = Mode::DC;
    bool feasible = false;
};

inline void require_users(std::size_t m) {
    if (m < 2) throw std::invalid_argument("allocation: need at least 2 users");
}

/// Direct mode: serve the user with the strongest source gain; the
/// equivalent eavesdropper is the runner-up. Ties break to the lowest index
/// and make the subcarrier infeasible (zero secure rate).
inline AllocationResult allocate_dc(std::span<const double> gain_su) {
    require_users(gain_su.size());
    std::size_t best = 0;
    for (std::size_t o = 1; o < gain_su.size(); ++o)
        if (gain_su[o] > gain_su[best]) best = o;
    std::size_t second = best == 0 ? 1 : 0;
    for (std::size_t o = 0; o < gain_su.size(); ++o)
        if (o != best && gain_su[o] > gain_su[second]) second = o;
    AllocationResult res;
    res.main_user = best;
    res.eavesdropper = second;
    res.mode = Mode::DC;
    res.feasible = gain_su[best] > gain_su[second];
    return res;
}

inline double rsp_ratio_of(double gain_sr, double gain_su, double gain_ru) {
    return (gain_sr - gain_su) / gain_ru;
}

/// Relayed mode: serve the user with the smallest relay-versus-source power
/// ratio; the eavesdropper is the second smallest. Feasible only if the
/// smallest ratio is positive and strictly below the second.
inline AllocationResult allocate_rc(double gain_sr, std::span<const double> gain_su,
                                    std::span<const double> gain_ru) {
    require_users(gain_su.size());
    if (gain_ru.size() != gain_su.size())
        throw std::invalid_argument("allocation: gain array size mismatch");
    const std::size_t n = gain_su.size();
    std::vector<double> delta(n);
    for (std::size_t o = 0; o < n; ++o)
        delta[o] = rsp_ratio_of(gain_sr, gain_su[o], gain_ru[o]);
    std::size_t best = 0;
    for (std::size_t o = 1; o < n; ++o)
        if (delta[o] < delta[best]) best = o;
    std::size_t second = best == 0 ? 1 : 0;
    for (std::size_t o = 0; o < n; ++o)
        if (o != best && delta[o] < delta[second]) second = o;
    AllocationResult res;
    res.main_user = best;
    res.eavesdropper = second;
    res.mode = Mode::RC;
    res.feasible = delta[best] > 0.0 && delta[second] > delta[best];
    return res;
}

struct RcFeasibility {
    bool ok = false;
    FeasibilityReason reason = FeasibilityReason::OK;
};

/// Full relayed-mode feasibility at a given power pair: the source-relay
/// gain must dominate every user's direct branch, and the relay power must
/// sit between the largest per-user lower bound and Ps*Delta of the main
/// user picked by allocate_rc. The window endpoints may coincide.
inline RcFeasibility rc_feasible(double gain_sr, std::span<const double> gain_su,
                                 std::span<const double> gain_ru, const PowerPair& p,
                                 double sigma2) {
    require_users(gain_su.size());
    double max_gate = 0.0, max_lower = 0.0;
    for (std::size_t o = 0; o < gain_su.size(); ++o) {
        const ThresholdSet t = thresholds(p.p_source, {gain_su[o], gain_sr, gain_ru[o]}, sigma2);
        max_gate = std::max(max_gate, gain_su[o] * t.a);
        max_lower = std::max(max_lower, t.p_relay_lower);
    }
    if (!(gain_sr > max_gate)) return {false, FeasibilityReason::SR_GAIN_FAIL};
    const double lo_slack = kPowerTol * std::max(1.0, max_lower);
    if (!(p.p_relay > max_lower - lo_slack)) return {false, FeasibilityReason::RELAY_POWER_FAIL};
    const AllocationResult rc = allocate_rc(gain_sr, gain_su, gain_ru);
    const double pr_cap = p.p_source * rsp_ratio_of(gain_sr, gain_su[rc.main_user], gain_ru[rc.main_user]);
    const double hi_slack = kPowerTol * std::max(1.0, pr_cap);
    if (!(p.p_relay <= pr_cap + hi_slack)) return {false, FeasibilityReason::RELAY_POWER_FAIL};
    return {true, FeasibilityReason::OK};
}

/// Relayed-communication candidate restricted to users whose relay hop adds
/// value (positive RSP ratio). Users with a direct gain at or above the
/// source-relay gain cannot be served through the relay at all.
struct RcCandidate {
    std::size_t main_user = 0;
    std::size_t eavesdropper = 0;
    double delta_main = 0.0;
    double delta_eav = 0.0;
};

inline std::optional<RcCandidate> rc_candidate(double gain_sr, std::span<const double> gain_su,
                                               std::span<const double> gain_ru) {
    require_users(gain_su.size());
    const std::size_t n = gain_su.size();
    std::size_t best = n, second = n;
    double d_best = 0.0, d_second = 0.0;
    for (std::size_t o = 0; o < n; ++o) {
        const double d = rsp_ratio_of(gain_sr, gain_su[o], gain_ru[o]);
        if (!(d > 0.0)) continue;
        if (best == n || d < d_best) {
            second = best; d_second = d_best;
            best = o; d_best = d;
        } else if (second == n || d < d_second) {
            second = o; d_second = d;
        }
    }
    if (second == n) return std::nullopt;
    return RcCandidate{best, second, d_best, d_second};
}

/// Gate for serving one specific user through the relay: its own direct
/// branch must lose against the relayed one, with Pr inside the user's
/// admissible window.
inline bool rc_valid_for_main(double gain_sr, double gain_su_m, double gain_ru_m,
                              const PowerPair& p, double sigma2) {
    const ThresholdSet t = thresholds(p.p_source, {gain_su_m, gain_sr, gain_ru_m}, sigma2);
    if (!(gain_sr > gain_su_m * t.a)) return false;
    const double lo_slack = kPowerTol * std::max(1.0, t.p_relay_lower);
    if (!(p.p_relay > t.p_relay_lower - lo_slack)) return false;
    const double pr_cap = p.p_source * t.rsp_ratio;
    const double hi_slack = kPowerTol * std::max(1.0, pr_cap);
    return p.p_relay <= pr_cap + hi_slack;
}

}  // namespace secrelay
