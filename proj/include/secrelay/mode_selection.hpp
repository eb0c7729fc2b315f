#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "secrelay/allocation.hpp"
#include "secrelay/rate.hpp"

namespace secrelay {

/// Gains entering the RC-versus-DC comparison for one subcarrier: main user
/// m, its eavesdropper e in relayed mode and its eavesdropper in direct mode
/// (the strongest remaining source gain).
struct ModeGains {
    double gain_sr = 0.0;
    double gain_sm = 0.0;
    double gain_se = 0.0;     ///< source gain of the RC-mode eavesdropper
    double gain_se_dc = 0.0;  ///< source gain of the DC-mode eavesdropper
    double gain_rm = 0.0;
    double gain_re = 0.0;
};

enum class ModeClass { EXCLUSIVE_RC, RDC, EXCLUSIVE_DC };

namespace detail {

/// Denominator of the exact comparison threshold; <= 0 means direct mode
/// wins at this source power no matter the relay gains.
inline double rho_den(double p_source, const ModeGains& g, double sigma2) {
    const double A = sigma2 + p_source * g.gain_se_dc;
    const double B = sigma2 + p_source * g.gain_sm;
    return g.gain_sr * A * A - g.gain_se * B * B
         - sigma2 * (A + B) * (g.gain_sm - g.gain_se_dc);
}

inline std::optional<double> rho_value(double p_source, const ModeGains& g, double sigma2) {
    const double den = rho_den(p_source, g, sigma2);
    if (!(den > 0.0)) return std::nullopt;
    const double B = sigma2 + p_source * g.gain_sm;
    return (g.gain_sr - g.gain_sm) * B * B / den;
}

}  // namespace detail

/// Exact relay-gain-ratio threshold at a known source power; relayed mode
/// wins iff gain_rm/gain_re exceeds it. nullopt marks exclusive direct mode.
inline std::optional<double> rho(double p_source, const ModeGains& g, double sigma2) {
    if (!(g.gain_sm > g.gain_se_dc))
        throw std::domain_error("rho: main user must dominate the direct-mode eavesdropper");
    if (!(p_source > 0.0))
        throw std::domain_error("rho: source power must be > 0");
    return detail::rho_value(p_source, g, sigma2);
}

/// Power-free threshold at satisfaction level alpha (minimum acceptable
/// SNR); equals rho evaluated at the implied power sigma2*alpha/gain_sm.
inline std::optional<double> rho_alpha(double alpha, const ModeGains& g) {
    if (!(alpha >= 0.0))
        throw std::domain_error("rho_alpha: alpha must be >= 0");
    const double one_a = 1.0 + alpha;
    const double t = 1.0 + alpha * (g.gain_se_dc / g.gain_sm);
    const double num = (g.gain_sr - g.gain_sm) * (one_a * one_a);
    const double den = g.gain_sr * (t * t) - g.gain_se * (one_a * one_a)
                     - (g.gain_sm - g.gain_se_dc) * (one_a + t);
    if (!(den > 0.0)) return std::nullopt;
    return num / den;
}

/// Low-SNR limit of the threshold; the zero-satisfaction level.
inline std::optional<double> rho_low(const ModeGains& g) {
    return rho_alpha(0.0, g);
}

/// High-SNR limit of the threshold. nullopt means the limit is unbounded:
/// relayed mode cannot win exclusively however large the relay-gain ratio.
inline std::optional<double> rho_high(const ModeGains& g) {
    const double den = g.gain_sr * g.gain_se_dc * g.gain_se_dc
                     - g.gain_se * g.gain_sm * g.gain_sm;
    if (!(den > 0.0)) return std::nullopt;
    return (g.gain_sr - g.gain_sm) * g.gain_sm * g.gain_sm / den;
}

inline ModeClass classify(const ModeGains& g) {
    const double ratio = g.gain_rm / g.gain_re;
    const auto lo = rho_low(g);
    if (!lo || ratio < *lo) return ModeClass::EXCLUSIVE_DC;
    const auto hi = rho_high(g);
    if (hi && ratio > *hi) return ModeClass::EXCLUSIVE_RC;
    return ModeClass::RDC;
}

/// Difference of the two sides of the mode comparison at source power p,
/// with the relay running at the hop-balancing power p*Delta_m.
inline double mode_comparison_gap(double p, const ModeGains& g, double sigma2) {
    const double pr = p * (g.gain_sr - g.gain_sm) / g.gain_rm;
    const double lhs = 0.5 * std::log2((sigma2 + p * g.gain_sm + pr * g.gain_rm)
                                       / (sigma2 + p * g.gain_se + pr * g.gain_re));
    const double rhs = std::log2((sigma2 + p * g.gain_sm) / (sigma2 + p * g.gain_se_dc));
    return lhs - rhs;
}

struct PThreshold {
    std::optional<double> value;                        ///< clamped into (0, p_src_upper]
    double raw_root = std::numeric_limits<double>::quiet_NaN();
};

/// Source-power threshold separating the relayed and direct regions of a
/// mixed-mode subcarrier: the decreasing crossing of a quadratic. The closed
/// form is cross-checked by bisecting the mode comparison; a mismatch beyond
/// 1e-6 relative throws.
inline PThreshold p_threshold(const ModeGains& g, double sigma2) {
    const double s2 = sigma2;
    const double qa = g.gain_rm * (g.gain_sr * g.gain_se_dc * g.gain_se_dc
                                   - g.gain_se * g.gain_sm * g.gain_sm)
                    - g.gain_re * g.gain_sm * g.gain_sm * (g.gain_sr - g.gain_sm);
    const double qb = s2 * (g.gain_rm * (2.0 * g.gain_sr * g.gain_se_dc
                                         - 2.0 * g.gain_se * g.gain_sm
                                         - (g.gain_sm * g.gain_sm - g.gain_se_dc * g.gain_se_dc))
                            - 2.0 * g.gain_sm * g.gain_re * (g.gain_sr - g.gain_sm));
    const double qc = s2 * s2 * (g.gain_rm * (g.gain_sr - g.gain_se
                                              - 2.0 * (g.gain_sm - g.gain_se_dc))
                                 - g.gain_re * (g.gain_sr - g.gain_sm));

    // decreasing crossing of qa*P^2 + qb*P + qc (positive side = RC wins)
    double root = std::numeric_limits<double>::quiet_NaN();
    if (qa == 0.0) {
        if (qb < 0.0) root = -qc / qb;
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
            double r1 = q / qa;
            double r2 = (q != 0.0) ? qc / q : 0.0;
            if (r1 > r2) std::swap(r1, r2);
            if (qa < 0.0) {
                root = r2;                     // + -> - at the larger root
            } else {
                if (r1 > 0.0) root = r1;       // upward parabola: first dip
            }
        }
    }

    PThreshold out;
    out.raw_root = root;
    if (!std::isfinite(root) || !(root > 0.0)) return out;

    // bisection cross-check on the mode comparison around the root
    double lo = root * 0.5, hi = root * 1.5;
    double flo = mode_comparison_gap(lo, g, sigma2);
    double fhi = mode_comparison_gap(hi, g, sigma2);
    if (std::isfinite(flo) && std::isfinite(fhi) && flo > 0.0 && fhi < 0.0) {
        for (int i = 0; i < 200 && hi - lo > 1e-15 * root; ++i) {
            const double mid = 0.5 * (lo + hi);
            (mode_comparison_gap(mid, g, sigma2) > 0.0 ? lo : hi) = mid;
        }
        const double bis = 0.5 * (lo + hi);
        if (std::abs(bis - root) > 1e-6 * std::max(std::abs(root), 1e-300))
            throw std::logic_error("p_threshold: closed form and bisection disagree");
    }

    const double p_upper = (g.gain_sr - 2.0 * g.gain_sm) * sigma2 / (g.gain_sm * g.gain_sm);
    if (!(p_upper > 0.0)) return out;
    out.value = std::min(root, p_upper);
    return out;
}

/// Exact threshold, asymptotic bounds, source-power threshold and the relay
/// gain ratio for one subcarrier's comparison triple.
struct ModeThresholds {
    std::optional<double> rho;        ///< nullopt: direct mode wins outright
    std::optional<double> rho_low;
    std::optional<double> rho_high;   ///< nullopt: exclusive RC unreachable
    PThreshold p_th;
    double relay_gain_ratio = 0.0;
};

inline ModeThresholds mode_thresholds(double p_source, const ModeGains& g, double sigma2) {
    ModeThresholds t;
    t.rho = detail::rho_value(p_source, g, sigma2);
    t.rho_low = rho_low(g);
    t.rho_high = rho_high(g);
    t.p_th = p_threshold(g, sigma2);
    t.relay_gain_ratio = g.gain_rm / g.gain_re;
    return t;
}

struct ModeDecision {
    Mode mode = Mode::DC;
    double rate_rc = 0.0;
    double rate_dc = 0.0;
};

/// Direct comparison of the two candidate secure rates at a known source
/// power, relay at the hop-balancing power.
inline ModeDecision select_mode_optimal(double p_source, const ModeGains& g, double sigma2) {
    if (!(g.gain_sm > g.gain_se_dc))
        throw std::domain_error("select_mode_optimal: direct mode infeasible for the main user");
    const double pr = p_source * (g.gain_sr - g.gain_sm) / g.gain_rm;
    ModeDecision d;
    d.rate_rc = mrc_secure_rate({p_source, pr}, g.gain_sm, g.gain_rm, g.gain_se, g.gain_re, sigma2);
    d.rate_dc = std::log2((sigma2 + p_source * g.gain_sm) / (sigma2 + p_source * g.gain_se_dc));
    d.mode = d.rate_rc > d.rate_dc ? Mode::RC : Mode::DC;
    return d;
}

/// Power-free selection at satisfaction level alpha.
inline Mode select_mode_suboptimal(double alpha, const ModeGains& g) {
    const auto th = rho_alpha(alpha, g);
    if (!th) return Mode::DC;
    return (g.gain_rm / g.gain_re > *th) ? Mode::RC : Mode::DC;
}

/// Minimum acceptable SNR level; a power-free stand-in for the source
/// budget in the suboptimal policy.
struct SatisfactionPolicy {
    double alpha = 1.0;

    std::optional<double> threshold(const ModeGains& g) const { return rho_alpha(alpha, g); }
    Mode select(const ModeGains& g) const { return select_mode_suboptimal(alpha, g); }
    /// Source power meeting the satisfaction level for a given main-user gain.
    double implied_power(double gain_sm, double sigma2) const { return sigma2 * alpha / gain_sm; }
};

}  // namespace secrelay
