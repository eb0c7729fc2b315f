#pragma once

#include <optional>
#include <span>
#include <sstream>
#include <string>

#include "secrelay/allocation.hpp"
#include "secrelay/channel.hpp"
#include "secrelay/io.hpp"
#include "secrelay/mode_selection.hpp"
#include "secrelay/policy.hpp"
#include "secrelay/rate.hpp"

namespace secrelay {

inline const char* branch_name(RateBranch b) {
    switch (b) {
        case RateBranch::SR_BOTTLENECK: return "sr";
        case RateBranch::MRC_BOTTLENECK: return "mrc";
        default: return "dc";
    }
}

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::RC: return "rc";
        case Mode::DC: return "dc";
        default: return "idle";
    }
}

inline const char* reason_name(FeasibilityReason r) {
    switch (r) {
        case FeasibilityReason::SR_GAIN_FAIL: return "sr_gain_fail";
        case FeasibilityReason::RELAY_POWER_FAIL: return "relay_power_fail";
        default: return "ok";
    }
}

inline const char* class_name(ModeClass c) {
    switch (c) {
        case ModeClass::EXCLUSIVE_RC: return "exclusive_rc";
        case ModeClass::EXCLUSIVE_DC: return "exclusive_dc";
        default: return "rdc";
    }
}

/// Per-(subcarrier, user) link rates, effective rate with its bottleneck,
/// thresholds and both candidate secure rates for the user as main.
inline std::string rates_csv(const ChannelRealization& ch, const PowerPair& p) {
    std::ostringstream os;
    os << "n,user,r_sm,r_sr,r_srm,eff_rate,branch,a,p_src_upper,p_relay_lower,rsp_ratio,"
          "secure_dc,secure_rc\n";
    std::vector<double> dc_rates(ch.num_users), rc_rates(ch.num_users);
    for (std::size_t n = 0; n < ch.num_subcarriers; ++n) {
        for (std::size_t m = 0; m < ch.num_users; ++m) {
            const UserLinkGains g{ch.su(n, m), ch.gain_sr[n], ch.ru(n, m)};
            dc_rates[m] = link_rates(p, g, ch.noise_power).r_sm;
            rc_rates[m] = rc_tapped_rate(p, g, ch.noise_power);
        }
        for (std::size_t m = 0; m < ch.num_users; ++m) {
            const UserLinkGains g{ch.su(n, m), ch.gain_sr[n], ch.ru(n, m)};
            const LinkRates r = link_rates(p, g, ch.noise_power);
            const EffectiveRate eff = effective_rate_cases(p, g, ch.noise_power);
            const ThresholdSet t = thresholds(p.p_source, g, ch.noise_power);
            os << n << "," << m << "," << fmt12(r.r_sm) << "," << fmt12(r.r_sr) << ","
               << fmt12(r.r_srm) << "," << fmt12(eff.rate) << "," << branch_name(eff.branch)
               << "," << fmt12(t.a) << "," << fmt12(t.p_src_upper) << ","
               << fmt12(t.p_relay_lower) << "," << fmt12(t.rsp_ratio) << ","
               << fmt12(secure_rate(dc_rates, m)) << "," << fmt12(secure_rate(rc_rates, m))
               << "\n";
        }
    }
    return os.str();
}

/// Per-subcarrier mode, served user, equivalent eavesdropper and the
/// relayed-mode feasibility verdict at the given powers.
inline std::string allocate_csv(const ChannelRealization& ch, const PowerPair& p) {
    std::ostringstream os;
    os << "n,mode,main,eav,feasible,reason\n";
    for (std::size_t n = 0; n < ch.num_subcarriers; ++n) {
        std::span<const double> su(&ch.gain_su[n * ch.num_users], ch.num_users);
        std::span<const double> ru(&ch.gain_ru[n * ch.num_users], ch.num_users);
        const AllocationResult dc = allocate_dc(su);
        const AllocationResult rc = allocate_rc(ch.gain_sr[n], su, ru);
        const RcFeasibility rcf = rc_feasible(ch.gain_sr[n], su, ru, p, ch.noise_power);
        double rate_rc = 0.0;
        if (rcf.ok && rc.feasible)
            rate_rc = mrc_secure_rate(p, su[rc.main_user], ru[rc.main_user],
                                      su[rc.eavesdropper], ru[rc.eavesdropper], ch.noise_power);
        double rate_dc = 0.0;
        if (dc.feasible)
            rate_dc = std::log2((ch.noise_power + p.p_source * su[dc.main_user])
                                / (ch.noise_power + p.p_source * su[dc.eavesdropper]));
        if (rate_rc > 0.0 && rate_rc > rate_dc)
            os << n << ",rc," << rc.main_user << "," << rc.eavesdropper << ",1,"
               << reason_name(rcf.reason) << "\n";
        else if (dc.feasible)
            os << n << ",dc," << dc.main_user << "," << dc.eavesdropper << ",1,"
               << reason_name(rcf.reason) << "\n";
        else
            os << n << ",idle,-1,-1,0," << reason_name(rcf.reason) << "\n";
    }
    return os.str();
}

/// Per-subcarrier thresholds, band classification and the decided mode;
/// exactly one of ps / alpha drives the decision. Unreachable thresholds
/// print as inf, an absent source-power threshold prints empty.
inline std::string mode_select_csv(const ChannelRealization& ch, std::optional<double> ps,
                                   std::optional<double> alpha) {
    const auto opt12 = [](const std::optional<double>& v, const char* missing = "inf") {
        return v ? fmt12(*v) : std::string(missing);
    };
    std::ostringstream os;
    os << "n,class,rho_l,rho,rho_h,p_th,mode,rate_rc,rate_dc\n";
    for (std::size_t n = 0; n < ch.num_subcarriers; ++n) {
        std::span<const double> su(&ch.gain_su[n * ch.num_users], ch.num_users);
        std::span<const double> ru(&ch.gain_ru[n * ch.num_users], ch.num_users);
        const SubcarrierDecision d =
            ps ? decide_subcarrier(ch.gain_sr[n], su, ru, ch.noise_power, PolicyKind::OPTIMAL, *ps)
               : decide_subcarrier(ch.gain_sr[n], su, ru, ch.noise_power, PolicyKind::ALPHA, 0.0,
                                   *alpha);
        os << n << ",";
        if (d.rc) {
            const ModeGains g = mode_gains_for(ch.gain_sr[n], su, ru, *d.rc);
            const ModeThresholds t = mode_thresholds(d.p_source, g, ch.noise_power);
            const std::optional<double> r = ps ? t.rho : rho_alpha(*alpha, g);
            os << class_name(classify(g)) << "," << opt12(t.rho_low) << "," << opt12(r) << ","
               << opt12(t.rho_high) << "," << opt12(t.p_th.value, "");
        } else {
            os << "exclusive_dc,inf,inf,inf,";
        }
        os << "," << mode_name(d.mode) << "," << fmt12(d.rate_rc) << "," << fmt12(d.rate_dc)
           << "\n";
    }
    return os.str();
}

}  // namespace secrelay
