#include <catch_amalgamated.hpp>

#include <vector>

#include "secrelay/allocation.hpp"
#include "secrelay/policy.hpp"
#include "test_support.hpp"

using namespace secrelay;
using namespace secrelay::testing;

TEST_CASE("direct-mode allocation picks the top source gains") {
    const std::vector<double> canonical{1.0, 0.5};
    const AllocationResult a = allocate_dc(canonical);
    CHECK(a.main_user == 0);
    CHECK(a.eavesdropper == 1);
    CHECK(a.feasible);

    const std::vector<double> tie{0.7, 0.7};
    const AllocationResult b = allocate_dc(tie);
    CHECK(b.main_user == 0);
    CHECK(b.eavesdropper == 1);
    CHECK_FALSE(b.feasible);

    const std::vector<double> three{0.2, 0.9, 0.5};
    const AllocationResult c = allocate_dc(three);
    CHECK(c.main_user == 1);
    CHECK(c.eavesdropper == 2);

    CHECK_THROWS_AS(allocate_dc(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("relayed-mode allocation picks the two smallest power ratios") {
    const std::vector<double> su{kSu[0], kSu[1]}, ru{kRu[0], kRu[1]};
    const AllocationResult a = allocate_rc(kSr, su, ru);
    CHECK(a.main_user == 0);   // ratios (1.5, 7)
    CHECK(a.eavesdropper == 1);
    CHECK(a.feasible);

    // equal ratios tie-break to the lowest index and carry no secure rate
    const std::vector<double> su3{1.0, 1.0, 0.5}, ru3{2.0, 2.0, 0.5};
    const AllocationResult b = allocate_rc(4.0, su3, ru3);
    CHECK(b.main_user == 0);
    CHECK(b.eavesdropper == 1);
    CHECK_FALSE(b.feasible);
}

TEST_CASE("common relay-gain scaling leaves the allocation unchanged") {
    Engine rng(3);
    for (int i = 0; i < 500; ++i) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 4);
        std::vector<double> su(m, 0.4), ru(m);
        for (auto& g : ru) g = unit_exponential(rng);
        const double gsr = 2.0 + unit_exponential(rng);
        const AllocationResult a = allocate_rc(gsr, su, ru);
        std::vector<double> ru_scaled = ru;
        const double k = 0.1 + 5.0 * uniform_open01(rng);
        for (auto& g : ru_scaled) g *= k;
        const AllocationResult b = allocate_rc(gsr, su, ru_scaled);
        CHECK(a.main_user == b.main_user);
        CHECK(a.eavesdropper == b.eavesdropper);
    }
}

TEST_CASE("relayed-mode feasibility on the canonical channel") {
    const std::vector<double> su{kSu[0], kSu[1]}, ru{kRu[0], kRu[1]};
    // Pr = 1.5 sits exactly on both window endpoints: max lower bound 1.5,
    // Ps*Delta of the main user 1.5
    const RcFeasibility ok = rc_feasible(kSr, su, ru, {1.0, 1.5}, 1.0);
    CHECK(ok.ok);
    CHECK(ok.reason == FeasibilityReason::OK);

    const RcFeasibility low = rc_feasible(kSr, su, ru, {1.0, 0.5}, 1.0);
    CHECK_FALSE(low.ok);
    CHECK(low.reason == FeasibilityReason::RELAY_POWER_FAIL);

    const RcFeasibility high = rc_feasible(kSr, su, ru, {1.0, 2.5}, 1.0);
    CHECK_FALSE(high.ok);
    CHECK(high.reason == FeasibilityReason::RELAY_POWER_FAIL);

    // gain gate: a_1 = 3 so user 1 needs gain_sr > 3
    const std::vector<double> su2{1.0, 0.1}, ru2{1.0, 1.0};
    const RcFeasibility gate = rc_feasible(2.9, su2, ru2, {1.0, 1.0}, 1.0);
    CHECK_FALSE(gate.ok);
    CHECK(gate.reason == FeasibilityReason::SR_GAIN_FAIL);
}

TEST_CASE("feasible allocations always earn a positive relayed secure rate") {
    Engine rng(29);
    int feasible = 0;
    for (int i = 0; i < 10000 || feasible < 300; ++i) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 3);
        const RandomSubcarrier c = random_subcarrier(rng, m, 6.0);
        const double ps = 0.05 + 1.5 * uniform_open01(rng);
        const AllocationResult rc = allocate_rc(c.gain_sr, c.su, c.ru);
        const double pr = ps * rsp_ratio_of(c.gain_sr, c.su[rc.main_user], c.ru[rc.main_user]);
        if (pr <= 0.0) continue;
        const RcFeasibility f = rc_feasible(c.gain_sr, c.su, c.ru, {ps, pr}, 1.0);
        if (!f.ok || !rc.feasible) continue;
        ++feasible;
        const double rate = mrc_secure_rate({ps, pr}, c.su[rc.main_user], c.ru[rc.main_user],
                                            c.su[rc.eavesdropper], c.ru[rc.eavesdropper], 1.0);
        REQUIRE(rate > 0.0);
        if (i > 200000) break;
    }
    CHECK(feasible >= 300);
}

TEST_CASE("minimum-ratio main user is never beaten by another choice") {
    Engine rng(31);
    int checked = 0;
    while (checked < 2000) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 3);
        const RandomSubcarrier c = random_subcarrier(rng, m, 8.0);
        const double ps = 0.05 + 0.75 * uniform_open01(rng);
        const auto cand = rc_candidate(c.gain_sr, c.su, c.ru);
        if (!cand) continue;
        const double pr = ps * cand->delta_main;
        if (!rc_feasible(c.gain_sr, c.su, c.ru, {ps, pr}, 1.0).ok) continue;
        ++checked;
        const double best = rc_achieved_rate(c.gain_sr, c.su, c.ru, cand->main_user, {ps, pr}, 1.0);
        REQUIRE(best > 0.0);
        for (std::size_t alt = 0; alt < m; ++alt) {
            if (alt == cand->main_user) continue;
            const double d = rsp_ratio_of(c.gain_sr, c.su[alt], c.ru[alt]);
            if (!(d > 0.0)) continue;
            const double r = rc_achieved_rate(c.gain_sr, c.su, c.ru, alt, {ps, ps * d}, 1.0);
            REQUIRE(r <= best + 1e-12);
        }
    }
}

TEST_CASE("relayed main user need not dominate its eavesdropper's source gain") {
    // The feasibility conditions do not order the source gains of the main
    // user and its eavesdropper; both orderings occur, and the secure rate
    // stays positive either way.
    Engine rng(37);
    int feasible = 0, weaker_source = 0;
    for (int i = 0; i < 400000 && feasible < 400; ++i) {
        const RandomSubcarrier c = random_subcarrier(rng, 4, 6.0);
        const double ps = 0.05 + uniform_open01(rng);
        const AllocationResult rc = allocate_rc(c.gain_sr, c.su, c.ru);
        const double pr = ps * rsp_ratio_of(c.gain_sr, c.su[rc.main_user], c.ru[rc.main_user]);
        if (pr <= 0.0) continue;
        if (!rc_feasible(c.gain_sr, c.su, c.ru, {ps, pr}, 1.0).ok) continue;
        ++feasible;
        if (c.su[rc.main_user] <= c.su[rc.eavesdropper]) {
            ++weaker_source;
            CHECK(mrc_secure_rate({ps, pr}, c.su[rc.main_user], c.ru[rc.main_user],
                                  c.su[rc.eavesdropper], c.ru[rc.eavesdropper], 1.0) > 0.0);
        }
    }
    CHECK(feasible >= 400);
    CHECK(weaker_source > 0);
}

TEST_CASE("direct-mode eavesdropper is at least as strong as the relayed one") {
    Engine rng(41);
    int same_main = 0;
    for (int i = 0; i < 50000 && same_main < 1000; ++i) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 4);
        const RandomSubcarrier c = random_subcarrier(rng, m, 4.0);
        const AllocationResult dc = allocate_dc(c.su);
        const AllocationResult rc = allocate_rc(c.gain_sr, c.su, c.ru);
        if (dc.main_user != rc.main_user) continue;
        ++same_main;
        CHECK(c.su[dc.eavesdropper] >= c.su[rc.eavesdropper]);
    }
    CHECK(same_main >= 1000);
}

TEST_CASE("candidate search skips users the relay cannot serve") {
    // user 1's direct gain exceeds the source-relay gain
    const std::vector<double> su{0.5, 5.0, 0.8}, ru{1.0, 2.0, 1.0};
    const auto cand = rc_candidate(3.0, su, ru);
    REQUIRE(cand.has_value());
    CHECK(cand->main_user == 2);   // ratios: 2.5, negative, 2.2
    CHECK(cand->eavesdropper == 0);

    // fewer than two servable users: no candidate
    const std::vector<double> su2{4.0, 5.0}, ru2{1.0, 1.0};
    CHECK_FALSE(rc_candidate(3.0, su2, ru2).has_value());
}
