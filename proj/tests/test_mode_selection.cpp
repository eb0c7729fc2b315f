#include <catch_amalgamated.hpp>

#include <cmath>

#include "secrelay/mode_selection.hpp"
#include "test_support.hpp"

using namespace secrelay;
using namespace secrelay::testing;

TEST_CASE("exact threshold on the canonical channel") {
    const ModeGains g = canonical_mode_gains();
    const auto r = rho(1.0, g, 1.0);
    REQUIRE(r.has_value());
    CHECK(*r == Catch::Approx(12.0 / 5.25).margin(1e-12));
    CHECK(detail::rho_den(1.0, g, 1.0) == Catch::Approx(5.25).margin(1e-12));

    // equal source-relay and direct gains zero the numerator; the
    // eavesdroppers must stay weak enough to keep the denominator positive
    const ModeGains flat{1.0, 1.0, 0.1, 0.9, 2.0, 1.0};
    const auto rf = rho(1.0, flat, 1.0);
    REQUIRE(rf.has_value());
    CHECK(*rf == 0.0);

    CHECK_THROWS_AS(rho(0.0, g, 1.0), std::domain_error);
    ModeGains bad = g;
    bad.gain_se_dc = bad.gain_sm;
    CHECK_THROWS_AS(rho(1.0, bad, 1.0), std::domain_error);
}

TEST_CASE("negative threshold denominator forces direct mode") {
    // search for an instance with rho_den <= 0 and confirm direct mode
    // dominates the comparison there
    Engine rng(5);
    int found = 0;
    for (int i = 0; i < 500000 && found < 5; ++i) {
        ModeGains g;
        g.gain_sr = 4.0 * unit_exponential(rng);
        g.gain_sm = unit_exponential(rng);
        g.gain_se = unit_exponential(rng);
        g.gain_se_dc = g.gain_sm * (0.2 + 0.79 * uniform_open01(rng));
        g.gain_rm = unit_exponential(rng);
        g.gain_re = unit_exponential(rng);
        if (!(g.gain_sr > g.gain_sm)) continue;
        const double ps = 5.0 * uniform_open01(rng);
        if (!(ps > 0.0) || detail::rho_den(ps, g, 1.0) > 0.0) continue;
        ++found;
        CHECK_FALSE(rho(ps, g, 1.0).has_value());
        CHECK(mode_comparison_gap(ps, g, 1.0) <= 0.0);
    }
    CHECK(found == 5);
}

TEST_CASE("low-SNR threshold") {
    const ModeGains g = canonical_mode_gains();
    CHECK(*rho_low(g) == Catch::Approx(1.2).margin(1e-14));

    ModeGains eq = g;
    eq.gain_se_dc = eq.gain_sm;   // cancellation: (gsr-gsm)/(gsr-gse)
    CHECK(*rho_low(eq) ==
          Catch::Approx((eq.gain_sr - eq.gain_sm) / (eq.gain_sr - eq.gain_se)).margin(1e-14));

    const ModeGains flat{1.0, 1.0, 0.1, 0.9, 2.0, 1.0};   // zero numerator, positive denominator
    const auto rf = rho_low(flat);
    REQUIRE(rf.has_value());
    CHECK(*rf == 0.0);

    ModeGains neg = g;   // denominator 4 - 2*(3-0.5) - 0.5 < 0
    neg.gain_sm = 3.0;
    CHECK_FALSE(rho_low(neg).has_value());
}

TEST_CASE("high-SNR threshold") {
    const ModeGains g = canonical_mode_gains();
    CHECK(*rho_high(g) == Catch::Approx(6.0).margin(1e-13));

    const ModeGains flat{1.0, 1.0, 0.1, 0.9, 2.0, 1.0};   // zero numerator, positive denominator
    const auto rf = rho_high(flat);
    REQUIRE(rf.has_value());
    CHECK(*rf == 0.0);

    // nonpositive denominator: exclusive relayed mode is unreachable
    ModeGains unr;
    unr.gain_sr = 3.0;
    unr.gain_sm = 2.0;
    unr.gain_se = 1.0;
    unr.gain_se_dc = 0.5;
    unr.gain_rm = 1.0;
    unr.gain_re = 1.0;
    CHECK_FALSE(rho_high(unr).has_value());
}

TEST_CASE("satisfaction-level threshold and its limits") {
    const ModeGains g = canonical_mode_gains();
    const auto r0 = rho_alpha(0.0, g);
    REQUIRE(r0.has_value());
    CHECK(*r0 == *rho_low(g));   // exact: same expression at alpha = 0

    const auto r1 = rho_alpha(1.0, g);
    REQUIRE(r1.has_value());
    CHECK(*r1 == Catch::Approx(12.0 / 5.25).margin(1e-12));
    CHECK(*r1 == Catch::Approx(*rho(1.0, g, 1.0)).epsilon(1e-12));

    const auto rbig = rho_alpha(1e6, g);
    REQUIRE(rbig.has_value());
    CHECK(*rbig == Catch::Approx(*rho_high(g)).epsilon(1e-3));

    CHECK_THROWS_AS(rho_alpha(-0.5, g), std::domain_error);
}

TEST_CASE("satisfaction threshold equals the exact one at the implied power") {
    Engine rng(43);
    for (int i = 0; i < 300; ++i) {
        const ModeGains g = random_precondition_gains(rng, 3);
        const double sigma2 = (i % 3 == 0) ? 0.5 + uniform_open01(rng) : 1.0;
        for (double alpha : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
            const auto ra = rho_alpha(alpha, g);
            const auto re = detail::rho_value(sigma2 * alpha / g.gain_sm, g, sigma2);
            REQUIRE(ra.has_value() == re.has_value());
            if (ra) REQUIRE(*ra == Catch::Approx(*re).epsilon(1e-12));
        }
    }
}

TEST_CASE("source-power threshold on the canonical channel") {
    const ModeGains g = canonical_mode_gains();
    const PThreshold t = p_threshold(g, 1.0);
    // quadratic reduces to P^2 - 3P - 7 = 0
    CHECK(t.raw_root == Catch::Approx((3.0 + std::sqrt(37.0)) / 2.0).margin(1e-12));
    REQUIRE(t.value.has_value());
    CHECK(*t.value == Catch::Approx(2.0).margin(1e-12));   // clamped to p_src_upper
}

TEST_CASE("source-power threshold at the band edges") {
    // ratio pinned to rho_low: the crossing collapses to zero power
    ModeGains lo = canonical_mode_gains();
    lo.gain_rm = 1.2;
    lo.gain_re = 1.0;
    const PThreshold tl = p_threshold(lo, 1.0);
    CHECK(std::abs(tl.raw_root) <= 1e-12);
    CHECK_FALSE(tl.value.has_value());

    // ratio pinned to rho_high: the crossing escapes to infinity
    ModeGains hi = canonical_mode_gains();
    hi.gain_rm = 6.0;
    hi.gain_re = 1.0;
    const PThreshold th = p_threshold(hi, 1.0);
    CHECK_FALSE(th.value.has_value());
    CHECK_FALSE(std::isfinite(th.raw_root));
}

TEST_CASE("classification against the asymptotic thresholds") {
    CHECK(classify(canonical_mode_gains()) == ModeClass::RDC);   // ratio 4 in [1.2, 6]

    ModeGains rc = canonical_mode_gains();
    rc.gain_rm = 7.0;
    rc.gain_re = 1.0;
    CHECK(classify(rc) == ModeClass::EXCLUSIVE_RC);

    ModeGains dc = canonical_mode_gains();
    dc.gain_rm = 1.0;
    dc.gain_re = 1.0;
    CHECK(classify(dc) == ModeClass::EXCLUSIVE_DC);
}

TEST_CASE("optimal selection compares the two candidate rates") {
    const ModeGains g = canonical_mode_gains();
    const ModeDecision d = select_mode_optimal(1.0, g, 1.0);
    CHECK(d.mode == Mode::RC);
    CHECK(d.rate_rc == Catch::Approx(0.576001546722525).margin(1e-12));
    CHECK(d.rate_dc == Catch::Approx(0.4150374992788438).margin(1e-12));

    // halving the log-ratio loses when the eavesdropper mirrors the main user
    ModeGains mirror = g;
    mirror.gain_rm = mirror.gain_re = 1.3;
    mirror.gain_se = mirror.gain_se_dc;
    CHECK(select_mode_optimal(1.0, mirror, 1.0).mode == Mode::DC);

    ModeGains bad = g;
    bad.gain_se_dc = bad.gain_sm + 0.1;
    CHECK_THROWS_AS(select_mode_optimal(1.0, bad, 1.0), std::domain_error);
}

TEST_CASE("optimal selection matches the low-SNR policy as power vanishes") {
    Engine rng(47);
    int checked = 0;
    while (checked < 300) {
        const ModeGains g = random_precondition_gains(rng, 3);
        const auto lo = rho_low(g);
        if (!lo) continue;
        const double ratio = g.gain_rm / g.gain_re;
        if (std::abs(ratio - *lo) < 1e-3 * (*lo)) continue;   // skip near-boundary
        ++checked;
        const ModeDecision d = select_mode_optimal(1e-8, g, 1.0);
        CHECK((d.mode == Mode::RC) == (ratio > *lo));
    }
}

TEST_CASE("suboptimal selection thresholds the relay-gain ratio") {
    const ModeGains g = canonical_mode_gains();
    CHECK(select_mode_suboptimal(1.0, g) == Mode::RC);   // 4 > 2.2857

    const SatisfactionPolicy pol{1.0};
    CHECK(pol.select(g) == Mode::RC);
    CHECK(*pol.threshold(g) == Catch::Approx(12.0 / 5.25).margin(1e-12));
    CHECK(pol.implied_power(g.gain_sm, 1.0) == 1.0);

    // alpha extremes reduce to the asymptotic policies
    Engine rng(53);
    for (int i = 0; i < 200; ++i) {
        const ModeGains t = random_precondition_gains(rng, 4);
        const double ratio = t.gain_rm / t.gain_re;
        const auto lo = rho_low(t);
        if (lo && std::abs(ratio - *lo) > 1e-9)
            CHECK((select_mode_suboptimal(0.0, t) == Mode::RC) == (ratio > *lo));
        const auto hi = rho_high(t);
        if (hi && std::abs(ratio - *hi) > 1e-6 * (*hi))
            CHECK((select_mode_suboptimal(1e9, t) == Mode::RC) == (ratio > *hi));
    }
}

TEST_CASE("threshold ordering under the comparison preconditions") {
    Engine rng(59);
    for (int i = 0; i < 10000; ++i) {
        const ModeGains g = random_precondition_gains(rng, 3);
        const double pu = p_upper_of(g);
        const double ps = pu * uniform_open01(rng);
        if (!(ps > 0.0)) continue;
        const auto lo = rho_low(g);
        const auto mid = rho(ps, g, 1.0);
        REQUIRE(lo.has_value());
        REQUIRE(mid.has_value());
        REQUIRE(*lo <= *mid + 1e-9);
        const auto hi = rho_high(g);
        if (hi) REQUIRE(*mid <= *hi + 1e-9);
    }
}

TEST_CASE("exclusive classes agree with the optimal decision on a power grid") {
    Engine rng(61);
    int found_rc = 0, found_dc = 0;
    while (found_rc < 40 || found_dc < 40) {
        const ModeGains g = random_precondition_gains(rng, 3);
        const ModeClass c = classify(g);
        if (c == ModeClass::RDC) continue;
        const double pu = p_upper_of(g);
        bool all_match = true;
        for (int k = 1; k <= 100; ++k) {
            const double ps = pu * k / 101.0;
            const ModeDecision d = select_mode_optimal(ps, g, 1.0);
            const Mode want = c == ModeClass::EXCLUSIVE_RC ? Mode::RC : Mode::DC;
            if (d.mode != want) { all_match = false; break; }
        }
        CHECK(all_match);
        (c == ModeClass::EXCLUSIVE_RC ? found_rc : found_dc) += 1;
    }
}

TEST_CASE("exact threshold is continuous in the source power") {
    const ModeGains g = canonical_mode_gains();
    double prev = *rho(1e-6, g, 1.0);
    double max_jump = 0.0;
    for (int k = 1; k <= 2000; ++k) {
        const double ps = 1e-6 + k * (p_upper_of(g) - 2e-6) / 2000.0;
        const double cur = *rho(ps, g, 1.0);
        max_jump = std::max(max_jump, std::abs(cur - prev));
        prev = cur;
    }
    CHECK(max_jump < 0.02);   // ~ (rho_h - rho_l)/grid, no discontinuities
}
