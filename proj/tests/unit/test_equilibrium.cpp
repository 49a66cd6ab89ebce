#include <doctest.h>

#include <cmath>
#include <random>

#include "habitsim/errors.hpp"
#include "habitsim/equilibrium.hpp"
#include "helpers.hpp"

using namespace habitsim;
using habitsim::testing::baseline_config;

namespace {

MarginalUtility lq_callbacks(const LQUtilityParams& u) {
    MarginalUtility mu;
    mu.u_c1 = [u](double c1, double c2, double h) { return u.u_c1(c1, c2, h); };
    mu.u_c2 = [u](double c1, double c2, double h) { return u.u_c2(c1, c2, h); };
    mu.u_h = [u](double c1, double c2, double h) { return u.u_h(c1, c2, h); };
    mu.u_c1c1 = [u](double, double, double) { return u.a_c1c1; };
    mu.u_c1h = [u](double, double, double) { return u.a_c1h; };
    mu.u_hh = [u](double, double, double) { return u.a_hh; };
    return mu;
}

}  // namespace

TEST_CASE("baseline two-sector steady state") {
    const ModelConfig cfg = baseline_config();
    const ModelDerived d = derive(cfg);
    const SteadyState ss = steady_state_lq(cfg, d, d.y1, d.y2, 1.0, 0.5);
    // Frozen from direct evaluation of the closed forms; p* must clear the
    // independently computed viability floor 2.6100.
    CHECK(ss.lambda == doctest::Approx(0.195128312).epsilon(1e-6));
    CHECK(ss.h_star == doctest::Approx(0.627310077).epsilon(1e-6));
    CHECK(ss.p_star == doctest::Approx(2.613100089).epsilon(1e-6));
    CHECK(ss.p_star > d.thresholds.p_min);
    CHECK(ss.c1_star == ss.h_star);
    CHECK(ss.b_star == doctest::Approx((ss.h_star - d.y1) / cfg.household.r));
    CHECK(ss.sector2_viable);
}

TEST_CASE("baseline lockdown steady state") {
    const ModelConfig cfg = baseline_config();
    const ModelDerived d = derive(cfg);
    const SteadyState ssL = steady_state_lq(cfg, d, d.y1_lockdown, std::nullopt, 1.0, 0.5);
    CHECK(ssL.h_star == doctest::Approx(0.7532).epsilon(1e-4));
    CHECK(std::isnan(ssL.p_star));
}

TEST_CASE("steady start produces a constant trajectory") {
    ModelConfig cfg = baseline_config();
    const ModelDerived d0 = derive(cfg);
    // Choose h0 = r b0 + y1 so the initial state is the fixed point.
    cfg.initial.h0 = cfg.household.r * cfg.initial.b0 + d0.y1;
    const ModelDerived d = derive(cfg);
    const SteadyState ss = steady_state_lq(cfg, d, d.y1, d.y2, cfg.initial.b0, cfg.initial.h0);
    CHECK(ss.h_star == doctest::Approx(cfg.initial.h0).epsilon(1e-12));
    const Trajectory tr =
        path(cfg, d, ss, cfg.initial.h0, cfg.initial.b0, 10.0, 0.1, 0.0, d.y2, d.y1);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        CHECK(tr.h[i] == doctest::Approx(ss.h_star).epsilon(1e-12));
        CHECK(tr.p[i] == doctest::Approx(ss.p_star).epsilon(1e-12));
    }
}

TEST_CASE("baseline price starts above p* and decays at the stable rate") {
    // h0 < h* with a_c2h below the watershed makes the deviation coefficient
    // negative, so the price path approaches p* from above.
    const ModelConfig cfg = baseline_config();
    const ModelDerived d = derive(cfg);
    const SteadyState ss = steady_state_lq(cfg, d, d.y1, d.y2, 1.0, 0.5);
    REQUIRE(cfg.utility.a_c2h < d.thresholds.a_c2h_bar);
    const Trajectory tr = path(cfg, d, ss, 0.5, 1.0, 50.0, 0.5, 0.0, d.y2, d.y1);
    CHECK(tr.p.front() > ss.p_star);
    CHECK(tr.p.front() == doctest::Approx(2.6524838).epsilon(1e-6));
    for (std::size_t i = 1; i < tr.t.size(); ++i) {
        CHECK(tr.p[i] < tr.p[i - 1]);
        CHECK(tr.p[i] - ss.p_star ==
              doctest::Approx((tr.p[i - 1] - ss.p_star) * std::exp(d.sd.psi1 * 0.5))
                  .epsilon(1e-9));
    }
}

TEST_CASE("restriction violations name the failed threshold") {
    const ModelConfig cfg = baseline_config();
    const ModelDerived d = derive(cfg);
    CHECK_THROWS_WITH_AS(steady_state_lq(cfg, d, d.y1, d.y2, -70.0, 0.5),
                         doctest::Contains("b0_lower"), RestrictionError);
    CHECK_THROWS_WITH_AS(steady_state_lq(cfg, d, d.y1, d.y2, 30.0, 0.5),
                         doctest::Contains("b0_upper"), RestrictionError);
    ModelConfig low = cfg;
    low.utility.a_c1 = 0.3;  // below a_c1_lower = 0.3258
    CHECK_THROWS_WITH_AS(steady_state_lq(low, derive(low), d.y1, d.y2, 1.0, 0.5),
                         doctest::Contains("a_c1_lower"), RestrictionError);
}

TEST_CASE("trajectory deviations stay proportional to the habit gap") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 40; ++i) {
        const auto draw = habitsim::testing::random_config(rng);
        const auto& cfg = draw.cfg;
        const auto& d = draw.d;
        const SteadyState& ss = draw.ss;
        const Trajectory tr = path(cfg, d, ss, cfg.initial.h0, cfg.initial.b0,
                                   5.0 / std::fabs(d.sd.psi1), 0.25, 0.0, d.y2, d.y1);
        const double sse = d.sse(ss.lambda);
        for (std::size_t j = 0; j < tr.t.size(); ++j) {
            const double dev = tr.h[j] - ss.h_star;
            CHECK(tr.c1[j] - ss.c1_star ==
                  doctest::Approx(d.sd.addiction_factor * dev).epsilon(1e-10));
            CHECK(tr.b[j] - ss.b_star == doctest::Approx(d.bcoef * dev).epsilon(1e-10));
            CHECK(tr.p[j] - ss.p_star == doctest::Approx(sse * dev).epsilon(1e-10));
        }
        // Exponential-decay envelope at the grid ends (transversality surrogate).
        const double cap = std::fabs(cfg.initial.h0 - ss.h_star) *
                           std::max(1.0, std::fabs(d.bcoef));
        const double tail = std::exp(d.sd.psi1 * (tr.t.back() - tr.t.front()));
        CHECK(std::fabs(tr.h.back() - ss.h_star) <= cap * tail * (1.0 + 1e-9) + 1e-300);
        CHECK(std::fabs(tr.b.back() - ss.b_star) <= cap * tail * (1.0 + 1e-9) + 1e-300);
    }
}

TEST_CASE("lambda pin-down closure") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto draw = habitsim::testing::random_config(rng);
        const double lhs = draw.cfg.initial.b0 - draw.ss.b_star;
        const double rhs = draw.d.bcoef * (draw.cfg.initial.h0 - draw.ss.h_star);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("budget identity holds to O(dt^2) along the grid") {
    const ModelConfig cfg = baseline_config();
    const ModelDerived d = derive(cfg);
    const SteadyState ss = steady_state_lq(cfg, d, d.y1, d.y2, 1.0, 0.5);
    const double dt = 0.01;
    const Trajectory tr = path(cfg, d, ss, 0.5, 1.0, 30.0, dt, 0.0, d.y2, d.y1);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < tr.t.size(); ++i) {
        const double bdot = (tr.b[i + 1] - tr.b[i - 1]) / (2.0 * dt);
        worst = std::max(worst,
                         std::fabs(bdot + tr.c1[i] - cfg.household.r * tr.b[i] - d.y1));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("price changes follow the substitutability/satiation balance") {
    // With a_c1c2 > 0 and a_c2h < 0, the sign of dp equals the sign of
    // a_c1c2 dc1 + a_c2h dh step by step.
    const ModelConfig cfg = baseline_config();
    const ModelDerived d = derive(cfg);
    const SteadyState ss = steady_state_lq(cfg, d, d.y1, d.y2, 1.0, 0.5);
    const Trajectory tr = path(cfg, d, ss, 0.5, 1.0, 40.0, 0.5, 0.0, d.y2, d.y1);
    for (std::size_t i = 1; i < tr.t.size(); ++i) {
        const double dp = tr.p[i] - tr.p[i - 1];
        const double key = cfg.utility.a_c1c2 * (tr.c1[i] - tr.c1[i - 1]) +
                           cfg.utility.a_c2h * (tr.h[i] - tr.h[i - 1]);
        CHECK(std::signbit(dp) == std::signbit(key));
    }
}

TEST_CASE("general steady state matches the closed form on quadratic inputs") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const auto draw = habitsim::testing::random_config(rng);
        const auto mu = lq_callbacks(draw.cfg.utility);
        const double guess = draw.ss.h_star;
        const auto gen = steady_state_general(mu, draw.cfg, draw.d.y1, draw.d.y2,
                                              draw.cfg.initial.b0, draw.cfg.initial.h0,
                                              0.5 * guess, 1.5 * guess);
        CHECK(gen.ss.h_star == doctest::Approx(draw.ss.h_star).epsilon(1e-8));
        CHECK(gen.ss.lambda == doctest::Approx(draw.ss.lambda).epsilon(1e-8));
        CHECK(gen.ss.p_star == doctest::Approx(draw.ss.p_star).epsilon(1e-8));
        CHECK_FALSE(gen.non_unique);
    }
}

TEST_CASE("general steady state reduces to consumption smoothing without habits") {
    const ModelConfig cfg = baseline_config();
    const ModelDerived d = derive(cfg);
    MarginalUtility mu;
    mu.u_c1 = [](double c1, double, double) { return 2.0 - 0.8 * c1; };
    mu.u_c2 = [](double, double c2, double) { return 1.0 - 0.5 * c2; };
    mu.u_h = [](double, double, double) { return 0.0; };
    mu.u_c1c1 = [](double, double, double) { return -0.8; };
    mu.u_c1h = [](double, double, double) { return 0.0; };
    mu.u_hh = [](double, double, double) { return 0.0; };
    const auto gen = steady_state_general(mu, cfg, d.y1, d.y2, 1.0, 0.5, 0.1, 2.0);
    const double c1 = cfg.household.r * 1.0 + d.y1;  // permanent income
    CHECK(gen.ss.h_star == doctest::Approx(c1).epsilon(1e-9));
    CHECK(gen.ss.lambda == doctest::Approx(2.0 - 0.8 * c1).epsilon(1e-9));
}

TEST_CASE("general steady state reports a missing bracket") {
    const ModelConfig cfg = baseline_config();
    const ModelDerived d = derive(cfg);
    const auto mu = lq_callbacks(cfg.utility);
    CHECK_THROWS_AS(
        steady_state_general(mu, cfg, d.y1, d.y2, 1.0, 0.5, 2.0, 3.0),
        NoBracketError);
}

TEST_CASE("habit-free benchmark is flat and survives a lockdown untouched") {
    ModelConfig cfg = baseline_config();
    cfg.utility.a_h = cfg.utility.a_hh = cfg.utility.a_c1h = cfg.utility.a_c2h = 0.0;
    const ModelDerived d0 = derive(baseline_config());
    const Trajectory pre = no_habits_path(cfg, 1.0, 20.0, 0.1, d0.y1, d0.y2);
    CHECK(pre.c1.front() == doctest::Approx(0.01 * 1.0 + d0.y1).epsilon(1e-12));
    CHECK(pre.c1.front() == doctest::Approx(0.6255722).epsilon(1e-6));
    const Trajectory lock = no_habits_path(cfg, 1.0, 9.0, 0.1, d0.y1_lockdown, std::nullopt);
    const Trajectory post = no_habits_path(cfg, 1.0, 20.0, 0.1, d0.y1, d0.y2, 9.0);
    CHECK(lock.c1.front() == doctest::Approx(0.01 + d0.y1_lockdown).epsilon(1e-12));
    for (std::size_t i = 0; i < post.t.size(); ++i) {
        CHECK(post.c1[i] == doctest::Approx(pre.c1.front()).epsilon(1e-14));
        CHECK(post.b[i] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(post.p[i] == doctest::Approx(pre.p.front()).epsilon(1e-14));
    }
    CHECK_THROWS_AS(no_habits_path(baseline_config(), 1.0, 5.0, 0.1, d0.y1, d0.y2),
                    ConfigError);
}

TEST_CASE("two-type aggregation reproduces the one-agent price") {
    const LQUtilityParams u = baseline_config().utility;
    TypeState common{0.6, 0.61, 0.62, 0.1};
    const double p_common = aggregate_price_identity(u, common, common, 0.5);
    const double one_agent =
        (u.a_c2 + u.a_c2c2 * 0.61 + u.a_c1c2 * 0.6 + u.a_c2h * 0.62) / 0.2;
    CHECK(p_common == doctest::Approx(one_agent).epsilon(1e-12));

    // The price depends on the split only through the aggregates.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-0.2, 0.2);
    const double xi = 0.4;
    for (int i = 0; i < 200; ++i) {
        const double d1 = U(rng), d2 = U(rng), d3 = U(rng), d4 = U(rng);
        TypeState a{0.6 + d1 * (1 - xi), 0.61 + d2 * (1 - xi), 0.62 + d3 * (1 - xi),
                    0.1 + d4};
        TypeState b{0.6 - d1 * xi, 0.61 - d2 * xi, 0.62 - d3 * xi, 0.1 - d4};
        if (!(a.lambda > 0.0) || !(b.lambda > 0.0)) continue;
        CHECK(aggregate_price_identity(u, a, b, xi) ==
              doctest::Approx(p_common).epsilon(1e-10));
    }

    TypeState dead{0.6, 0.61, 0.62, 0.0};
    CHECK_THROWS_AS(aggregate_price_identity(u, common, dead, 0.5), RestrictionError);
}
