#include "habitsim/lockdown.hpp"

#include <algorithm>
#include <cmath>

#include "habitsim/errors.hpp"

namespace habitsim {

std::string outcome_case_name(OutcomeCase c) {
    switch (c) {
        case OutcomeCase::SatiationLong: return "satiation_long";
        case OutcomeCase::SatiationShort: return "satiation_short";
        case OutcomeCase::SubstLong: return "substitutability_long";
        case OutcomeCase::SubstShort: return "substitutability_short";
        case OutcomeCase::SatiationAboveSteady: return "satiation_above_steady";
        case OutcomeCase::SubstAboveSteady: return "substitutability_above_steady";
        case OutcomeCase::Boundary: return "boundary";
    }
    return "unknown";
}

std::pair<double, double> lockdown_boundary_state(const ModelConfig& cfg, const ModelDerived& d,
                                                  double t_tilde) {
    const double phi = cfg.household.phi, r = cfg.household.r, psi1 = d.sd.psi1;
    const SteadyState ssL =
        steady_state_lq(cfg, d, d.y1_lockdown, std::nullopt, cfg.initial.b0, cfg.initial.h0);
    const double h_t = ssL.h_star + (cfg.initial.h0 - ssL.h_star) * std::exp(psi1 * t_tilde);
    const double b_t = -psi1 * (phi + r) / (r * phi * (r - psi1)) * ssL.h_star -
                       d.y1_lockdown / r + d.bcoef * h_t;
    return {h_t, b_t};
}

Classification classify(const ModelConfig& cfg, const ModelDerived& d, double t_tilde) {
    Classification cl;
    const double h0 = cfg.initial.h0;
    const SteadyState ss =
        steady_state_lq(cfg, d, d.y1, d.y2, cfg.initial.b0, cfg.initial.h0);
    const SteadyState ssL =
        steady_state_lq(cfg, d, d.y1_lockdown, std::nullopt, cfg.initial.b0, cfg.initial.h0);
    cl.satiation_side = cfg.utility.a_c2h < d.thresholds.a_c2h_bar;

    if (ssL.h_star > h0 && ssL.h_star > ss.h_star) {
        cl.t_underline = (std::log(ssL.h_star - h0) - std::log(ssL.h_star - ss.h_star)) /
                         std::fabs(d.sd.psi1);
    }

    // Exact ties are detected up to floating-point noise.
    auto near = [](double a, double b, double scale) {
        return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(scale));
    };
    if (near(d.sse_num, 0.0, cfg.utility.a_c1c2) ||
        near(cfg.utility.a_c2h, d.thresholds.a_c2h_bar, cfg.utility.a_c2h)) {
        cl.outcome = OutcomeCase::Boundary;
        cl.boundary_reason = "a_c2h equals a_c2h_bar: the price deviation coefficient vanishes";
        return cl;
    }
    if (near(h0, ss.h_star, h0)) {
        cl.outcome = OutcomeCase::Boundary;
        cl.boundary_reason = "h0 equals h*: the no-lockdown price is flat at p*";
        return cl;
    }

    if (h0 < ss.h_star) {
        if (cl.t_underline && near(t_tilde, *cl.t_underline, t_tilde)) {
            cl.outcome = OutcomeCase::Boundary;
            cl.boundary_reason = "t_tilde equals t_underline: p_AL starts exactly at p*";
            return cl;
        }
        const bool long_lockdown = cl.t_underline ? (t_tilde > *cl.t_underline) : true;
        if (cl.satiation_side)
            cl.outcome = long_lockdown ? OutcomeCase::SatiationLong : OutcomeCase::SatiationShort;
        else
            cl.outcome = long_lockdown ? OutcomeCase::SubstLong : OutcomeCase::SubstShort;
        return cl;
    }

    // h0 > h*: the bracket h*_L - h* + (h0 - h*_L) e^{psi1 t~} stays positive for
    // every duration, so only the side of the watershed matters.
    cl.outcome =
        cl.satiation_side ? OutcomeCase::SatiationAboveSteady : OutcomeCase::SubstAboveSteady;
    return cl;
}

namespace {

PentUpMetrics metrics_from_boundary(const ModelConfig& cfg, const ModelDerived& d,
                                    const SteadyState& ss, double h_t) {
    PentUpMetrics m;
    const double dev = h_t - ss.h_star;
    m.sse = d.sse(ss.lambda);
    m.dc2 = m.sse / (-cfg.utility.a_c2c2) * dev;
    m.dc2_pct = 100.0 * m.dc2 / d.y2;
    m.dc1_pct = 100.0 * d.sd.addiction_factor * dev / ss.c1_star;
    m.overshoot_pct = 100.0 * m.sse * dev / ss.p_star;
    m.tb_gap = -d.sd.addiction_factor * dev;
    return m;
}

}  // namespace

ScenarioResult run_unanticipated(const ModelConfig& cfg, const ModelDerived& d,
                                 const LockdownEpisode& episode, double horizon, double dt) {
    if (!(episode.t_tilde > 0.0))
        throw ScenarioInfeasible("run_unanticipated: lockdown duration must be positive");
    const double t_tilde = episode.t_tilde;

    ScenarioResult res;
    res.ss_no_lockdown =
        steady_state_lq(cfg, d, d.y1, d.y2, cfg.initial.b0, cfg.initial.h0);

    // The counterfactual without a lockdown must keep sector 2 viable; its
    // price path moves monotonically between p_NL(0) and p*.
    const double p_nl_0 =
        res.ss_no_lockdown.p_star +
        d.sse(res.ss_no_lockdown.lambda) * (cfg.initial.h0 - res.ss_no_lockdown.h_star);
    const double p_min = d.thresholds.p_min;
    if (std::min(p_nl_0, res.ss_no_lockdown.p_star) < p_min)
        throw ScenarioInfeasible(
            "run_unanticipated: the no-lockdown counterfactual itself violates the "
            "viability floor p_min");

    res.ss_lockdown =
        steady_state_lq(cfg, d, d.y1_lockdown, std::nullopt, cfg.initial.b0, cfg.initial.h0);
    Trajectory lock = path(cfg, d, res.ss_lockdown, cfg.initial.h0, cfg.initial.b0, t_tilde, dt,
                           episode.t_start, std::nullopt, d.y1_lockdown);

    const auto [h_t, b_t] = lockdown_boundary_state(cfg, d, t_tilde);
    res.h_at_reopen = h_t;
    res.b_at_reopen = b_t;

    res.ss_after = steady_state_lq(cfg, d, d.y1, d.y2, b_t, h_t);
    Trajectory after = path(cfg, d, res.ss_after, h_t, b_t, horizon, dt,
                            episode.t_start + t_tilde, d.y2, d.y1);

    res.p_at_reopen = res.ss_after.p_star + d.sse(res.ss_after.lambda) * (h_t - res.ss_after.h_star);
    res.reopens = res.p_at_reopen >= p_min;
    res.classification = classify(cfg, d, t_tilde);
    res.pent_up = metrics_from_boundary(cfg, d, res.ss_after, h_t);

    res.segments.emplace_back(Regime::Lockdown, std::move(lock));
    res.segments.emplace_back(Regime::TwoSector, std::move(after));

    if (!res.reopens) res.policy = policy_search(cfg, d, res, dt);
    return res;
}

PentUpMetrics pent_up(const ModelConfig& cfg, const ModelDerived& d, double t_tilde) {
    const double h0 = cfg.initial.h0;
    const double steady_h = cfg.household.r * cfg.initial.b0 + d.y1;
    if (std::fabs(h0 - steady_h) > 1e-9 * std::max(1.0, std::fabs(h0)))
        throw ScenarioInfeasible("pent_up: the economy must start at its steady state "
                                 "(h0 = r b0 + y1)");

    const SteadyState ss = steady_state_lq(cfg, d, d.y1, d.y2, cfg.initial.b0, h0);
    const SteadyState ssL =
        steady_state_lq(cfg, d, d.y1_lockdown, std::nullopt, cfg.initial.b0, h0);

    PentUpMetrics m;
    m.sse = d.sse(ss.lambda);
    const double dev = (ssL.h_star - h0) * (1.0 - std::exp(d.sd.psi1 * t_tilde));
    m.dc2 = m.sse / (-cfg.utility.a_c2c2) * dev;
    m.dc2_pct = 100.0 * m.dc2 / d.y2;
    m.dc1_pct = 100.0 * d.sd.addiction_factor * dev / ss.c1_star;
    m.overshoot_pct = 100.0 * m.sse * dev / ss.p_star;
    m.tb_gap = -d.sd.addiction_factor * dev;
    return m;
}

PolicyPlan policy_search(const ModelConfig& cfg, const ModelDerived& d,
                         const ScenarioResult& scenario, double dt) {
    PolicyPlan plan;
    const double t_tilde = scenario.segments.empty()
                               ? 0.0
                               : scenario.segments.front().second.t.back();
    const double p_min = d.thresholds.p_min;
    const SteadyState& ss = scenario.ss_after;

    if (scenario.reopens) {
        plan.t_reopen = t_tilde;
        plan.duration = 0.0;
        return plan;
    }
    if (!(ss.p_star > p_min))
        throw NeverViableError(
            "policy_search: p* does not exceed p_min, so no transitory subsidy can restore "
            "viability");

    // p_AL(t) = p* + S e^{psi1 (t - t~)} with S < 0 here; invert for the
    // first crossing of p_min.
    const double S = scenario.p_at_reopen - ss.p_star;
    const double delay = std::log((p_min - ss.p_star) / S) / d.sd.psi1;
    plan.t_reopen = t_tilde + delay;
    plan.duration = delay;

    const double y2 = d.y2;
    const double one_minus_alpha = 1.0 - cfg.tech.alpha;
    for (double t = t_tilde;; t += dt) {
        const bool last = t >= plan.t_reopen;
        const double tt = last ? plan.t_reopen : t;
        const double p = ss.p_star + S * std::exp(d.sd.psi1 * (tt - t_tilde));
        plan.tau_schedule.emplace_back(tt, std::max(0.0, cfg.tech.tau - p * one_minus_alpha * y2));
        if (last) break;
    }
    return plan;
}

}  // namespace habitsim
