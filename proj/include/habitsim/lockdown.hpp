#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "habitsim/equilibrium.hpp"

namespace habitsim {

enum class LockdownMode { UnanticipatedEnd };

struct LockdownEpisode {
    double t_start = 0.0;  // episode start (periods)
    double t_tilde = 0.0;  // duration (periods), > 0
    LockdownMode mode = LockdownMode::UnanticipatedEnd;
};

// Post-lockdown price-ordering taxonomy.  The *AboveSteady cases cover
// initial habits above the two-sector steady state, where the duration
// threshold plays no role.
enum class OutcomeCase {
    SatiationLong,    // p_AL < p* < p_NL
    SatiationShort,   // p* < p_AL < p_NL
    SubstLong,        // p_AL > p* > p_NL
    SubstShort,       // p* > p_AL > p_NL
    SatiationAboveSteady,  // h0 > h*: p_AL < p_NL < p*
    SubstAboveSteady,      // h0 > h*: p_AL > p_NL > p*
    Boundary,         // an exact tie (sse = 0, t_tilde = t_underline, or h0 = h*)
};

std::string outcome_case_name(OutcomeCase c);

struct Classification {
    OutcomeCase outcome = OutcomeCase::Boundary;
    std::optional<double> t_underline;  // shutdown-threshold duration, when defined
    bool satiation_side = false;        // a_c2h < a_c2h_bar
    std::string boundary_reason;        // non-empty when outcome == Boundary
};

struct PentUpMetrics {
    double sse = 0.0;            // substitutability-satiation multiplier (price per habit unit)
    double dc2 = 0.0;            // demand shift at the fixed steady-state price (good-2 units)
    double dc2_pct = 0.0;        // dc2 in percent of y2
    double dc1_pct = 0.0;        // good-1 consumption deviation at reopening, percent of c1*
    double overshoot_pct = 0.0;  // (p(t~) - p*)/p* in percent
    double tb_gap = 0.0;         // TB(t~) - TB* (good-1 units)
};

struct PolicyPlan {
    double t_reopen = 0.0;  // first time p >= p_min after the lockdown
    double duration = 0.0;  // t_reopen - t_tilde
    std::vector<std::pair<double, double>> tau_schedule;  // (t, tau reduction) on [t~, t_reopen]
};

struct ScenarioResult {
    std::vector<std::pair<Regime, Trajectory>> segments;
    Classification classification;
    bool reopens = false;       // p_AL(t~) >= p_min without intervention
    double p_at_reopen = 0.0;   // price the two-sector equilibrium would post at t~
    double h_at_reopen = 0.0;
    double b_at_reopen = 0.0;
    SteadyState ss_no_lockdown;
    SteadyState ss_lockdown;
    SteadyState ss_after;
    PentUpMetrics pent_up;
    std::optional<PolicyPlan> policy;
};

// Boundary state at the end of the lockdown, from the closed forms (never
// from grid interpolation).
std::pair<double, double> lockdown_boundary_state(const ModelConfig& cfg, const ModelDerived& d,
                                                  double t_tilde);

// Classify the post-lockdown outcome for the configured episode duration.
Classification classify(const ModelConfig& cfg, const ModelDerived& d, double t_tilde);

// Full unanticipated-lockdown scenario: lockdown segment, closed-form
// stitching at t~, after segment, classification, viability, metrics, and a
// subsidy plan when the sector would stay shut.  Throws ScenarioInfeasible
// when the no-lockdown counterfactual itself violates the viability floor.
ScenarioResult run_unanticipated(const ModelConfig& cfg, const ModelDerived& d,
                                 const LockdownEpisode& episode, double horizon, double dt);

// Pent-up demand metrics for an economy that starts at its steady state
// (h0 = r b0 + y1).  Throws ScenarioInfeasible otherwise.
PentUpMetrics pent_up(const ModelConfig& cfg, const ModelDerived& d, double t_tilde);

// Minimal transitory tau reduction keeping sector-2 profit non-negative until
// the price recovers.  Throws NeverViableError when p* < p_min, in which case
// no transitory subsidy can work.
PolicyPlan policy_search(const ModelConfig& cfg, const ModelDerived& d,
                         const ScenarioResult& scenario, double dt);

}  // namespace habitsim
