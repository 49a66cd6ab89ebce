#include "habitsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "habitsim/anticipated.hpp"
#include "habitsim/errors.hpp"
#include "habitsim/labor_shift.hpp"

namespace habitsim {

namespace {

namespace fs = std::filesystem;

std::string kv(const std::string& key, double v) { return key + " = " + format_g12(v) + "\n"; }
std::string kv(const std::string& key, const std::string& v) { return key + " = " + v + "\n"; }

void append_steady_state(std::ostringstream& os, const std::string& prefix,
                         const SteadyState& ss) {
    os << kv(prefix + "h_star", ss.h_star) << kv(prefix + "c1_star", ss.c1_star)
       << kv(prefix + "b_star", ss.b_star) << kv(prefix + "lambda", ss.lambda)
       << kv(prefix + "mu_star", ss.mu_star);
    if (!std::isnan(ss.p_star)) os << kv(prefix + "p_star", ss.p_star);
}

PointSet inverse_demand_set(const ModelConfig& cfg, const ModelDerived& d, const SteadyState& ss,
                            double h_state, const std::string& name, int n_points) {
    const auto& u = cfg.utility;
    PointSet set;
    set.name = name;
    const double c1_state = ss.c1_star + d.sd.addiction_factor * (h_state - ss.h_star);
    for (int i = 0; i < n_points; ++i) {
        const double c2 = d.y2 * (0.5 + static_cast<double>(i) / (n_points - 1));
        const double p =
            (u.a_c2 + u.a_c2c2 * c2 + u.a_c1c2 * c1_state + u.a_c2h * h_state) / ss.lambda;
        set.x.push_back(c2);
        set.y.push_back(p);
    }
    return set;
}

}  // namespace

FigureData demand_supply_snapshot(const ModelConfig& cfg, const ModelDerived& d, double t,
                                  double h_at_t, int n_points) {
    const SteadyState ss =
        steady_state_lq(cfg, d, d.y1, d.y2, cfg.initial.b0, cfg.initial.h0);
    FigureData fig;
    fig.x_name = "c2";
    const double h_state =
        std::isnan(h_at_t) ? ss.h_star + (cfg.initial.h0 - ss.h_star) * std::exp(d.sd.psi1 * t)
                           : h_at_t;
    PointSet demand = inverse_demand_set(cfg, d, ss, h_state, "p_demand", n_points);
    const double p_top = *std::max_element(demand.y.begin(), demand.y.end());
    PointSet supply;
    supply.name = "p_supply";
    supply.x = {d.y2, d.y2};
    supply.y = {d.thresholds.p_min, std::max(p_top, d.thresholds.p_min)};
    fig.sets.push_back(std::move(demand));
    fig.sets.push_back(std::move(supply));
    return fig;
}

namespace {

struct RunContext {
    const ParsedConfig& pc;
    const ModelDerived& d;
    double horizon;
    double dt;
    fs::path out;
    std::ostringstream summary;
    std::vector<std::string>* files;
};

void emit(RunContext& ctx, const fs::path& rel, const std::string& content) {
    const fs::path p = ctx.out / rel;
    write_file(p.string(), content);
    ctx.files->push_back(p.string());
}

void scenario_no_lockdown(RunContext& ctx) {
    const auto& cfg = ctx.pc.model;
    const SteadyState ss =
        steady_state_lq(cfg, ctx.d, ctx.d.y1, ctx.d.y2, cfg.initial.b0, cfg.initial.h0);
    const Trajectory tr = path(cfg, ctx.d, ss, cfg.initial.h0, cfg.initial.b0, ctx.horizon,
                               ctx.dt, 0.0, ctx.d.y2, ctx.d.y1);
    emit(ctx, fs::path("no_lockdown") / "two_sector.csv", trajectory_csv(tr));
    ctx.summary << "\n[scenario no_lockdown]\n" << kv("kind", "no_lockdown");
    append_steady_state(ctx.summary, "", ss);
    ctx.summary << kv("p0", tr.p.front()) << kv("viable", ss.sector2_viable ? "true" : "false");
}

void scenario_no_habits(RunContext& ctx) {
    ModelConfig cfg = ctx.pc.model;
    cfg.utility.a_h = cfg.utility.a_hh = cfg.utility.a_c1h = cfg.utility.a_c2h = 0.0;
    const double t_tilde = ctx.pc.manifest.unanticipated_durations.empty()
                               ? 9.0
                               : ctx.pc.manifest.unanticipated_durations.front();
    const Trajectory pre =
        no_habits_path(cfg, cfg.initial.b0, t_tilde, ctx.dt, ctx.d.y1, ctx.d.y2, 0.0);
    const Trajectory lock = no_habits_path(cfg, cfg.initial.b0, t_tilde, ctx.dt,
                                           ctx.d.y1_lockdown, std::nullopt, 0.0);
    const Trajectory after =
        no_habits_path(cfg, cfg.initial.b0, ctx.horizon, ctx.dt, ctx.d.y1, ctx.d.y2, t_tilde);
    emit(ctx, fs::path("no_habits") / "two_sector.csv", trajectory_csv(pre));
    emit(ctx, fs::path("no_habits") / "lockdown.csv", trajectory_csv(lock));
    emit(ctx, fs::path("no_habits") / "after.csv", trajectory_csv(after));
    ctx.summary << "\n[scenario no_habits]\n"
                << kv("kind", "no_habits") << kv("t_tilde", t_tilde)
                << kv("c1_before", pre.c1.front()) << kv("c1_lockdown", lock.c1.front())
                << kv("c1_after", after.c1.front())
                << kv("after_equals_before",
                      after.c1.front() == pre.c1.front() && after.b.front() == pre.b.front()
                          ? "true"
                          : "false");
}

void summarize_unanticipated(RunContext& ctx, const std::string& name,
                             const ScenarioResult& res, double t_tilde) {
    auto& os = ctx.summary;
    os << "\n[scenario " << name << "]\n"
       << kv("kind", "unanticipated_lockdown") << kv("t_tilde", t_tilde)
       << kv("classification", outcome_case_name(res.classification.outcome));
    if (res.classification.t_underline) os << kv("t_underline", *res.classification.t_underline);
    if (!res.classification.boundary_reason.empty())
        os << kv("boundary_reason", res.classification.boundary_reason);
    os << kv("satiation_side", res.classification.satiation_side ? "true" : "false")
       << kv("reopens", res.reopens ? "true" : "false") << kv("p_at_reopen", res.p_at_reopen)
       << kv("h_at_reopen", res.h_at_reopen) << kv("b_at_reopen", res.b_at_reopen)
       << kv("p_min", ctx.d.thresholds.p_min);
    append_steady_state(os, "nl_", res.ss_no_lockdown);
    append_steady_state(os, "lock_", res.ss_lockdown);
    os << kv("sse", res.pent_up.sse) << kv("dc2", res.pent_up.dc2)
       << kv("dc2_pct", res.pent_up.dc2_pct) << kv("dc1_pct", res.pent_up.dc1_pct)
       << kv("overshoot_pct", res.pent_up.overshoot_pct) << kv("tb_gap", res.pent_up.tb_gap);
    if (res.policy) {
        os << kv("policy_t_reopen", res.policy->t_reopen)
           << kv("policy_duration", res.policy->duration)
           << kv("policy_max_tau_cut",
                 res.policy->tau_schedule.empty()
                     ? 0.0
                     : std::max_element(res.policy->tau_schedule.begin(),
                                        res.policy->tau_schedule.end(),
                                        [](const auto& a, const auto& b) {
                                            return a.second < b.second;
                                        })
                           ->second);
    }
}

void scenario_unanticipated(RunContext& ctx, double t_tilde, const std::string& name) {
    const auto& cfg = ctx.pc.model;
    LockdownEpisode ep;
    ep.t_tilde = t_tilde;
    const ScenarioResult res = run_unanticipated(cfg, ctx.d, ep, ctx.horizon, ctx.dt);
    emit(ctx, fs::path(name) / "lockdown.csv", trajectory_csv(res.segments[0].second));
    emit(ctx, fs::path(name) / "after.csv", trajectory_csv(res.segments[1].second));
    summarize_unanticipated(ctx, name, res, t_tilde);
}

void scenario_anticipated(RunContext& ctx, const TwoStageSolver& solver, double T,
                          const std::string& name) {
    const TwoStageSolution sol = solver.solve(T, ctx.horizon, ctx.dt);
    emit(ctx, fs::path(name) / "during.csv", trajectory_csv(sol.during_segment));
    emit(ctx, fs::path(name) / "after.csv", trajectory_csv(sol.after_segment));
    auto& os = ctx.summary;
    os << "\n[scenario " << name << "]\n"
       << kv("kind", "anticipated_lockdown") << kv("T", T) << kv("p_reopen", sol.p_reopen)
       << kv("b_T", sol.bT) << kv("h_T", sol.hT) << kv("lambda_ts_l", sol.lambda_ts_l)
       << kv("h_star_ts_l", sol.h_star_ts_l) << kv("mu_star_ts_l", sol.mu_star_ts_l)
       << kv("A", sol.A) << kv("B", sol.B) << kv("C", sol.C) << kv("D", sol.D)
       << kv("value_fit_residual", solver.value_function().fit_residual);
    append_steady_state(os, "after_", sol.ss_after);
}

void scenario_random(RunContext& ctx, const TwoStageSolver& solver, double delta,
                     const std::string& name) {
    const ExpectedPriceReport rep = expected_price_random(solver, delta);
    auto& os = ctx.summary;
    os << "\n[scenario " << name << "]\n"
       << kv("kind", "random_duration") << kv("delta", delta)
       << kv("expected_price", rep.expected_price)
       << kv("abs_error_estimate", rep.abs_error_estimate)
       << kv("converged", rep.converged ? "true" : "false") << kv("s_max", rep.s_max)
       << kv("truncated_mass", rep.truncated_mass)
       << kv("p_sample_min", rep.p_sample_min) << kv("p_sample_max", rep.p_sample_max)
       << kv("evaluations", static_cast<double>(rep.evaluations));
    if (rep.domain_exit_s) os << kv("domain_exit_s", *rep.domain_exit_s);
    for (const auto& [q, p] : rep.quantiles) {
        std::ostringstream key;
        key << "price_q" << format_g12(100.0 * q);
        os << kv(key.str(), p);
    }
}

void scenario_labor_shift(RunContext& ctx, double t_tilde, const std::string& name) {
    const auto& cfg = ctx.pc.model;
    const double xi_new =
        ctx.pc.manifest.labor_shift_xi_new.value_or(permanent_shift_share(cfg.tech));
    const auto [y1_al, y2_al] = sector_outputs(cfg.tech, Regime::PostShift, xi_new);

    const SteadyState ssL = steady_state_lq(cfg, ctx.d, ctx.d.y1_lockdown, std::nullopt,
                                            cfg.initial.b0, cfg.initial.h0);
    const Trajectory lock = path(cfg, ctx.d, ssL, cfg.initial.h0, cfg.initial.b0, t_tilde,
                                 ctx.dt, 0.0, std::nullopt, ctx.d.y1_lockdown);
    const auto [h_t, b_t] = lockdown_boundary_state(cfg, ctx.d, t_tilde);
    const SteadyState ss_al = steady_state_lq(cfg, ctx.d, y1_al, y2_al, b_t, h_t);
    const Trajectory after =
        path(cfg, ctx.d, ss_al, h_t, b_t, ctx.horizon, ctx.dt, t_tilde, y2_al, y1_al);

    emit(ctx, fs::path(name) / "lockdown.csv", trajectory_csv(lock));
    emit(ctx, fs::path(name) / "after.csv", trajectory_csv(after));

    const ShiftComparison cmp = compare_steady_states(cfg, ctx.d, cfg.tech.xi, xi_new);
    const ShiftDecomposition dec =
        decompose(cfg, ctx.d, cfg.tech.xi, xi_new, 0.0, h_t - cfg.initial.h0);
    auto& os = ctx.summary;
    os << "\n[scenario " << name << "]\n"
       << kv("kind", "labor_shift") << kv("t_tilde", t_tilde) << kv("xi_new", xi_new)
       << kv("p_at_reopen", after.p.front()) << kv("p_star_bl", cmp.p_star_bl)
       << kv("p_star_al", cmp.p_star_al) << kv("lambda_bl", cmp.lambda_bl)
       << kv("lambda_al", cmp.lambda_al) << kv("I", cmp.I) << kv("lce", dec.lce)
       << kv("sse", dec.sse) << kv("dp_first_order", dec.dp)
       << kv("guarantee_p_star_rises", cmp.guarantee ? "true" : "false")
       << kv("strong_satiation", cmp.strong_satiation ? "true" : "false")
       << kv("converges_from", after.p.front() > cmp.p_star_al ? "above" : "below");
    if (cmp.t_underline_shift) os << kv("t_underline_shift", *cmp.t_underline_shift);
    else if (!cmp.t_underline_missing_reason.empty())
        os << kv("t_underline_shift_undefined", cmp.t_underline_missing_reason);
}

void write_figures(RunContext& ctx) {
    const auto& cfg = ctx.pc.model;
    const auto& m = ctx.pc.manifest;
    const SteadyState ss =
        steady_state_lq(cfg, ctx.d, ctx.d.y1, ctx.d.y2, cfg.initial.b0, cfg.initial.h0);

    // Price and habit path families: the no-lockdown benchmark plus one
    // post-lockdown branch per configured duration.
    const Trajectory nl = path(cfg, ctx.d, ss, cfg.initial.h0, cfg.initial.b0, ctx.horizon,
                               ctx.dt, 0.0, ctx.d.y2, ctx.d.y1);
    std::vector<PointSet> price_sets, habit_sets;
    price_sets.push_back({"p_no_lockdown", nl.t, nl.p});
    habit_sets.push_back({"h_no_lockdown", nl.t, nl.h});
    for (double t_tilde : m.unanticipated_durations) {
        LockdownEpisode ep;
        ep.t_tilde = t_tilde;
        const ScenarioResult res = run_unanticipated(cfg, ctx.d, ep, ctx.horizon, ctx.dt);
        std::ostringstream tag;
        tag << "t" << format_g12(t_tilde);
        const Trajectory& lock = res.segments[0].second;
        const Trajectory& after = res.segments[1].second;
        PointSet ph;
        ph.name = "h_lockdown_" + tag.str();
        ph.x = lock.t;
        ph.y = lock.h;
        ph.x.insert(ph.x.end(), after.t.begin() + 1, after.t.end());
        ph.y.insert(ph.y.end(), after.h.begin() + 1, after.h.end());
        habit_sets.push_back(std::move(ph));
        price_sets.push_back({"p_after_" + tag.str(), after.t, after.p});
    }
    // The viability floor as a flat reference line.
    price_sets.push_back(
        {"p_min", {nl.t.front(), nl.t.back()}, {ctx.d.thresholds.p_min, ctx.d.thresholds.p_min}});
    emit(ctx, fs::path("figures") / "price_paths.csv", point_sets_csv("t", price_sets));
    emit(ctx, fs::path("figures") / "habit_paths.csv", point_sets_csv("t", habit_sets));

    if (!m.unanticipated_durations.empty()) {
        const double t_tilde = m.unanticipated_durations.front();
        LockdownEpisode ep;
        ep.t_tilde = t_tilde;
        const ScenarioResult res = run_unanticipated(cfg, ctx.d, ep, ctx.horizon, ctx.dt);
        const Trajectory& after = res.segments[1].second;
        PointSet dev;
        dev.name = "p_pct_deviation";
        dev.x = after.t;
        for (double pv : after.p) dev.y.push_back(100.0 * (pv - ss.p_star) / ss.p_star);
        emit(ctx, fs::path("figures") / "price_deviation.csv", point_sets_csv("t", {dev}));

        // Demand schedules before the lockdown and at the reopening, with the
        // vertical supply truncated at the viability floor.
        FigureData before = demand_supply_snapshot(cfg, ctx.d, 0.0, ss.h_star);
        FigureData at_reopen = demand_supply_snapshot(cfg, ctx.d, t_tilde, res.h_at_reopen);
        std::vector<PointSet> ds;
        before.sets[0].name = "p_demand_before";
        at_reopen.sets[0].name = "p_demand_at_reopen";
        ds.push_back(before.sets[0]);
        ds.push_back(at_reopen.sets[0]);
        ds.push_back(before.sets[1]);  // supply is unchanged by the lockdown
        emit(ctx, fs::path("figures") / "demand_supply.csv", point_sets_csv("c2", ds));
    }
}

}  // namespace

RunArtifacts run(const ParsedConfig& pc) {
    RunArtifacts art;
    try {
        const ModelDerived d = derive(pc.model);
        RunContext ctx{pc,
                       d,
                       pc.manifest.horizon.value_or(default_horizon(d)),
                       pc.manifest.dt,
                       fs::path(pc.manifest.out_dir),
                       {},
                       &art.files_written};

        ctx.summary << "[meta]\n"
                    << kv("config", pc.manifest.config_path) << kv("dt", ctx.dt)
                    << kv("horizon", ctx.horizon);
        {
            auto& os = ctx.summary;
            os << "\n[derived]\n"
               << kv("y1", d.y1) << kv("y2", d.y2) << kv("y1_lockdown", d.y1_lockdown)
               << kv("psi1", d.sd.psi1) << kv("psi2", d.sd.psi2)
               << kv("addiction_factor", d.sd.addiction_factor) << kv("m0", d.m0_two)
               << kv("m1", d.m1) << kv("sse_num", d.sse_num);
            const auto& th = d.thresholds;
            os << "\n[thresholds]\n"
               << kv("a_c1h_bar", th.a_c1h_bar) << kv("a_c1_lower", th.a_c1_lower)
               << kv("a_c2h_bar", th.a_c2h_bar) << kv("b0_lower", th.b0_lower)
               << kv("b0_upper", th.b0_upper) << kv("a_c2_lower", th.a_c2_lower)
               << kv("h0_lower", th.h0_lower) << kv("p_min", th.p_min);
        }

        if (pc.manifest.no_lockdown) scenario_no_lockdown(ctx);
        if (pc.manifest.no_habits) scenario_no_habits(ctx);
        for (double t_tilde : pc.manifest.unanticipated_durations) {
            std::ostringstream name;
            name << "unanticipated_t";
            std::string tag = format_g12(t_tilde);
            for (auto& chr : tag)
                if (chr == '.') chr = 'p';
            name << tag;
            scenario_unanticipated(ctx, t_tilde, name.str());
        }
        if (!pc.manifest.anticipated_T.empty() || !pc.manifest.random_delta.empty()) {
            const TwoStageSolver solver(pc.model, d);
            for (double T : pc.manifest.anticipated_T) {
                std::string tag = format_g12(T);
                for (auto& chr : tag)
                    if (chr == '.') chr = 'p';
                scenario_anticipated(ctx, solver, T, "anticipated_T" + tag);
            }
            for (double delta : pc.manifest.random_delta) {
                std::string tag = format_g12(delta);
                for (auto& chr : tag)
                    if (chr == '.') chr = 'p';
                scenario_random(ctx, solver, delta, "random_delta" + tag);
            }
        }
        if (pc.manifest.labor_shift) {
            for (double t_tilde : pc.manifest.unanticipated_durations) {
                std::string tag = format_g12(t_tilde);
                for (auto& chr : tag)
                    if (chr == '.') chr = 'p';
                scenario_labor_shift(ctx, t_tilde, "labor_shift_t" + tag);
            }
        }
        write_figures(ctx);

        const fs::path sp = ctx.out / "summary.txt";
        write_file(sp.string(), ctx.summary.str());
        art.files_written.push_back(sp.string());
        art.summary_path = sp.string();
        art.exit_code = 0;
    } catch (const ScenarioInfeasible& e) {
        art.exit_code = 3;
        art.diagnostic = e.what();
    } catch (const std::exception& e) {
        art.exit_code = 2;
        art.diagnostic = e.what();
    }
    return art;
}

}  // namespace habitsim
