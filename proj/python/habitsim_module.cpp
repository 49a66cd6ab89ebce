#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "habitsim/anticipated.hpp"
#include "habitsim/config.hpp"
#include "habitsim/labor_shift.hpp"
#include "habitsim/lockdown.hpp"
#include "habitsim/runner.hpp"

namespace py = pybind11;
using namespace habitsim;

namespace {

py::dict to_dict(const Thresholds& th) {
    py::dict d;
    d["a_c1h_bar"] = th.a_c1h_bar;
    d["a_c1_lower"] = th.a_c1_lower;
    d["a_c2h_bar"] = th.a_c2h_bar;
    d["b0_lower"] = th.b0_lower;
    d["b0_upper"] = th.b0_upper;
    d["a_c2_lower"] = th.a_c2_lower;
    d["h0_lower"] = th.h0_lower;
    d["p_min"] = th.p_min;
    return d;
}

py::dict to_dict(const SteadyState& ss) {
    py::dict d;
    d["h_star"] = ss.h_star;
    d["c1_star"] = ss.c1_star;
    d["b_star"] = ss.b_star;
    d["p_star"] = ss.p_star;
    d["lambda"] = ss.lambda;
    d["mu_star"] = ss.mu_star;
    d["m0"] = ss.m0;
    d["m1"] = ss.m1;
    d["sector2_viable"] = ss.sector2_viable;
    return d;
}

py::dict to_dict(const Trajectory& tr) {
    py::dict d;
    d["t"] = tr.t;
    d["h"] = tr.h;
    d["c1"] = tr.c1;
    d["c2"] = tr.c2;
    d["b"] = tr.b;
    d["p"] = tr.p;
    d["trade_balance"] = tr.trade_balance;
    d["profit2"] = tr.profit2;
    return d;
}

py::dict to_dict(const PentUpMetrics& m) {
    py::dict d;
    d["sse"] = m.sse;
    d["dc2"] = m.dc2;
    d["dc2_pct"] = m.dc2_pct;
    d["dc1_pct"] = m.dc1_pct;
    d["overshoot_pct"] = m.overshoot_pct;
    d["tb_gap"] = m.tb_gap;
    return d;
}

struct Session {
    ParsedConfig pc;
    ModelDerived d;
};

Session make_session(const std::string& text, bool is_path) {
    Session s;
    s.pc = is_path ? load_config_file(text) : load_config_text(text);
    s.d = derive(s.pc.model);
    return s;
}

}  // namespace

PYBIND11_MODULE(habitsim, m) {
    m.doc() = "Two-sector habit-formation economy: closed-form saddle-path equilibria, "
              "lockdown scenario stitching, and policy search";

    py::class_<Session>(m, "Model")
        .def_static("from_file", [](const std::string& p) { return make_session(p, true); })
        .def_static("from_text", [](const std::string& t) { return make_session(t, false); })
        .def_property_readonly("derived",
                               [](const Session& s) {
                                   py::dict d;
                                   d["y1"] = s.d.y1;
                                   d["y2"] = s.d.y2;
                                   d["y1_lockdown"] = s.d.y1_lockdown;
                                   d["psi1"] = s.d.sd.psi1;
                                   d["psi2"] = s.d.sd.psi2;
                                   d["addiction_factor"] = s.d.sd.addiction_factor;
                                   d["sse_num"] = s.d.sse_num;
                                   d["m0"] = s.d.m0_two;
                                   d["m1"] = s.d.m1;
                                   d["thresholds"] = to_dict(s.d.thresholds);
                                   return d;
                               })
        .def(
            "steady_state",
            [](const Session& s, bool lockdown) {
                const auto& c = s.pc.model;
                return to_dict(lockdown ? steady_state_lq(c, s.d, s.d.y1_lockdown, std::nullopt,
                                                          c.initial.b0, c.initial.h0)
                                        : steady_state_lq(c, s.d, s.d.y1, s.d.y2, c.initial.b0,
                                                          c.initial.h0));
            },
            py::arg("lockdown") = false)
        .def("classify",
             [](const Session& s, double t_tilde) {
                 const Classification cl = classify(s.pc.model, s.d, t_tilde);
                 py::dict d;
                 d["case"] = outcome_case_name(cl.outcome);
                 d["satiation_side"] = cl.satiation_side;
                 if (cl.t_underline) d["t_underline"] = *cl.t_underline;
                 if (!cl.boundary_reason.empty()) d["boundary_reason"] = cl.boundary_reason;
                 return d;
             })
        .def(
            "run_unanticipated",
            [](const Session& s, double t_tilde, double horizon, double dt) {
                LockdownEpisode ep;
                ep.t_tilde = t_tilde;
                const ScenarioResult res = run_unanticipated(
                    s.pc.model, s.d, ep, horizon > 0 ? horizon : default_horizon(s.d), dt);
                py::dict d;
                d["classification"] = outcome_case_name(res.classification.outcome);
                d["reopens"] = res.reopens;
                d["p_at_reopen"] = res.p_at_reopen;
                d["h_at_reopen"] = res.h_at_reopen;
                d["b_at_reopen"] = res.b_at_reopen;
                d["p_min"] = s.d.thresholds.p_min;
                d["pent_up"] = to_dict(res.pent_up);
                d["lockdown_segment"] = to_dict(res.segments[0].second);
                d["after_segment"] = to_dict(res.segments[1].second);
                if (res.policy) {
                    py::dict pol;
                    pol["t_reopen"] = res.policy->t_reopen;
                    pol["duration"] = res.policy->duration;
                    pol["tau_schedule"] = res.policy->tau_schedule;
                    d["policy"] = pol;
                }
                return d;
            },
            py::arg("t_tilde"), py::arg("horizon") = 0.0, py::arg("dt") = 0.01)
        .def("pent_up",
             [](const Session& s, double t_tilde) {
                 return to_dict(pent_up(s.pc.model, s.d, t_tilde));
             })
        .def(
            "solve_two_stage",
            [](const Session& s, double T, double horizon, double dt) {
                const TwoStageSolver solver(s.pc.model, s.d);
                const TwoStageSolution sol =
                    solver.solve(T, horizon > 0 ? horizon : default_horizon(s.d), dt);
                py::dict d;
                d["p_reopen"] = sol.p_reopen;
                d["bT"] = sol.bT;
                d["hT"] = sol.hT;
                d["lambda_ts_l"] = sol.lambda_ts_l;
                d["h_star_ts_l"] = sol.h_star_ts_l;
                d["mu_star_ts_l"] = sol.mu_star_ts_l;
                d["A"] = sol.A;
                d["B"] = sol.B;
                d["C"] = sol.C;
                d["D"] = sol.D;
                d["during_segment"] = to_dict(sol.during_segment);
                d["after_segment"] = to_dict(sol.after_segment);
                d["value_fit_residual"] = solver.value_function().fit_residual;
                return d;
            },
            py::arg("T"), py::arg("horizon") = 0.0, py::arg("dt") = 0.01)
        .def("expected_price",
             [](const Session& s, double delta) {
                 const TwoStageSolver solver(s.pc.model, s.d);
                 const ExpectedPriceReport rep = expected_price_random(solver, delta);
                 py::dict d;
                 d["expected_price"] = rep.expected_price;
                 d["abs_error_estimate"] = rep.abs_error_estimate;
                 d["converged"] = rep.converged;
                 d["s_max"] = rep.s_max;
                 d["truncated_mass"] = rep.truncated_mass;
                 d["p_sample_min"] = rep.p_sample_min;
                 d["p_sample_max"] = rep.p_sample_max;
                 d["quantiles"] = rep.quantiles;
                 if (rep.domain_exit_s) d["domain_exit_s"] = *rep.domain_exit_s;
                 return d;
             })
        .def("compare_steady_states",
             [](const Session& s, double xi_new) {
                 const ShiftComparison cmp =
                     compare_steady_states(s.pc.model, s.d, s.pc.model.tech.xi, xi_new);
                 py::dict d;
                 d["p_star_bl"] = cmp.p_star_bl;
                 d["p_star_al"] = cmp.p_star_al;
                 d["lambda_bl"] = cmp.lambda_bl;
                 d["lambda_al"] = cmp.lambda_al;
                 d["I"] = cmp.I;
                 d["guarantee_p_star_rises"] = cmp.guarantee.has_value();
                 d["strong_satiation"] = cmp.strong_satiation;
                 if (cmp.t_underline_shift) d["t_underline_shift"] = *cmp.t_underline_shift;
                 return d;
             })
        .def("run",
             [](Session& s, const std::string& out_dir) {
                 s.pc.manifest.out_dir = out_dir;
                 const RunArtifacts art = run(s.pc);
                 py::dict d;
                 d["exit_code"] = art.exit_code;
                 d["files_written"] = art.files_written;
                 d["summary_path"] = art.summary_path;
                 d["diagnostic"] = art.diagnostic;
                 return d;
             })
        .def("scenario_names",
             [](const Session& s) { return s.pc.manifest.scenario_names(); });

    m.def("validate_concavity", [](py::dict coeffs) {
        LQUtilityParams u;
        auto get = [&](const char* key) {
            return coeffs.contains(key) ? coeffs[key].cast<double>() : 0.0;
        };
        u.a_c1 = get("a_c1");
        u.a_c2 = get("a_c2");
        u.a_h = get("a_h");
        u.a_c1c1 = coeffs["a_c1c1"].cast<double>();
        u.a_c2c2 = coeffs["a_c2c2"].cast<double>();
        u.a_hh = coeffs["a_hh"].cast<double>();
        u.a_c1c2 = get("a_c1c2");
        u.a_c1h = get("a_c1h");
        u.a_c2h = get("a_c2h");
        const ConcavityReport r = validate_concavity(u);
        py::dict d;
        d["minor_c1h"] = r.minor_c1h;
        d["hessian_det"] = r.hessian_det;
        d["pass"] = r.pass;
        return d;
    });

    m.def("eigenvalues", [](double u_c1c1, double u_c1h, double u_hh, double phi, double rho) {
        const SpectralData sd = eigenvalues(u_c1c1, u_c1h, u_hh, phi, rho);
        py::dict d;
        d["psi1"] = sd.psi1;
        d["psi2"] = sd.psi2;
        d["addiction_factor"] = sd.addiction_factor;
        d["eigvec_ratio"] = sd.eigvec_ratio;
        d["regime"] = sd.regime == DynamicRegime::SaddleReal
                          ? "saddle_real"
                          : (sd.regime == DynamicRegime::PositiveReal ? "positive_real"
                                                                      : "complex_unstable");
        return d;
    });
}
