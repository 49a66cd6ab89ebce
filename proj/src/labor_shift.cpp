#include "habitsim/labor_shift.hpp"

#include <cmath>

#include "habitsim/errors.hpp"

namespace habitsim {

namespace {

double lambda_at_xi(const ModelConfig& cfg, const ModelDerived& d, double xi) {
    const auto& u = cfg.utility;
    const double phi = cfg.household.phi, rho = cfg.household.rho;
    const double y1 = std::pow(xi * cfg.tech.lbar, cfg.tech.alpha);
    const double y2 = std::pow((1.0 - xi) * cfg.tech.lbar, cfg.tech.alpha);
    const double m0 =
        u.a_c1 + (phi * u.a_h + ((phi + rho) * u.a_c1c2 + phi * u.a_c2h) * y2) / (phi + rho);
    return m0 + d.m1 * d.wealth_flow(cfg.initial.b0, cfg.initial.h0, y1);
}

}  // namespace

double price_at(const ModelConfig& cfg, const ModelDerived& d, double xi, double h) {
    const auto& u = cfg.utility;
    const double phi = cfg.household.phi;
    const double y2 = std::pow((1.0 - xi) * cfg.tech.lbar, cfg.tech.alpha);
    const double lambda = lambda_at_xi(cfg, d, xi);
    return (phi * (u.a_c2 + u.a_c2c2 * y2) + d.sse_num * h) / (phi * lambda);
}

ShiftDecomposition decompose(const ModelConfig& cfg, const ModelDerived& d, double xi_old,
                             double xi_new, double t, double dh) {
    const auto& u = cfg.utility;
    const double phi = cfg.household.phi, rho = cfg.household.rho;
    const double alpha = cfg.tech.alpha, lbar = cfg.tech.lbar;

    ShiftDecomposition out;
    out.d_xi = xi_new - xi_old;
    out.dh = dh;
    out.dy1_dxi = alpha * lbar * std::pow(xi_old * lbar, alpha - 1.0);
    out.dy2_dxi = -alpha * lbar * std::pow((1.0 - xi_old) * lbar, alpha - 1.0);

    const double lambda = lambda_at_xi(cfg, d, xi_old);
    const double p = price_at(cfg, d, xi_old, cfg.initial.h0);
    out.sse = d.sse_num / (phi * lambda);

    double lce = (u.a_c2c2 * out.dy2_dxi -
                  p * (u.a_c1c2 + phi / (phi + rho) * u.a_c2h) * out.dy2_dxi -
                  p * d.m1 * out.dy1_dxi) /
                 lambda;
    if (t > 0.0) {
        // After the reopening the composition change also feeds the habit
        // target; the channel phases in at the stable rate.
        lce += out.sse * (1.0 - std::exp(d.sd.psi1 * t)) * d.G * out.dy1_dxi;
    }
    out.lce = lce;
    out.dp = out.lce * out.d_xi + out.sse * dh;
    return out;
}

ShiftComparison compare_steady_states(const ModelConfig& cfg, const ModelDerived& d,
                                      double xi_old, double xi_new,
                                      double strong_satiation_margin) {
    const auto& u = cfg.utility;
    const double phi = cfg.household.phi, rho = cfg.household.rho;
    if (!(xi_old > 0.0 && xi_old < 1.0 && xi_new > 0.0 && xi_new < 1.0))
        throw ConfigError("compare_steady_states: shares must lie in (0,1)");

    const double y1_bl = std::pow(xi_old * cfg.tech.lbar, cfg.tech.alpha);
    const double y2_bl = std::pow((1.0 - xi_old) * cfg.tech.lbar, cfg.tech.alpha);
    const double y1_al = std::pow(xi_new * cfg.tech.lbar, cfg.tech.alpha);
    const double y2_al = std::pow((1.0 - xi_new) * cfg.tech.lbar, cfg.tech.alpha);

    ShiftComparison out;
    {
        const auto& u2 = cfg.utility;
        const double m0_bl = u2.a_c1 + (phi * u2.a_h +
                                        ((phi + rho) * u2.a_c1c2 + phi * u2.a_c2h) * y2_bl) /
                                           (phi + rho);
        const double m0_al = u2.a_c1 + (phi * u2.a_h +
                                        ((phi + rho) * u2.a_c1c2 + phi * u2.a_c2h) * y2_al) /
                                           (phi + rho);
        const double F_bl = d.wealth_flow(cfg.initial.b0, cfg.initial.h0, y1_bl);
        const double F_al = d.wealth_flow(cfg.initial.b0, cfg.initial.h0, y1_al);
        out.h_star_bl = d.G * F_bl;
        out.h_star_al = d.G * F_al;
        out.lambda_bl = m0_bl + d.m1 * F_bl;
        out.lambda_al = m0_al + d.m1 * F_al;
        out.p_star_bl =
            (u2.a_c2 + u2.a_c2c2 * y2_bl + (u2.a_c1c2 + u2.a_c2h) * out.h_star_bl) / out.lambda_bl;
        out.p_star_al =
            (u2.a_c2 + u2.a_c2c2 * y2_al + (u2.a_c1c2 + u2.a_c2h) * out.h_star_al) / out.lambda_al;
    }

    // The lockdown target coincides with the new-composition target when the
    // reallocated share stays put, but compute it from the lockdown output so
    // explicit xi_new values are also covered.
    const SteadyState ssL =
        steady_state_lq(cfg, d, d.y1_lockdown, std::nullopt, cfg.initial.b0, cfg.initial.h0);
    out.I = (cfg.initial.h0 - ssL.h_star) * out.lambda_bl -
            (cfg.initial.h0 - out.h_star_bl) * out.lambda_al;

    const bool cond52 = u.a_c1c2 > 0.0 && u.a_c2h > -u.a_c1c2 && u.a_c2 > -u.a_c2c2 * y2_bl;
    const bool cond53 = u.a_c1c2 < 0.0 && u.a_c2h > -((phi + rho) / phi) * u.a_c1c2 &&
                        u.a_c2 > -u.a_c2c2 * y2_bl;
    if (cond52 || cond53) out.guarantee = ShiftGuarantee::PStarRises;
    out.strong_satiation =
        u.a_c2h < -((phi + rho) / phi) * u.a_c1c2 - strong_satiation_margin;

    const double log_arg1 = (out.p_star_al - out.p_star_bl) * phi * out.lambda_bl * out.lambda_al;
    const double log_arg2 = -d.sse_num * out.I;
    if (log_arg1 > 0.0 && log_arg2 > 0.0) {
        out.t_underline_shift = (std::log(log_arg1) - std::log(log_arg2)) / d.sd.psi1;
    } else {
        out.t_underline_missing_reason =
            log_arg1 <= 0.0 ? "p*_AL does not exceed p*_BL" : "-sse_num * I is not positive";
    }
    return out;
}

}  // namespace habitsim
