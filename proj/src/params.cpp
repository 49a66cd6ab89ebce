#include "habitsim/params.hpp"

#include <cmath>
#include <sstream>

#include "habitsim/errors.hpp"

namespace habitsim {

ConcavityReport validate_concavity(const LQUtilityParams& u) {
    ConcavityReport r;
    r.own_c1 = u.a_c1c1;
    r.own_c2 = u.a_c2c2;
    r.own_h = u.a_hh;
    r.minor_c1h = u.a_c1c1 * u.a_hh - u.a_c1h * u.a_c1h;
    // Hessian ordered (c1, c2, h).
    const double a = u.a_c1c1, b = u.a_c1c2, c = u.a_c1h;
    const double e = u.a_c2c2, f = u.a_c2h, g = u.a_hh;
    r.hessian_det = a * (e * g - f * f) - b * (b * g - f * c) + c * (b * f - e * c);
    r.own_terms_ok = a < 0.0 && e < 0.0 && g < 0.0;
    r.minor_ok = r.minor_c1h > 0.0;
    r.det_ok = r.hessian_det < 0.0;
    r.pass = r.own_terms_ok && r.minor_ok && r.det_ok;
    return r;
}

std::pair<double, double> sector_outputs(const Technology& t, Regime regime, double xi_new) {
    switch (regime) {
        case Regime::TwoSector:
            return {std::pow(t.xi * t.lbar, t.alpha), std::pow((1.0 - t.xi) * t.lbar, t.alpha)};
        case Regime::Lockdown:
            return {std::pow((t.xi + t.a_realloc * (1.0 - t.xi)) * t.lbar, t.alpha), 0.0};
        case Regime::PostShift: {
            if (!std::isfinite(xi_new) || xi_new <= 0.0 || xi_new >= 1.0)
                throw ConfigError("sector_outputs: PostShift requires xi_new in (0,1)");
            return {std::pow(xi_new * t.lbar, t.alpha),
                    std::pow((1.0 - xi_new) * t.lbar, t.alpha)};
        }
    }
    throw ConfigError("sector_outputs: unknown regime");
}

double permanent_shift_share(const Technology& t) {
    return t.xi + t.a_realloc * (1.0 - t.xi);
}

std::pair<double, double> wages_and_profits(double p_i, double ell_i, const Technology& t) {
    const double w = p_i * t.alpha * std::pow(ell_i, t.alpha - 1.0);
    const double pi = p_i * (1.0 - t.alpha) * std::pow(ell_i, t.alpha) - t.tau;
    return {w, pi};
}

Thresholds compute_thresholds(const ModelConfig& cfg, double psi1) {
    const auto& u = cfg.utility;
    const auto& hh = cfg.household;
    const double phi = hh.phi, rho = hh.rho, r = hh.r;
    const auto [y1, y2] = sector_outputs(cfg.tech, Regime::TwoSector);

    Thresholds th;
    th.a_c1h_bar = -((phi + rho) * u.a_c1c1 + phi * u.a_hh) / (rho + 2.0 * phi);
    if (!(u.a_c1h < th.a_c1h_bar))
        throw RestrictionError("compute_thresholds: a_c1h >= a_c1h_bar, saddle condition fails");
    if (!(psi1 < 0.0))
        throw RestrictionError("compute_thresholds: psi1 must be negative (saddle regime)");

    th.a_c1_lower =
        -(phi * u.a_h + ((phi + rho) * u.a_c1c2 + phi * u.a_c2h) * y2) / (phi + rho);
    th.a_c2h_bar = -((phi + psi1) / phi) * u.a_c1c2;
    th.b0_lower = -y1 / r + (phi + psi1) / (phi * (r - psi1)) * cfg.initial.h0;

    const double m0 = u.a_c1 - th.a_c1_lower;
    const double Q = (phi + rho) * u.a_c1c1 + (rho + 2.0 * phi) * u.a_c1h + phi * u.a_hh;
    const double G = phi * (psi1 - r) / ((phi + r) * psi1);
    const double m1 = G * Q / (phi + rho);
    th.b0_upper = th.b0_lower - m0 / (r * m1);
    th.h0_lower = phi * (r - psi1) / (r * (phi + psi1)) * (y1 + m0 / m1);

    const double F = r * cfg.initial.b0 + y1 +
                     r * (phi + psi1) / (phi * (psi1 - r)) * cfg.initial.h0;
    th.a_c2_lower = -u.a_c2c2 * y2 + cfg.tech.tau * m0 / ((1.0 - cfg.tech.alpha) * y2) +
                    (cfg.tech.tau * m1 / ((1.0 - cfg.tech.alpha) * y2) -
                     phi * (psi1 - r) * (u.a_c1c2 + u.a_c2h) / ((phi + r) * psi1)) *
                        F;
    th.p_min = cfg.tech.tau == 0.0 ? 0.0 : cfg.tech.tau / ((1.0 - cfg.tech.alpha) * y2);
    return th;
}

namespace {
void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}
}  // namespace

void validate_config(const ModelConfig& cfg) {
    const auto& t = cfg.tech;
    require(t.alpha > 0.0 && t.alpha < 1.0, "technology.alpha must lie in (0,1)");
    require(t.xi > 0.0 && t.xi < 1.0, "technology.xi must lie in (0,1)");
    require(t.lbar > 0.0, "technology.lbar must be positive");
    require(t.a_realloc > 0.0 && t.a_realloc < 1.0, "technology.a_realloc must lie in (0,1)");
    require(t.tau >= 0.0, "technology.tau must be non-negative");

    const auto& hh = cfg.household;
    require(hh.phi > 0.0, "household.phi must be positive");
    require(hh.rho > 0.0, "household.rho must be positive");
    require(hh.r == hh.rho, "household.r must equal household.rho (maintained assumption)");

    require(cfg.initial.h0 > 0.0, "initial.h0 must be positive");

    const ConcavityReport cr = validate_concavity(cfg.utility);
    if (!cr.pass) {
        std::ostringstream os;
        os << "utility coefficients are not jointly concave:";
        if (!cr.own_terms_ok) os << " own second derivatives must be negative;";
        if (!cr.minor_ok) os << " a_c1c1*a_hh - a_c1h^2 = " << cr.minor_c1h << " <= 0;";
        if (!cr.det_ok) os << " Hessian det = " << cr.hessian_det << " >= 0;";
        throw ConfigError(os.str());
    }
}

}  // namespace habitsim
