#include "habitsim/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "habitsim/errors.hpp"

namespace habitsim {

namespace {

// Uniform grid from t_start to t_start + horizon with step dt, endpoint included.
std::vector<double> time_grid(double t_start, double horizon, double dt) {
    if (!(dt > 0.0)) throw ConfigError("grid: dt must be positive");
    if (!(horizon > 0.0)) throw ConfigError("grid: horizon must be positive");
    const auto n = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
    std::vector<double> t;
    t.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) t.push_back(t_start + static_cast<double>(i) * dt);
    if (t.back() < t_start + horizon - 1e-12 * std::max(1.0, horizon))
        t.push_back(t_start + horizon);
    return t;
}

}  // namespace

ModelDerived derive(const ModelConfig& cfg) {
    validate_config(cfg);
    ModelDerived d;
    const auto& u = cfg.utility;
    const auto& hh = cfg.household;

    auto [y1, y2] = sector_outputs(cfg.tech, Regime::TwoSector);
    d.y1 = y1;
    d.y2 = y2;
    d.y1_lockdown = sector_outputs(cfg.tech, Regime::Lockdown).first;

    d.sd = eigenvalues(u.a_c1c1, u.a_c1h, u.a_hh, hh.phi, hh.rho);
    if (d.sd.regime != DynamicRegime::SaddleReal)
        throw RestrictionError(
            "derive: the habit/co-state system is not in the saddle regime "
            "(a_c1h >= a_c1h_bar); equilibrium construction needs a stable mode");

    const double phi = hh.phi, rho = hh.rho, r = hh.r, psi1 = d.sd.psi1;
    d.k_r = r;
    d.k_phi = phi;
    d.G = phi * (psi1 - r) / ((phi + r) * psi1);
    d.k = r * (phi + psi1) / (phi * (psi1 - r));
    d.bcoef = (phi + psi1) / (phi * (r - psi1));
    const double Q = (phi + rho) * u.a_c1c1 + (rho + 2.0 * phi) * u.a_c1h + phi * u.a_hh;
    d.m1 = d.G * Q / (phi + rho);
    d.m0_two = u.a_c1 + (phi * u.a_h + ((phi + rho) * u.a_c1c2 + phi * u.a_c2h) * y2) / (phi + rho);
    d.m0_lock = u.a_c1 + phi * u.a_h / (phi + rho);
    d.sse_num = (phi + psi1) * u.a_c1c2 + phi * u.a_c2h;
    d.thresholds = compute_thresholds(cfg, psi1);
    return d;
}

double default_horizon(const ModelDerived& d) { return 10.0 / std::fabs(d.sd.psi1); }

SteadyState steady_state_lq(const ModelConfig& cfg, const ModelDerived& d, double y1use,
                            std::optional<double> y2use, double b0, double h0) {
    const auto& u = cfg.utility;
    const double phi = cfg.household.phi;
    const bool two_sector = y2use.has_value();

    SteadyState ss;
    ss.m1 = d.m1;
    ss.m0 = two_sector ? d.m0_two : d.m0_lock;

    const double F = d.wealth_flow(b0, h0, y1use);
    ss.h_star = d.G * F;
    ss.c1_star = ss.h_star;
    ss.b_star = (ss.h_star - y1use) / d.k_r;
    ss.lambda = ss.m0 + ss.m1 * F;

    if (two_sector) {
        // Restrictions guaranteeing h* > 0 and lambda > 0 for this regime.
        if (!(u.a_c1h < d.thresholds.a_c1h_bar))
            throw RestrictionError("steady_state_lq: a_c1h >= a_c1h_bar (saddle condition)");
        if (!(u.a_c1 > d.thresholds.a_c1_lower))
            throw RestrictionError("steady_state_lq: a_c1 <= a_c1_lower (m0 would not be positive)");
        const double b_lo = -y1use / d.k_r - d.bcoef * h0;
        const double b_hi = b_lo - ss.m0 / (d.k_r * ss.m1);
        if (!(b0 > b_lo))
            throw RestrictionError("steady_state_lq: b0 <= b0_lower (h* would not be positive)");
        if (!(b0 < b_hi))
            throw RestrictionError("steady_state_lq: b0 >= b0_upper (lambda would not be positive)");
        const double y2v = *y2use;
        ss.p_star = (u.a_c2 + u.a_c2c2 * y2v + (u.a_c1c2 + u.a_c2h) * ss.h_star) / ss.lambda;
        ss.mu_star =
            (ss.lambda - u.a_c1 - (u.a_c1c1 + u.a_c1h) * ss.h_star - u.a_c1c2 * y2v) / phi;
        const double p_min = cfg.tech.tau == 0.0
                                 ? 0.0
                                 : cfg.tech.tau / ((1.0 - cfg.tech.alpha) * y2v);
        ss.sector2_viable = ss.p_star >= p_min;
    } else {
        ss.p_star = std::nan("");
        ss.mu_star = (ss.lambda - u.a_c1 - (u.a_c1c1 + u.a_c1h) * ss.h_star) / phi;
        ss.sector2_viable = false;
    }
    return ss;
}

GeneralSteadyState steady_state_general(const MarginalUtility& mu, const ModelConfig& cfg,
                                        double y1use, double y2use, double b0, double h0,
                                        double h_lo, double h_hi) {
    if (!(h_lo < h_hi)) throw ConfigError("steady_state_general: empty bracket");
    const double phi = cfg.household.phi, rho = cfg.household.rho, r = cfg.household.r;

    // Stationarity gives lambda(h) directly; the residual is the asset
    // transversality pin-down evaluated with the local stable eigenvalue.
    auto psi1_at = [&](double h) {
        const SpectralData sd = eigenvalues(mu.u_c1c1(h, y2use, h), mu.u_c1h(h, y2use, h),
                                            mu.u_hh(h, y2use, h), phi, rho);
        if (sd.regime != DynamicRegime::SaddleReal)
            throw RestrictionError("steady_state_general: non-saddle curvature inside bracket");
        return sd.psi1;
    };
    auto residual = [&](double h) {
        const double psi1 = psi1_at(h);
        const double coef = (phi + psi1) / (phi * (r - psi1));
        return (b0 - (h - y1use) / r) - coef * (h0 - h);
    };

    constexpr int kScan = 128;
    double prev_h = h_lo, prev_r = residual(h_lo);
    int sign_changes = 0;
    double root_lo = 0.0, root_hi = 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double h = h_lo + (h_hi - h_lo) * static_cast<double>(i) / kScan;
        const double rv = residual(h);
        if (prev_r == 0.0 || (prev_r < 0.0) != (rv < 0.0)) {
            if (sign_changes == 0) {
                root_lo = prev_h;
                root_hi = h;
            }
            ++sign_changes;
        }
        prev_h = h;
        prev_r = rv;
    }
    if (sign_changes == 0)
        throw NoBracketError("steady_state_general: residual does not change sign on the bracket");

    double lo = root_lo, hi = root_hi;
    double flo = residual(lo);
    double root = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        root = 0.5 * (lo + hi);
        const double fm = residual(root);
        if (std::fabs(fm) < 1e-12 || (hi - lo) < 1e-15 * std::max(1.0, std::fabs(root))) break;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = root;
        } else {
            lo = root;
            flo = fm;
        }
    }

    GeneralSteadyState out;
    out.sign_changes = sign_changes;
    out.non_unique = sign_changes > 1;
    SteadyState& ss = out.ss;
    const double h = root;
    ss.h_star = h;
    ss.c1_star = h;
    ss.b_star = (h - y1use) / r;
    ss.mu_star = mu.u_h(h, y2use, h) / (phi + rho);
    ss.lambda = mu.u_c1(h, y2use, h) + phi * ss.mu_star;
    ss.p_star = mu.u_c2(h, y2use, h) / ss.lambda;
    ss.m0 = std::nan("");
    ss.m1 = std::nan("");
    const double p_min =
        cfg.tech.tau == 0.0 ? 0.0 : cfg.tech.tau / ((1.0 - cfg.tech.alpha) * y2use);
    ss.sector2_viable = ss.p_star >= p_min;
    return out;
}

Trajectory path(const ModelConfig& cfg, const ModelDerived& d, const SteadyState& ss, double h0,
                double b0, double horizon, double dt, double t_start,
                std::optional<double> y2use, double y1use) {
    const double psi1 = d.sd.psi1;
    const double afac = d.sd.addiction_factor;
    if (std::isnan(y1use)) y1use = y2use.has_value() ? d.y1 : d.y1_lockdown;

    Trajectory tr;
    tr.t = time_grid(t_start, horizon, dt);
    const std::size_t n = tr.t.size();
    tr.h.resize(n);
    tr.c1.resize(n);
    tr.b.resize(n);
    tr.trade_balance.resize(n);
    const bool two = y2use.has_value();
    if (two) {
        tr.c2.resize(n);
        tr.p.resize(n);
        tr.profit2.resize(n);
    }
    const double sse = two ? d.sse(ss.lambda) : 0.0;
    const double h_dev0 = h0 - ss.h_star;
    (void)b0;  // the asset path follows from the pin-down; b0 must satisfy it
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = h_dev0 * std::exp(psi1 * (tr.t[i] - t_start));
        tr.h[i] = ss.h_star + dev;
        tr.c1[i] = ss.c1_star + afac * dev;
        tr.b[i] = ss.b_star + d.bcoef * dev;
        tr.trade_balance[i] = y1use - tr.c1[i];
        if (two) {
            tr.c2[i] = *y2use;
            tr.p[i] = ss.p_star + sse * dev;
            tr.profit2[i] = tr.p[i] * (1.0 - cfg.tech.alpha) * (*y2use) - cfg.tech.tau;
        }
    }
    return tr;
}

Trajectory no_habits_path(const ModelConfig& cfg, double b0, double horizon, double dt,
                          double y1use, std::optional<double> y2use, double t_start) {
    const auto& u = cfg.utility;
    if (u.a_h != 0.0 || u.a_hh != 0.0 || u.a_c1h != 0.0 || u.a_c2h != 0.0)
        throw ConfigError("no_habits_path: habit coefficients must all be zero");

    const double c1 = cfg.household.r * b0 + y1use;
    const double lambda = u.a_c1 + u.a_c1c1 * c1 + u.a_c1c2 * y2use.value_or(0.0);

    Trajectory tr;
    tr.t = time_grid(t_start, horizon, dt);
    const std::size_t n = tr.t.size();
    tr.h.assign(n, 0.0);
    tr.c1.assign(n, c1);
    tr.b.assign(n, b0);
    tr.trade_balance.assign(n, y1use - c1);
    if (y2use.has_value()) {
        const double p = (u.a_c2 + u.a_c2c2 * (*y2use) + u.a_c1c2 * c1) / lambda;
        tr.c2.assign(n, *y2use);
        tr.p.assign(n, p);
        tr.profit2.assign(n, p * (1.0 - cfg.tech.alpha) * (*y2use) - cfg.tech.tau);
    }
    return tr;
}

double aggregate_price_identity(const LQUtilityParams& u, const TypeState& t1,
                                const TypeState& t2, double xi) {
    if (!(t1.lambda > 0.0) || !(t2.lambda > 0.0))
        throw RestrictionError("aggregate_price_identity: per-type lambda must be positive");
    if (!(xi > 0.0 && xi < 1.0))
        throw ConfigError("aggregate_price_identity: xi must lie in (0,1)");
    const double c1 = xi * t1.c1 + (1.0 - xi) * t2.c1;
    const double c2 = xi * t1.c2 + (1.0 - xi) * t2.c2;
    const double h = xi * t1.h + (1.0 - xi) * t2.h;
    const double lambda = t1.lambda + t2.lambda;
    return (u.a_c2 + u.a_c2c2 * c2 + u.a_c1c2 * c1 + u.a_c2h * h) / lambda;
}

}  // namespace habitsim
