#include "habitsim/anticipated.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "habitsim/errors.hpp"

namespace habitsim {

double after_lockdown_value(const ModelConfig& cfg, const ModelDerived& d, double b, double h) {
    const auto& u = cfg.utility;
    const double rho = cfg.household.rho, psi1 = d.sd.psi1;
    const double F = d.wealth_flow(b, h, d.y1);
    const double hs = d.G * F;
    const double afac = d.sd.addiction_factor;
    const double dev = h - hs;

    // u along the stable path is quadratic in e^{psi1 t}; integrate term by term.
    const double u_star = u.u(hs, d.y2, hs);
    const double u1 = (u.u_c1(hs, d.y2, hs) * afac + u.u_h(hs, d.y2, hs)) * dev;
    const double u2 =
        (0.5 * u.a_c1c1 * afac * afac + 0.5 * u.a_hh + u.a_c1h * afac) * dev * dev;
    return u_star / rho + u1 / (rho - psi1) + u2 / (rho - 2.0 * psi1);
}

namespace {

// Gaussian elimination with partial pivoting for the tiny dense systems here.
template <int N>
std::array<double, N> solve_linear(std::array<std::array<double, N>, N> A,
                                   std::array<double, N> rhs) {
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        if (std::fabs(A[piv][col]) < 1e-300)
            throw SingularFitError("solve_linear: singular system");
        std::swap(A[col], A[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (int r = col + 1; r < N; ++r) {
            const double f = A[r][col] / A[col][col];
            for (int c = col; c < N; ++c) A[r][c] -= f * A[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<double, N> x{};
    for (int r = N - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < N; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

}  // namespace

QuadraticValueFunction after_value_function(const ModelConfig& cfg, const ModelDerived& d,
                                            double b_scale, double h_scale) {
    const double b0 = cfg.initial.b0, h0 = cfg.initial.h0;
    const double sb = b_scale, sh = h_scale;

    // Unisolvent 6-point stencil plus validation points around (b0, h0).
    const std::array<std::pair<double, double>, 6> fit = {{{0.0, 0.0},
                                                           {1.0, 0.0},
                                                           {0.0, 1.0},
                                                           {-1.0, 0.0},
                                                           {0.0, -1.0},
                                                           {1.0, 1.0}}};
    const std::array<std::pair<double, double>, 6> check = {{{2.0, 0.0},
                                                             {0.0, 2.0},
                                                             {2.0, 1.0},
                                                             {1.0, 2.0},
                                                             {-1.0, 1.0},
                                                             {1.0, -1.0}}};

    std::array<std::array<double, 6>, 6> A{};
    std::array<double, 6> rhs{};
    for (int i = 0; i < 6; ++i) {
        const double b = b0 + fit[i].first * sb;
        const double h = h0 + fit[i].second * sh;
        A[i] = {1.0, b, h, b * b, h * h, b * h};
        rhs[i] = after_lockdown_value(cfg, d, b, h);
    }
    const auto x = solve_linear<6>(A, rhs);

    QuadraticValueFunction v;
    v.A0 = x[0];
    v.Ab = x[1];
    v.Ah = x[2];
    v.A2b = x[3];
    v.A2h = x[4];
    v.Abh = x[5];
    double resid = 0.0;
    for (const auto& [db, dh] : check) {
        const double b = b0 + db * sb;
        const double h = h0 + dh * sh;
        resid = std::max(resid, std::fabs(v.value(b, h) - after_lockdown_value(cfg, d, b, h)));
    }
    v.fit_residual = resid;
    return v;
}

TwoStageSolver::TwoStageSolver(const ModelConfig& cfg, const ModelDerived& d)
    : cfg_(cfg), d_(d), vfn_(after_value_function(cfg, d)) {}

namespace {

// During-stage machinery shared by solve() and reopen_price().  The unstable
// mode is parametrized by its terminal weight D_hat = D e^{psi2 T} so long
// horizons stay well conditioned.
struct DuringStage {
    const ModelConfig& cfg;
    const ModelDerived& d;
    double T;
    double E1, E2, ErT;  // e^{psi1 T}, e^{-psi2 T}, e^{r T}
    double kappa1, kappa2, afac1, afac2;
    double a11, a12, a21, a22, det;  // stationary-pair system in (h*, mu*)

    DuringStage(const ModelConfig& c, const ModelDerived& dd, double horizon)
        : cfg(c), d(dd), T(horizon) {
        const auto& u = cfg.utility;
        const double phi = cfg.household.phi, rho = cfg.household.rho;
        E1 = std::exp(d.sd.psi1 * T);
        E2 = std::exp(-d.sd.psi2 * T);
        ErT = std::exp(cfg.household.r * T);
        kappa1 = -(phi * u.a_c1h + (phi + d.sd.psi1) * u.a_c1c1) / (phi * phi);
        kappa2 = -(phi * u.a_c1h + (phi + d.sd.psi2) * u.a_c1c1) / (phi * phi);
        afac1 = (phi + d.sd.psi1) / phi;
        afac2 = (phi + d.sd.psi2) / phi;
        a11 = u.a_c1c1 + u.a_c1h;
        a12 = phi;
        a21 = u.a_c1h + u.a_hh;
        a22 = -(phi + rho);
        det = a11 * a22 - a12 * a21;
    }

    std::pair<double, double> stationary(double lambda) const {
        const double r1 = lambda - cfg.utility.a_c1;
        const double r2 = -cfg.utility.a_h;
        return {(r1 * a22 - a12 * r2) / det, (a11 * r2 - r1 * a21) / det};
    }

    struct Endpoint {
        double hT, muT, bT;
        double hs, mus, C1, bp, beta1, beta2_hat, K;
    };

    Endpoint endpoint(double lambda, double D_hat) const {
        const double r = cfg.household.r;
        Endpoint e{};
        std::tie(e.hs, e.mus) = stationary(lambda);
        e.C1 = cfg.initial.h0 - e.hs - D_hat * E2;
        e.hT = e.hs + e.C1 * E1 + D_hat;
        e.muT = e.mus + kappa1 * e.C1 * E1 + kappa2 * D_hat;
        e.bp = (e.hs - d.y1_lockdown) / r;
        e.beta1 = afac1 * e.C1 / (r - d.sd.psi1);
        e.beta2_hat = afac2 * D_hat / (r - d.sd.psi2);  // beta2 = beta2_hat e^{-psi2 T}
        e.K = cfg.initial.b0 - e.bp - e.beta1 - e.beta2_hat * E2;
        e.bT = e.K * ErT + e.bp + e.beta1 * E1 + e.beta2_hat;
        return e;
    }
};

}  // namespace

TwoStageSolver::Reopen TwoStageSolver::reopen_price(double T) const {
    const DuringStage st(cfg_, d_, T);
    auto resid = [&](double lambda, double D_hat) -> std::pair<double, double> {
        const auto e = st.endpoint(lambda, D_hat);
        return {lambda - vfn_.vb(e.bT, e.hT), e.muT - vfn_.vh(e.bT, e.hT)};
    };
    const auto r00 = resid(0.0, 0.0);
    const auto r10 = resid(1.0, 0.0);
    const auto r01 = resid(0.0, 1.0);
    const double j11 = r10.first - r00.first, j21 = r10.second - r00.second;
    const double j12 = r01.first - r00.first, j22 = r01.second - r00.second;
    const double det = j11 * j22 - j12 * j21;
    Reopen out;
    if (det == 0.0 || !std::isfinite(det)) return out;
    const double lambda = -(r00.first * j22 - j12 * r00.second) / det;
    const double D_hat = -(j11 * r00.second - r00.first * j21) / det;
    const auto e = st.endpoint(lambda, D_hat);

    const double F = d_.wealth_flow(e.bT, e.hT, d_.y1);
    const double hsAL = d_.G * F;
    const double lamAL = d_.m0_two + d_.m1 * F;
    if (!(lamAL > 0.0) || !std::isfinite(lamAL) || !std::isfinite(e.hT)) return out;
    const auto& u = cfg_.utility;
    const double psAL = (u.a_c2 + u.a_c2c2 * d_.y2 + (u.a_c1c2 + u.a_c2h) * hsAL) / lamAL;
    out.p = psAL + d_.sse(lamAL) * (e.hT - hsAL);
    out.lambda_after = lamAL;
    out.valid = std::isfinite(out.p);
    return out;
}

TwoStageSolution TwoStageSolver::solve(double T, double horizon, double dt) const {
    if (!(T > 0.0)) throw ConfigError("solve_two_stage: T must be positive");
    const DuringStage st(cfg_, d_, T);

    auto resid = [&](double lambda, double D_hat) -> std::pair<double, double> {
        const auto e = st.endpoint(lambda, D_hat);
        return {lambda - vfn_.vb(e.bT, e.hT), e.muT - vfn_.vh(e.bT, e.hT)};
    };
    const auto r00 = resid(0.0, 0.0);
    const auto r10 = resid(1.0, 0.0);
    const auto r01 = resid(0.0, 1.0);
    const double j11 = r10.first - r00.first, j21 = r10.second - r00.second;
    const double j12 = r01.first - r00.first, j22 = r01.second - r00.second;
    const double det = j11 * j22 - j12 * j21;
    const double scale = std::max({std::fabs(j11), std::fabs(j12), std::fabs(j21), std::fabs(j22)});
    if (!(std::fabs(det) > 1e-14 * scale * scale)) {
        std::ostringstream os;
        os << "solve_two_stage: terminal linear system is singular "
           << "(det = " << det << ", condition scale = " << scale << ")";
        throw RestrictionError(os.str());
    }
    const double lambda = -(r00.first * j22 - j12 * r00.second) / det;
    const double D_hat = -(j11 * r00.second - r00.first * j21) / det;
    const auto e = st.endpoint(lambda, D_hat);

    TwoStageSolution sol;
    sol.lambda_ts_l = lambda;
    sol.D_hat = D_hat;
    sol.D = D_hat * st.E2;
    sol.h_star_ts_l = e.hs;
    sol.mu_star_ts_l = e.mus;
    sol.bT = e.bT;
    sol.hT = e.hT;
    sol.muT = e.muT;
    sol.A = -e.bp;
    sol.B = e.beta1;
    sol.C = e.beta2_hat * st.E2;

    // During segment on [0, T].
    Trajectory& tr = sol.during_segment;
    const auto n = static_cast<std::size_t>(std::floor(T / dt + 1e-9));
    tr.t.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) tr.t.push_back(static_cast<double>(i) * dt);
    if (tr.t.back() < T - 1e-12 * std::max(1.0, T)) tr.t.push_back(T);
    const std::size_t m = tr.t.size();
    tr.h.resize(m);
    tr.c1.resize(m);
    tr.b.resize(m);
    tr.trade_balance.resize(m);
    const double r = cfg_.household.r;
    for (std::size_t i = 0; i < m; ++i) {
        const double t = tr.t[i];
        const double e1 = std::exp(d_.sd.psi1 * t);
        const double e2 = std::exp(d_.sd.psi2 * (t - T));  // D e^{psi2 t} = D_hat e^{psi2 (t-T)}
        tr.h[i] = e.hs + e.C1 * e1 + D_hat * e2;
        tr.c1[i] = e.hs + st.afac1 * e.C1 * e1 + st.afac2 * D_hat * e2;
        tr.b[i] = e.K * std::exp(r * t) + e.bp + e.beta1 * e1 + e.beta2_hat * e2;
        tr.trade_balance[i] = d_.y1_lockdown - tr.c1[i];
    }

    // After segment: the closed-form two-sector path from (bT, hT).
    sol.ss_after = steady_state_lq(cfg_, d_, d_.y1, d_.y2, e.bT, e.hT);
    sol.after_segment =
        path(cfg_, d_, sol.ss_after, e.hT, e.bT, horizon, dt, T, d_.y2, d_.y1);
    sol.p_reopen =
        sol.ss_after.p_star + d_.sse(sol.ss_after.lambda) * (e.hT - sol.ss_after.h_star);
    return sol;
}

namespace {

struct KahanSum {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

ExpectedPriceReport expected_price_random(const TwoStageSolver& solver, double delta,
                                          const QuadratureSpec& spec) {
    if (!(delta > 0.0)) throw ConfigError("expected_price_random: delta must be positive");

    ExpectedPriceReport rep;
    rep.p_sample_min = std::numeric_limits<double>::infinity();
    rep.p_sample_max = -std::numeric_limits<double>::infinity();

    double s_max = std::log(1.0 / spec.truncation_eps) / delta;

    // Find where (if anywhere) the reopening solution leaves the model's
    // domain, and truncate the integration there.
    auto valid_at = [&](double s) { return solver.reopen_price(std::max(s, 1e-12)).valid; };
    if (!valid_at(s_max)) {
        double lo = 0.0, hi = s_max;
        if (!valid_at(lo)) {
            rep.domain_exit_s = 0.0;
            rep.truncated_mass = 1.0;
            return rep;
        }
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (valid_at(mid) ? lo : hi) = mid;
        }
        rep.domain_exit_s = lo;
        s_max = lo;
    }
    rep.s_max = s_max;
    rep.truncated_mass = std::exp(-delta * s_max);

    auto f = [&](double s) {
        const auto ro = solver.reopen_price(std::max(s, 1e-12));
        ++rep.evaluations;
        if (ro.valid) {
            rep.p_sample_min = std::min(rep.p_sample_min, ro.p);
            rep.p_sample_max = std::max(rep.p_sample_max, ro.p);
        }
        return delta * std::exp(-delta * s) * ro.p;
    };

    // Adaptive Simpson with compensated panel accumulation.
    KahanSum total;
    KahanSum err;
    struct Frame {
        double a, b, fa, fm, fb, whole;
        int depth;
    };
    std::vector<Frame> stack;
    constexpr int kPanels = 16;
    for (int i = 0; i < kPanels; ++i) {
        const double a = s_max * i / kPanels, b = s_max * (i + 1) / kPanels;
        const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        stack.push_back({a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), spec.max_depth});
    }
    const double tol_density = spec.abs_tol / s_max;
    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        const double m = 0.5 * (fr.a + fr.b);
        const double flm = f(0.5 * (fr.a + m));
        const double frm = f(0.5 * (m + fr.b));
        const double left = (m - fr.a) / 6.0 * (fr.fa + 4.0 * flm + fr.fm);
        const double right = (fr.b - m) / 6.0 * (fr.fm + 4.0 * frm + fr.fb);
        const double diff = left + right - fr.whole;
        if (fr.depth <= 0 || std::fabs(diff) <= 15.0 * tol_density * (fr.b - fr.a)) {
            total.add(left + right + diff / 15.0);
            err.add(std::fabs(diff) / 15.0);
        } else {
            stack.push_back({fr.a, m, fr.fa, flm, fr.fm, left, fr.depth - 1});
            stack.push_back({m, fr.b, fr.fm, frm, fr.fb, right, fr.depth - 1});
        }
    }
    rep.expected_price = total.sum;
    rep.abs_error_estimate = err.sum;
    rep.converged = err.sum <= spec.abs_tol;

    for (const double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        const double s_q = -std::log(1.0 - q) / delta;
        if (s_q <= s_max) {
            const auto ro = solver.reopen_price(std::max(s_q, 1e-12));
            if (ro.valid) rep.quantiles.emplace_back(q, ro.p);
        }
    }
    return rep;
}

}  // namespace habitsim
