#pragma once

#include <optional>
#include <vector>

#include "habitsim/equilibrium.hpp"

namespace habitsim {

// v(b,h) = A0 + Ab b + Ah h + A2b b^2 + A2h h^2 + Abh b h, the infinite-
// horizon two-sector value as a function of the starting state.
struct QuadraticValueFunction {
    double A0 = 0.0, Ab = 0.0, Ah = 0.0, A2b = 0.0, A2h = 0.0, Abh = 0.0;
    double fit_residual = 0.0;  // max abs residual at the cross-validation points

    double value(double b, double h) const {
        return A0 + Ab * b + Ah * h + A2b * b * b + A2h * h * h + Abh * b * h;
    }
    double vb(double b, double h) const { return Ab + 2.0 * A2b * b + Abh * h; }
    double vh(double b, double h) const { return Ah + 2.0 * A2h * h + Abh * b; }
};

// Exact discounted objective of the two-sector economy started at (b,h),
// evaluated along the closed-form optimal path.  The interpolation points
// (and anything wanting the truth directly) use this.
double after_lockdown_value(const ModelConfig& cfg, const ModelDerived& d, double b, double h);

// Quadratic coefficients by exact 6-point interpolation of the integrated
// objective, cross-validated at 6 additional points.  (b_scale, h_scale)
// set the interpolation stencil spread around the configured initial state.
QuadraticValueFunction after_value_function(const ModelConfig& cfg, const ModelDerived& d,
                                            double b_scale = 1.0, double h_scale = 0.25);

// Anticipated lockdown of known length T, solved as a two-stage problem:
// a finite-horizon stage with the quadratic continuation value, then the
// closed-form two-sector path from the stage boundary.
struct TwoStageSolution {
    Trajectory during_segment;  // [0, T]
    Trajectory after_segment;   // [T, T + horizon]
    double bT = 0.0;            // assets at the reopening
    double hT = 0.0;            // habits at the reopening
    double muT = 0.0;           // habit co-state at the reopening
    double p_reopen = 0.0;      // two-sector price posted at T
    SteadyState ss_after;       // steady state of the post-reopening path

    // During-stage constants: the stationary pair under the constant shadow
    // price, the shadow price itself, and the modal coefficients of the
    // asset path b(t) = e^{rt} b0 + A(e^{rt}-1) + B(e^{psi1 t}-e^{rt}) + C(e^{psi2 t}-e^{rt}).
    double h_star_ts_l = 0.0;
    double mu_star_ts_l = 0.0;
    double lambda_ts_l = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;        // unstable-mode weight in h(t); D_hat = D e^{psi2 T} is the stable unknown
    double D_hat = 0.0;
};

// Reuses one value function across many horizons.
class TwoStageSolver {
  public:
    TwoStageSolver(const ModelConfig& cfg, const ModelDerived& d);

    // Throws RestrictionError when the terminal linear system is singular
    // (message carries the condition estimate).
    TwoStageSolution solve(double T, double horizon, double dt) const;

    // Reopening price only (no trajectory assembly); valid=false when the
    // post-reopening shadow price is not positive (model leaves its domain).
    struct Reopen {
        double p = 0.0;
        double lambda_after = 0.0;
        bool valid = false;
    };
    Reopen reopen_price(double T) const;

    const QuadraticValueFunction& value_function() const { return vfn_; }

  private:
    ModelConfig cfg_;
    ModelDerived d_;
    QuadraticValueFunction vfn_;
};

struct QuadratureSpec {
    double abs_tol = 1e-6;          // absolute tolerance on the integral
    double truncation_eps = 1e-10;  // tail mass cut: integrate while e^{-delta s} >= eps
    int max_depth = 30;
};

struct ExpectedPriceReport {
    double expected_price = 0.0;    // E[p(tau)] over the integrable domain
    double abs_error_estimate = 0.0;
    bool converged = false;
    double s_max = 0.0;             // upper integration limit actually used
    double truncated_mass = 0.0;    // exponential mass beyond s_max
    std::optional<double> domain_exit_s;  // first duration where the model leaves its domain
    double p_sample_min = 0.0;      // envelope of the sampled reopening prices
    double p_sample_max = 0.0;
    long evaluations = 0;
    // Realized-price quantiles from the exponential duration law.
    std::vector<std::pair<double, double>> quantiles;  // (probability, price)
};

// E[p(tau)] = integral of delta e^{-delta s} p_reopen(s) ds by adaptive
// Simpson quadrature with compensated accumulation.  When the reopening
// solution leaves the model's domain at some duration, integration stops
// there and the excluded mass is reported.
ExpectedPriceReport expected_price_random(const TwoStageSolver& solver, double delta,
                                          const QuadratureSpec& spec = {});

}  // namespace habitsim
