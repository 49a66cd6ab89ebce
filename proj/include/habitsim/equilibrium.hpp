#pragma once

#include <functional>
#include <optional>

#include "habitsim/params.hpp"
#include "habitsim/spectral.hpp"
#include "habitsim/types.hpp"

namespace habitsim {

// Constants shared by every closed-form solution of one configuration.
struct ModelDerived {
    double y1 = 0.0;           // two-sector output of good 1
    double y2 = 0.0;           // two-sector output of good 2
    double y1_lockdown = 0.0;  // good-1 output with sector 2 idle and labor reallocated
    SpectralData sd;
    double G = 0.0;        // phi(psi1-r) / ((phi+r) psi1); maps wealth flow F to h*
    double k = 0.0;        // r(phi+psi1) / (phi(psi1-r)); weight of h0 inside F
    double bcoef = 0.0;    // (phi+psi1) / (phi(r-psi1)); asset deviation per habit deviation
    double m1 = 0.0;       // slope of lambda in F
    double m0_two = 0.0;   // intercept of lambda, both sectors active
    double m0_lock = 0.0;  // intercept of lambda, sector 2 idle (no c2 terms)
    double sse_num = 0.0;  // (phi+psi1) a_c1c2 + phi a_c2h
    Thresholds thresholds;

    double wealth_flow(double b0, double h0, double y1use) const {
        return /*r*/ k_r * b0 + y1use + k * h0;
    }
    double sse(double lambda) const { return sse_num / (k_phi * lambda); }

    double k_r = 0.0;    // copy of r for the helpers above
    double k_phi = 0.0;  // copy of phi
};

// Validates the configuration, requires the saddle regime, and precomputes
// the shared constants.  Throws ConfigError / RestrictionError.
ModelDerived derive(const ModelConfig& cfg);

// Closed-form steady state for given sector outputs.  Pass y2use = nullopt
// for a regime with sector 2 idle (p_star and the c2 channel are omitted).
// Throws RestrictionError naming the failed threshold for a two-sector
// regime whose restrictions fail (saddle, m0 > 0, b0 range).
SteadyState steady_state_lq(const ModelConfig& cfg, const ModelDerived& d, double y1use,
                            std::optional<double> y2use, double b0, double h0);

// Marginal-utility callbacks for the general (non-quadratic) steady state.
// Arguments are (c1, c2, h).
struct MarginalUtility {
    std::function<double(double, double, double)> u_c1;
    std::function<double(double, double, double)> u_c2;
    std::function<double(double, double, double)> u_h;
    std::function<double(double, double, double)> u_c1c1;
    std::function<double(double, double, double)> u_c1h;
    std::function<double(double, double, double)> u_hh;
};

struct GeneralSteadyState {
    SteadyState ss;
    int sign_changes = 0;     // sign changes of the residual found on the bracket
    bool non_unique = false;  // more than one sign change detected
};

// Root-bracketed steady state for arbitrary utilities: solves the stationarity
// conditions jointly with the asset-transversality pin-down by bisection on h
// over [h_lo, h_hi].  Residual tolerance 1e-12.  Throws NoBracketError when the
// residual does not change sign on the interval.
GeneralSteadyState steady_state_general(const MarginalUtility& mu, const ModelConfig& cfg,
                                        double y1use, double y2use, double b0, double h0,
                                        double h_lo, double h_hi);

// Closed-form saddle path from (h0, b0) written on a uniform grid starting at
// t_start.  Series are analytic evaluations, not ODE integrations.
Trajectory path(const ModelConfig& cfg, const ModelDerived& d, const SteadyState& ss,
                double h0, double b0, double horizon, double dt, double t_start = 0.0,
                std::optional<double> y2use = std::nullopt, double y1use = std::nan(""));

// Habit-free benchmark: requires all habit coefficients to be zero.  With
// r = rho consumption is the permanent-income level r b0 + y1 and assets stay
// at b0, so a lockdown leaves no trace after it ends.
Trajectory no_habits_path(const ModelConfig& cfg, double b0, double horizon, double dt,
                          double y1use, std::optional<double> y2use, double t_start = 0.0);

// Per-type state for the two-worker-type aggregation identity.
struct TypeState {
    double c1 = 0.0;
    double c2 = 0.0;
    double h = 0.0;
    double lambda = 0.0;  // must be > 0
};

// Aggregate good-2 price from per-type states: the one-agent price relation
// evaluated at share-weighted aggregates with lambda = lambda1 + lambda2.
double aggregate_price_identity(const LQUtilityParams& u, const TypeState& type1,
                                const TypeState& type2, double xi);

// Default horizon: ten e-folds of the stable mode.
double default_horizon(const ModelDerived& d);

}  // namespace habitsim
