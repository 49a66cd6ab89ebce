#pragma once

#include <utility>

#include "habitsim/types.hpp"

namespace habitsim {

// Concavity diagnostics for the quadratic utility.
struct ConcavityReport {
    double own_c1 = 0.0;        // a_c1c1 (needs < 0)
    double own_c2 = 0.0;        // a_c2c2 (needs < 0)
    double own_h = 0.0;         // a_hh   (needs < 0)
    double minor_c1h = 0.0;     // a_c1c1*a_hh - a_c1h^2 (needs > 0)
    double hessian_det = 0.0;   // det of the full 3x3 Hessian (needs < 0)
    bool own_terms_ok = false;
    bool minor_ok = false;
    bool det_ok = false;
    bool pass = false;
};

// Threshold constants bounding the valid parameter region, plus the price
// floor below which sector 2 cannot cover its fixed cost.
struct Thresholds {
    double a_c1h_bar = 0.0;   // saddle bound on a_c1h
    double a_c1_lower = 0.0;  // lower bound on a_c1 (m0 > 0)
    double a_c2h_bar = 0.0;   // satiation-vs-substitutability watershed
    double b0_lower = 0.0;    // lower bound on b0 (h* > 0)
    double b0_upper = 0.0;    // upper bound on b0 (lambda > 0)
    double a_c2_lower = 0.0;  // lower bound on a_c2 (steady-state viability)
    double h0_lower = 0.0;    // h0 above which b0_lower is positive
    double p_min = 0.0;       // viability floor tau / ((1-alpha) y2)
};

ConcavityReport validate_concavity(const LQUtilityParams& u);

// Sector outputs under a production regime.  For PostShift, xi_new is the
// permanent post-lockdown share of labor in sector 1.
std::pair<double, double> sector_outputs(const Technology& t, Regime regime,
                                         double xi_new = std::nan(""));

// Effective sector-1 share once a share a_realloc of idle sector-2 labor has
// moved permanently: xi + a_realloc (1 - xi).
double permanent_shift_share(const Technology& t);

// Competitive wage and profit in a sector with price p_i and labor ell_i.
std::pair<double, double> wages_and_profits(double p_i, double ell_i, const Technology& t);

// All threshold constants.  psi1 is injected so spectral and threshold logic
// stay decoupled; it must be the stable (negative) eigenvalue.
Thresholds compute_thresholds(const ModelConfig& cfg, double psi1);

// Domain checks on a full configuration (positivity, open intervals,
// concavity, r = rho).  Throws ConfigError naming the offending field.
void validate_config(const ModelConfig& cfg);

}  // namespace habitsim
