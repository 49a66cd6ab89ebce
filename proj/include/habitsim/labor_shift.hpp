#pragma once

#include <optional>
#include <string>

#include "habitsim/equilibrium.hpp"

namespace habitsim {

// First-order decomposition of a good-2 price change into the
// labor-composition channel and the habit (substitutability-satiation)
// channel, dp = lce * d_xi + sse * dh.
struct ShiftDecomposition {
    double lce = 0.0;      // labor-composition multiplier (price units per share unit)
    double sse = 0.0;      // substitutability-satiation multiplier (price units per habit unit)
    double dp = 0.0;       // total differential for the applied (d_xi, dh)
    double d_xi = 0.0;     // applied share change
    double dh = 0.0;       // habit change used in dp
    double dy1_dxi = 0.0;  // output derivatives at the base share
    double dy2_dxi = 0.0;
};

enum class ShiftGuarantee { PStarRises };

// Comparison of steady states before and after a permanent composition change.
struct ShiftComparison {
    double p_star_bl = 0.0;  // steady-state price under the old composition
    double p_star_al = 0.0;  // steady-state price under the new composition
    double lambda_bl = 0.0;
    double lambda_al = 0.0;
    double h_star_bl = 0.0;
    double h_star_al = 0.0;
    double I = 0.0;          // habit-gap cross term (h0-h*_L) lam_BL - (h0-h*_BL) lam_AL
    std::optional<double> t_underline_shift;  // short-run threshold, when defined
    std::string t_underline_missing_reason;   // why the threshold is undefined, if it is
    std::optional<ShiftGuarantee> guarantee;  // set when a sufficient condition holds
    bool strong_satiation = false;  // a_c2h < -((phi+rho)/phi) a_c1c2 (with margin)
};

// Price level consistent with the equilibrium relation at an arbitrary
// (xi, h) pair; the habit channel enters through the stable-path link
// between c1 and h.  Used by the decomposition and its finite-difference
// closure checks.
double price_at(const ModelConfig& cfg, const ModelDerived& d, double xi, double h);

// Price-change decomposition for the share change xi_old -> xi_new and a
// habit change dh, evaluated at time t (t counts from the reopening; the
// habit channel of the composition change phases in as 1 - e^{psi1 t}).
ShiftDecomposition decompose(const ModelConfig& cfg, const ModelDerived& d, double xi_old,
                             double xi_new, double t, double dh);

// Steady states under the old and new composition, the habit-gap cross
// term I, the short-run comparison threshold, and the sufficient
// conditions guaranteeing a long-run price rise.
ShiftComparison compare_steady_states(const ModelConfig& cfg, const ModelDerived& d,
                                      double xi_old, double xi_new,
                                      double strong_satiation_margin = 0.0);

}  // namespace habitsim
