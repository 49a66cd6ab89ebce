#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace habitsim {

// Coefficients of the quadratic utility
//   u(c1,c2,h) = a_c1 c1 + a_c2 c2 + a_h h
//              + (a_c1c1/2) c1^2 + (a_c2c2/2) c2^2 + (a_hh/2) h^2
//              + a_c1c2 c1 c2 + a_c1h c1 h + a_c2h c2 h
struct LQUtilityParams {
    double a_c1 = 0.0;    // linear weight on good-1 consumption (utils per unit)
    double a_c2 = 0.0;    // linear weight on good-2 consumption
    double a_h = 0.0;     // linear weight on the habit stock
    double a_c1c1 = 0.0;  // own curvature, good 1 (utils per unit^2), < 0
    double a_c2c2 = 0.0;  // own curvature, good 2, < 0
    double a_hh = 0.0;    // own curvature, habits, < 0
    double a_c1c2 = 0.0;  // cross term c1*c2 (substitutes when > 0)
    double a_c1h = 0.0;   // cross term c1*h
    double a_c2h = 0.0;   // cross term c2*h (satiation when < 0)

    double u(double c1, double c2, double h) const {
        return a_c1 * c1 + a_c2 * c2 + a_h * h + 0.5 * a_c1c1 * c1 * c1 +
               0.5 * a_c2c2 * c2 * c2 + 0.5 * a_hh * h * h + a_c1c2 * c1 * c2 +
               a_c1h * c1 * h + a_c2h * c2 * h;
    }
    double u_c1(double c1, double c2, double h) const {
        return a_c1 + a_c1c1 * c1 + a_c1c2 * c2 + a_c1h * h;
    }
    double u_c2(double c1, double c2, double h) const {
        return a_c2 + a_c2c2 * c2 + a_c1c2 * c1 + a_c2h * h;
    }
    double u_h(double c1, double c2, double h) const {
        return a_h + a_hh * h + a_c1h * c1 + a_c2h * c2;
    }
};

// Production side: y = l^alpha in each sector, fixed per-period cost tau.
struct Technology {
    double alpha = 0.7;      // labor exponent, in (0,1)
    double tau = 0.0;        // fixed operating cost (numeraire units per period), >= 0
    double xi = 0.5;         // share of labor time supplied to sector 1, in (0,1)
    double lbar = 1.0;       // labor endowment (time units), > 0
    double a_realloc = 0.3;  // share of idle sector-2 labor reallocated in a lockdown, in (0,1)
};

struct HouseholdParams {
    double rho = 0.01;  // subjective discount rate (per period)
    double r = 0.01;    // world interest rate (per period); the model maintains r = rho
    double phi = 0.1;   // habit adjustment speed (per period), > 0
};

struct InitialState {
    double b0 = 0.0;  // initial foreign assets (good-1 units)
    double h0 = 0.5;  // initial habit stock (good-1 units), > 0
};

struct ModelConfig {
    LQUtilityParams utility;
    Technology tech;
    HouseholdParams household;
    InitialState initial;
};

// Which production pattern is in force.
enum class Regime { TwoSector, Lockdown, PostShift };

// Uniform-grid solution paths; series that are undefined in a regime stay empty.
struct Trajectory {
    std::vector<double> t;              // strictly increasing times (periods)
    std::vector<double> h;              // habit stock
    std::vector<double> c1;             // good-1 consumption
    std::vector<double> c2;             // good-2 consumption (empty when sector 2 inactive)
    std::vector<double> b;              // foreign assets
    std::vector<double> p;              // relative price of good 2 (empty when inactive)
    std::vector<double> trade_balance;  // y1 - c1
    std::vector<double> profit2;        // sector-2 per-period profit (empty when inactive)
};

// Steady state of one regime.  m0/m1 decompose the shadow price as
// lambda = m0 + m1 * (r b0 + y1 + r(phi+psi1)/(phi(psi1-r)) h0).
struct SteadyState {
    double h_star = 0.0;    // habit stock (= c1_star)
    double c1_star = 0.0;   // good-1 consumption
    double b_star = 0.0;    // assets, r b* = h* - y1
    double p_star = std::nan("");  // relative price (NaN when sector 2 inactive)
    double lambda = 0.0;    // shadow price of wealth (constant since r = rho)
    double mu_star = 0.0;   // habit co-state
    double m0 = 0.0;
    double m1 = 0.0;
    bool sector2_viable = false;  // p_star >= p_min (meaningful in two-sector regimes)
};

inline std::string regime_name(Regime r) {
    switch (r) {
        case Regime::TwoSector: return "two_sector";
        case Regime::Lockdown: return "lockdown";
        case Regime::PostShift: return "post_shift";
    }
    return "unknown";
}

}  // namespace habitsim
