#pragma once

namespace habitsim {

enum class DynamicRegime { SaddleReal, PositiveReal, ComplexUnstable };
enum class HabitKind { Addictive, Satiating };

// Eigenstructure of the 2x2 habit/co-state system.
struct SpectralData {
    double psi1 = 0.0;              // stable eigenvalue (per period), psi1 <= psi2
    double psi2 = 0.0;              // second eigenvalue
    DynamicRegime regime = DynamicRegime::SaddleReal;
    double addiction_factor = 0.0;  // (phi + psi1)/phi
    double eigvec_ratio = 0.0;      // co-state component per habit component, v11/v12
    bool boundary_discriminant = false;  // discriminant == 0, resolved as repeated real
};

struct HabitClassification {
    HabitKind kind = HabitKind::Satiating;
    bool boundary = false;  // phi + psi1 == 0 exactly, tie-broken to Satiating
};

// Closed-form eigenvalues of the linearized (mu~, h~) system.
//   psi_{1,2} = [rho +- sqrt(rho^2 + (4 phi/u_c1c1)((phi+rho)u_c1c1 + (rho+2phi)u_c1h + phi u_hh))]/2
// Throws std::invalid_argument when u_c1c1 >= 0 or phi <= 0 or rho < 0.
SpectralData eigenvalues(double u_c1c1, double u_c1h, double u_hh, double phi, double rho);

// Good 1 is addictive when consumption rises with the habit stock along the
// stable path, i.e. phi + psi1 > 0.  Requires the saddle regime.
HabitClassification addiction_or_satiation(const SpectralData& sd, double phi);

}  // namespace habitsim
