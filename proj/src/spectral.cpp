#include "habitsim/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace habitsim {

SpectralData eigenvalues(double u_c1c1, double u_c1h, double u_hh, double phi, double rho) {
    if (u_c1c1 >= 0.0) throw std::invalid_argument("eigenvalues: u_c1c1 must be negative");
    if (phi <= 0.0) throw std::invalid_argument("eigenvalues: phi must be positive");
    if (rho < 0.0) throw std::invalid_argument("eigenvalues: rho must be non-negative");

    const double Q = (phi + rho) * u_c1c1 + (rho + 2.0 * phi) * u_c1h + phi * u_hh;
    const double disc = rho * rho + 4.0 * phi / u_c1c1 * Q;

    SpectralData sd;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        sd.psi1 = 0.5 * (rho - s);
        sd.psi2 = 0.5 * (rho + s);
        // det < 0 iff the roots straddle zero; det = psi1*psi2.
        sd.regime = sd.psi1 < 0.0 ? DynamicRegime::SaddleReal : DynamicRegime::PositiveReal;
    } else if (disc == 0.0) {
        sd.psi1 = sd.psi2 = 0.5 * rho;
        sd.regime = DynamicRegime::PositiveReal;
        sd.boundary_discriminant = true;
    } else {
        sd.psi1 = sd.psi2 = 0.5 * rho;  // real part only; the pair is complex
        sd.regime = DynamicRegime::ComplexUnstable;
    }
    sd.addiction_factor = (phi + sd.psi1) / phi;
    sd.eigvec_ratio = -(phi * u_c1h + (phi + sd.psi1) * u_c1c1) / (phi * phi);
    return sd;
}

HabitClassification addiction_or_satiation(const SpectralData& sd, double phi) {
    if (sd.regime != DynamicRegime::SaddleReal)
        throw std::invalid_argument("addiction_or_satiation: saddle regime required");
    HabitClassification hc;
    const double m = phi + sd.psi1;
    if (m > 0.0) {
        hc.kind = HabitKind::Addictive;
    } else {
        hc.kind = HabitKind::Satiating;  // ties resolve to Satiating
        hc.boundary = (m == 0.0);
    }
    return hc;
}

}  // namespace habitsim
