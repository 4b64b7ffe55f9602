#include "nf/units.hpp"

#include <cmath>

namespace nf {

double planck_mass() {
    return std::sqrt(constants::hbar * constants::c_light / constants::G_newton);
}

PhysicalParams convert_units(double particle_mass_g, double total_mass_g) {
    if (!(particle_mass_g > 0) || !(total_mass_g > 0))
        throw std::domain_error("convert_units: masses must be positive");
    PhysicalParams p;
    p.particle_mass_g = particle_mass_g;
    p.total_mass_g = total_mass_g;
    p.N = total_mass_g / particle_mass_g;
    const double ratio = planck_mass() / particle_mass_g;
    p.mu = (ratio * ratio) / p.N;
    p.mu2 = p.mu * p.mu;
    p.epsilon = 1.0 / p.mu2;
    p.lambda_cm = constants::hbar * constants::hbar /
                  (constants::G_newton * total_mass_g * particle_mass_g * particle_mass_g);
    return p;
}

double particle_mass_from(double mu, double N) {
    if (!(mu > 0) || !(N > 0)) throw std::domain_error("particle_mass_from: positive inputs");
    return planck_mass() / std::sqrt(mu * N);
}

}  // namespace nf
