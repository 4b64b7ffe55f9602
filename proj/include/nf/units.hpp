#pragma once

#include <stdexcept>

namespace nf {

/// Pinned physical constants (CGS), fixed for reproducibility.
namespace constants {
inline constexpr double hbar = 1.054571817e-27;     // erg s
inline constexpr double c_light = 2.99792458e10;    // cm/s
inline constexpr double G_newton = 6.67430e-8;      // cm^3 g^-1 s^-2
inline constexpr double solar_mass = 1.98892e33;    // g
}  // namespace constants

/// Planck mass sqrt(hbar c / G) in grams.
double planck_mass();

/// Derived parameters of the dimensionless KGW problem for a candidate
/// particle mass m and a total mass N m.
struct PhysicalParams {
    double particle_mass_g = 0;  // m
    double total_mass_g = 0;     // N m
    double N = 0;                // particle number
    double mu = 0;               // (1/N)(m_P/m)^2
    double mu2 = 0;
    double epsilon = 0;          // 1/mu^2
    double lambda_cm = 0;        // hbar^2 / (G N m^3)
};

/// Pure arithmetic from the pinned constants; non-positive input throws.
PhysicalParams convert_units(double particle_mass_g, double total_mass_g);

/// Inverse map: recover the particle mass from (mu, N).
double particle_mass_from(double mu, double N);

}  // namespace nf
