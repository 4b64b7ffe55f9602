#pragma once

#include <vector>

#include "nf/rational.hpp"
#include "nf/state.hpp"

namespace nf {

/// Spherically symmetric stationary profile of the SP system on R^3:
///   -1/2 lap(chi) + phi chi = omega chi,   lap(phi) = chi^2,
/// in the gauge phi(inf) = 0 with ||chi||^2 = 4 pi int r^2 chi^2 dr fixed.
struct RadialProfile {
    ArrayXd r, chi, phi;   // uniform grid from r = 0
    double normalization;  // ||chi||^2 in the convention above
};

struct EigenResult {
    double omega = 0;    // eigenvalue, < 0
    double mu = 0;       // sqrt(-2 omega)
    int nodes = 0;       // radial excitation index
    double residual = 0; // max-norm of the eigen-equation on the grid
    RadialProfile profile;
};

/// Eigenvalue search failed to bracket the requested node count.
struct SearchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Gradient flow failed to reach the residual target.
struct IterationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShootParams {
    double r_shoot = 50.0;   // integration range for the bisection
    double dr = 2.5e-3;      // RK4 step
    double r_max = 60.0;     // final profile extent
    double omega_seed = 0.5; // initial guess for the window expansion
    int max_expand = 80;
};

/// Shooting/bisection on the radial ODE system (v = r chi, w = r phi)
/// for the state with exactly `node_target` radial nodes, normalized to
/// ||chi||^2 = 1 through the scaling symmetry
/// (chi, phi, omega) -> (a^2 chi(ar), a^2 phi(ar), a^2 omega).
EigenResult shoot_radial(int node_target, double tol, const ShootParams& p = {});

struct ImagParams {
    double r_max = 60.0;
    double dr = 4e-3;
    double dtau = 0.25;
    int max_iter = 40000;
};

/// Independent oracle for the ground state: normalized semi-implicit
/// gradient flow of the SP energy on the same radial free-space problem.
EigenResult imaginary_time_ground(double tol, const ImagParams& p = {});

/// Ground state of the periodic-box SP Hamiltonian (zero-mean potential)
/// on a simulation grid, for solver initialization.  Returns a gauged
/// frame-T state with phi attached.
struct BoxGround {
    ComplexState state;
    double omega = 0;
    double residual = 0;
    int iterations = 0;
};
BoxGround imaginary_time_ground_box(const SpectralToolbox& tb, double mass, double tol,
                                    int max_iter = 20000);

/// mu = sqrt(-2 omega); omega must be negative.
double mu_from_omega(double omega);

struct GateResult {
    bool exists = false;
    double mu0 = 0;
    int nearest_j = -1;  // index of the closest mu_j when within 1e-6 relative
};
/// Stationary states exist only for mu <= mu_0.
GateResult existence_gate(double mu_query, const std::vector<double>& mu_sequence);

/// Max-norm of -1/2 lap chi + phi chi - omega chi on the profile grid
/// (fourth-order differences; endpoints skipped).
double radial_residual(const RadialProfile& p, double omega);

/// The scaling image (a^2 chi(ar), a^2 phi(ar)) evaluated on the compatible
/// subgrid; satisfies the equations with omega -> a^2 omega.
RadialProfile rescale_profile(const RadialProfile& p, double alpha);

/// Radial interpolation onto a centered Cartesian grid (psi = chi, real).
ArrayXcd profile_to_grid(const RadialProfile& p, const SpectralToolbox& tb);

}  // namespace nf
