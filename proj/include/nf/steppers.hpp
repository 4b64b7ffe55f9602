#pragma once

#include <stdexcept>
#include <string>

#include "nf/state.hpp"

namespace nf {

enum class System { kgw, kgw_complex, sw, sp, nf2 };
enum class Scheme { strang, rk4 };

const char* system_name(System s);

struct SolverConfig {
    System system = System::kgw;
    double epsilon = 0.01;
    double dt = 0.0;  // 0: use default_dt
    double t_end = 1.0;
    Scheme scheme = Scheme::strang;
    int diagnostics_period = 100;
    /// Zero-mode (mean-subtracted) coupling for wave-type systems.  The
    /// Poisson inversion of the SP system is always zero-mean.
    bool jeans = false;
};

/// Wave speed in frame T is 1/sqrt(eps): resolve it on the grid.
double default_dt(const Grid& grid, double eps);

/// Solver failure (NaN/overflow detection) with the offending step index.
struct SolverError : std::runtime_error {
    long long step;
    SolverError(const std::string& msg, long long s)
        : std::runtime_error(msg + " at step " + std::to_string(s)), step(s) {}
};

/// Rescaled KGW system in frame tau, real-pair variables.
/// Strang splitting: exact Fourier rotation of the quadratic part
/// (u-modes at sqrt(1+eps k^2), phi-modes at sqrt(eps) |k|) around the exact
/// Yukawa kick p_u -= 2 eps phi u dt, p_phi -= eps u^2 dt.
class KgwStepper {
  public:
    KgwStepper(const SpectralToolbox& tb, const SolverConfig& cfg);
    void run(RealPairState& s, long long nsteps) const;
    double hamiltonian(const RealPairState& s) const;
    /// The h-observable int (u^2 + p_u^2)/2 = int |psi|^2.
    double mass(const RealPairState& s) const;

  private:
    const SpectralToolbox& tb_;
    SolverConfig cfg_;
    // per-mode rotation tables for half and full steps
    struct Rot {
        ArrayXd cu, su, swu;  // cos, sin/w, w sin for the u-pair
        ArrayXd cp, sp, swp;  // same for the phi-pair
    };
    Rot half_, full_;
    Rot make_tables(double h) const;
    void linear_flow(RealPairState& s, const Rot& r) const;
    void kick(RealPairState& s, double h) const;
    void rk4_step(RealPairState& s) const;
};

/// Exact complex-form KGW (gauged Psi, frame T) with the oscillatory
/// remainder terms; RK4 with spectral derivatives.
class KgwComplexStepper {
  public:
    KgwComplexStepper(const SpectralToolbox& tb, const SolverConfig& cfg);
    void run(ComplexState& s, long long nsteps) const;
    double mass(const ComplexState& s) const;

  private:
    const SpectralToolbox& tb_;
    SolverConfig cfg_;
};

/// Schroedinger-Wave system in frame T, canonical (Psi, phi, p_phi).
/// Strang splitting with pointwise-unitary coupling: conserves the mass
/// int |Psi|^2 to rounding.
class SwStepper {
  public:
    SwStepper(const SpectralToolbox& tb, const SolverConfig& cfg);
    void run(ComplexState& s, long long nsteps) const;
    double hamiltonian(const ComplexState& s) const;
    double mass(const ComplexState& s) const;

  private:
    const SpectralToolbox& tb_;
    SolverConfig cfg_;
    struct Rot {
        ArrayXcd kin;          // exp(-i k^2 h / 2)
        ArrayXd cp, sp, swp;   // wave-pair rotation at speed 1/sqrt(eps)
    };
    Rot half_, full_;
    Rot make_tables(double h) const;
    void linear_flow(ComplexState& s, const Rot& r) const;
    void kick(ComplexState& s, double h) const;
};

/// Schroedinger-Poisson system in frame T: phi is eliminated through the
/// zero-mean Poisson inversion each coupling step.
class SpStepper {
  public:
    SpStepper(const SpectralToolbox& tb, const SolverConfig& cfg);
    void run(ComplexState& s, long long nsteps) const;
    double hamiltonian(const ComplexState& s) const;
    double mass(const ComplexState& s) const;
    /// Refresh s.phi from |Psi|^2 (diagnostics only; the stepper recomputes).
    void refresh_potential(ComplexState& s) const;

  private:
    const SpectralToolbox& tb_;
    SolverConfig cfg_;
    ArrayXcd kin_half_, kin_full_;
};

/// Second-order normal-form system in frame T: Hamilton equations of
/// H0 + eps Z1 + eps^2 Z2 expressed in gauged variables, integrated with
/// RK4 and spectral derivatives.
class Nf2Stepper {
  public:
    Nf2Stepper(const SpectralToolbox& tb, const SolverConfig& cfg);
    void run(ComplexState& s, long long nsteps) const;
    double hamiltonian(const ComplexState& s) const;
    double mass(const ComplexState& s) const;

    struct Rhs {
        ArrayXcd dpsi;
        ArrayXd dphi, dpphi;
    };
    Rhs rhs(const ComplexState& s) const;
    /// The eps-correction part of the right-hand side alone (the terms that
    /// distinguish this system from SW); vanishes linearly as eps -> 0.
    Rhs correction(const ComplexState& s) const;

  private:
    const SpectralToolbox& tb_;
    SolverConfig cfg_;
};

/// SW right-hand side in the same variables, for the eps -> 0 comparison.
Nf2Stepper::Rhs sw_rhs(const SpectralToolbox& tb, const ComplexState& s, double eps, bool jeans);

/// H_eps of the rescaled KGW system evaluated on a tau-frame real pair.
double kgw_energy(const SpectralToolbox& tb, const RealPairState& s, double eps, bool jeans);

/// Hamiltonian flow of the first generating Hamiltonian G1 over pseudo-time
/// +-eps, RK4 substeps; acts on ungauged tau-frame states.  With `jeans`
/// the wave-pair updates are mean-projected: the generator of the zero-mean
/// gauge keeps the zero modes of (phi, p_phi) fixed.
class G1Flow {
  public:
    G1Flow(const SpectralToolbox& tb, double eps, int substeps = 16, bool jeans = false);
    ComplexState map(const ComplexState& s, int direction) const;

  private:
    const SpectralToolbox& tb_;
    double eps_;
    int substeps_;
    bool jeans_;
};

}  // namespace nf
