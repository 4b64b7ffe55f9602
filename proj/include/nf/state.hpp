#pragma once

#include "nf/spectral.hpp"

namespace nf {

/// Time frames of the problem: tau = mu t (oscillator-rate frame of the
/// rescaled KGW system) and T = eps tau (the slow frame of the SW/SP/NF
/// systems).  The canonical wave momentum p_phi has the same numerical
/// value in both frames: p_phi = d(phi)/d(tau) = eps d(phi)/dT.
enum class Frame { tau, T };

/// Real-pair form (u, p_u, phi, p_phi) in frame tau.
struct RealPairState {
    ArrayXd u, pu, phi, pphi;
    double time = 0.0;
};

/// Complex form: psi (ungauged, frame tau) or Psi = e^{i tau} psi (gauged,
/// frame T), plus the wave pair.
struct ComplexState {
    ArrayXcd psi;
    ArrayXd phi, pphi;
    double time = 0.0;
    Frame frame = Frame::tau;
    bool gauged = false;
};

/// psi = (u + i p_u)/sqrt(2); exact involution with from_complex up to
/// rounding.
ComplexState to_complex(const RealPairState& s);
RealPairState to_real_pair(const ComplexState& s);

/// Apply Psi = e^{i tau} psi and rescale time to T = eps tau.
ComplexState gauge_to_T(const ComplexState& tau_state, double eps);
/// Inverse of gauge_to_T.
ComplexState ungauge_to_tau(const ComplexState& T_state, double eps);

/// Gaussian wavepacket initial data: u = A exp(-|x-c|^2 / (2 sigma^2)) at
/// the box center, p_u = phi = p_phi = 0, normalized to ||u||^2 = norm.
RealPairState gaussian_packet(const SpectralToolbox& tb, double sigma, double norm = 1.0);

}  // namespace nf
