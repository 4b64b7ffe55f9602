#pragma once

#include <vector>

#include "nf/steppers.hpp"

namespace nf {

enum class ErrorNorm { L2_state, L2_psi, mass_gap, observable_h };

/// Pointwise error between two states after automatic frame conversion
/// (gauge, time rescaling, real<->complex).  Throws on grids or times that
/// cannot be reconciled.
double state_error(const ComplexState& a, const ComplexState& b, const SpectralToolbox& tb,
                   ErrorNorm norm);

/// Convert any state to gauged frame-T complex form for comparison.
ComplexState to_comparison_frame(const ComplexState& s, double eps);
ComplexState to_comparison_frame(const RealPairState& s, double eps);

/// Least-squares slope of log(err) against log(eps).
double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& err);

}  // namespace nf
