#include "nf/compare.hpp"

#include <cmath>
#include <stdexcept>

namespace nf {

ComplexState to_comparison_frame(const ComplexState& s, double eps) {
    if (s.frame == Frame::T && s.gauged) return s;
    if (s.frame == Frame::tau && !s.gauged) return gauge_to_T(s, eps);
    throw std::invalid_argument("to_comparison_frame: inconsistent frame/gauge combination");
}

ComplexState to_comparison_frame(const RealPairState& s, double eps) {
    return gauge_to_T(to_complex(s), eps);
}

double state_error(const ComplexState& a, const ComplexState& b, const SpectralToolbox& tb,
                   ErrorNorm norm) {
    if (a.psi.size() != b.psi.size())
        throw std::invalid_argument("state_error: grid mismatch");
    if (std::abs(a.time - b.time) > 1e-9 * (1.0 + std::abs(a.time)))
        throw std::invalid_argument("state_error: sample-time mismatch");
    switch (norm) {
        case ErrorNorm::L2_psi:
            return std::sqrt(tb.integrate_abs2(a.psi - b.psi));
        case ErrorNorm::mass_gap:
            return std::abs(tb.integrate_abs2(a.psi) - tb.integrate_abs2(b.psi));
        case ErrorNorm::observable_h:
            return std::abs(tb.integrate_abs2(a.psi) - tb.integrate_abs2(b.psi));
        case ErrorNorm::L2_state: {
            double e2 = tb.integrate_abs2(a.psi - b.psi);
            e2 += tb.integrate((a.phi - b.phi) * (a.phi - b.phi));
            e2 += tb.integrate((a.pphi - b.pphi) * (a.pphi - b.pphi));
            return std::sqrt(e2);
        }
    }
    return 0.0;
}

double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& err) {
    if (eps.size() != err.size() || eps.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0) || !(err[i] > 0))
            throw std::domain_error("fit_loglog_slope: samples must be positive");
        double x = std::log(eps[i]);
        double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nf
