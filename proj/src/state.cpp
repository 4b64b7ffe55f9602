#include "nf/state.hpp"

#include <stdexcept>

namespace nf {

namespace {
const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
}

ComplexState to_complex(const RealPairState& s) {
    ComplexState c;
    c.psi = (s.u.cast<cplx>() + cplx(0, 1) * s.pu.cast<cplx>()) * inv_sqrt2;
    c.phi = s.phi;
    c.pphi = s.pphi;
    c.time = s.time;
    c.frame = Frame::tau;
    c.gauged = false;
    return c;
}

RealPairState to_real_pair(const ComplexState& s) {
    if (s.frame != Frame::tau || s.gauged)
        throw std::invalid_argument("to_real_pair: expects an ungauged tau-frame state");
    RealPairState r;
    r.u = s.psi.real() * std::sqrt(2.0);
    r.pu = s.psi.imag() * std::sqrt(2.0);
    r.phi = s.phi;
    r.pphi = s.pphi;
    r.time = s.time;
    return r;
}

ComplexState gauge_to_T(const ComplexState& s, double eps) {
    if (s.frame != Frame::tau || s.gauged)
        throw std::invalid_argument("gauge_to_T: expects an ungauged tau-frame state");
    ComplexState g = s;
    g.psi = s.psi * std::exp(cplx(0, s.time));
    g.time = eps * s.time;
    g.frame = Frame::T;
    g.gauged = true;
    return g;
}

ComplexState ungauge_to_tau(const ComplexState& s, double eps) {
    if (s.frame != Frame::T || !s.gauged)
        throw std::invalid_argument("ungauge_to_tau: expects a gauged T-frame state");
    ComplexState g = s;
    double tau = s.time / eps;
    g.psi = s.psi * std::exp(cplx(0, -tau));
    g.time = tau;
    g.frame = Frame::tau;
    g.gauged = false;
    return g;
}

RealPairState gaussian_packet(const SpectralToolbox& tb, double sigma, double norm) {
    const Grid& g = tb.grid();
    const std::size_t total = g.size();
    RealPairState s;
    s.u.resize(total);
    const double c = g.length / 2.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        double r2 = 0;
        for (int d = g.dim - 1; d >= 0; --d) {
            int i = static_cast<int>(rem % g.n);
            rem /= g.n;
            double x = tb.coord(i) - c;
            r2 += x * x;
        }
        s.u[idx] = std::exp(-r2 / (2.0 * sigma * sigma));
    }
    double n2 = tb.integrate(s.u * s.u);
    s.u *= std::sqrt(norm / n2);
    s.pu = ArrayXd::Zero(total);
    s.phi = ArrayXd::Zero(total);
    s.pphi = ArrayXd::Zero(total);
    s.time = 0.0;
    return s;
}

}  // namespace nf
