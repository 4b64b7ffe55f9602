#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nf/compare.hpp"
#include "nf/steppers.hpp"

using namespace nf;

namespace {

Grid small_grid() { return Grid{1, 128, 16.0 * M_PI}; }

SolverConfig cfg_of(System sys, double eps, double dt, Scheme sch = Scheme::strang) {
    SolverConfig c;
    c.system = sys;
    c.epsilon = eps;
    c.dt = dt;
    c.scheme = sch;
    return c;
}

}  // namespace

TEST_CASE("eps = 0 KGW is the exact harmonic + free flow") {
    Grid g = small_grid();
    SpectralToolbox tb(g);
    KgwStepper st(tb, cfg_of(System::kgw, 0.0, 1e-2));
    RealPairState s = gaussian_packet(tb, 1.5);
    s.phi = 0.2 * s.u;
    s.pphi = 0.1 * s.u;
    RealPairState s0 = s;
    long long n = 250;
    st.run(s, n);
    double tau = 1e-2 * n;
    // u(tau) = u0 cos(tau), p_u = -u0 sin(tau); phi(tau) = phi0 + pphi0 tau
    CHECK((s.u - s0.u * std::cos(tau)).abs().maxCoeff() < 1e-12);
    CHECK((s.pu + s0.u * std::sin(tau)).abs().maxCoeff() < 1e-12);
    CHECK((s.phi - (s0.phi + tau * s0.pphi)).abs().maxCoeff() < 1e-12);
    CHECK((s.pphi - s0.pphi).abs().maxCoeff() < 1e-14);
}

TEST_CASE("strang energy drift scales as dt^2 (ratio 4 under halving)") {
    Grid g = small_grid();
    SpectralToolbox tb(g);
    const double eps = 0.05;
    auto drift = [&](double dt) {
        KgwStepper st(tb, cfg_of(System::kgw, eps, dt));
        RealPairState s = gaussian_packet(tb, 1.0);
        double h0 = st.hamiltonian(s);
        st.run(s, static_cast<long long>(std::llround(20.0 / dt)));
        return std::abs(st.hamiltonian(s) - h0);
    };
    double d1 = drift(4e-3);
    double d2 = drift(2e-3);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("sw and sp strang conserve mass to rounding over 1e4 steps") {
    Grid g = small_grid();
    SpectralToolbox tb(g);
    const double eps = 0.01;

    SolverConfig csw = cfg_of(System::sw, eps, 2.5e-4);
    csw.jeans = true;
    SwStepper sw(tb, csw);
    ComplexState s = gauge_to_T(to_complex(gaussian_packet(tb, 1.0)), eps);
    double m0 = sw.mass(s);
    sw.run(s, 10000);
    CHECK(std::abs(sw.mass(s) - m0) / m0 < 1e-12);

    SpStepper sp(tb, cfg_of(System::sp, eps, 2.5e-4));
    ComplexState q = gauge_to_T(to_complex(gaussian_packet(tb, 1.0)), eps);
    double n0 = sp.mass(q);
    sp.run(q, 10000);
    CHECK(std::abs(sp.mass(q) - n0) / n0 < 1e-12);
}

TEST_CASE("plane wave in sp evolves by the exact dispersive phase") {
    Grid g = small_grid();
    SpectralToolbox tb(g);
    SpStepper sp(tb, cfg_of(System::sp, 0.01, 1e-3));
    ComplexState s;
    s.frame = Frame::T;
    s.gauged = true;
    s.psi.resize(g.size());
    double k = 2.0 * M_PI * 3.0 / g.length;
    for (int i = 0; i < g.n; ++i) s.psi[i] = 0.5 * std::exp(cplx(0, k * tb.coord(i)));
    s.phi = ArrayXd::Zero(g.size());
    s.pphi = ArrayXd::Zero(g.size());
    ComplexState s0 = s;
    sp.run(s, 1000);
    double T = 1.0;
    // uniform |Psi|^2: phi = 0, exact phase e^{-i k^2 T / 2}
    ArrayXcd expect = s0.psi * std::exp(cplx(0, -0.5 * k * k * T));
    CHECK((s.psi - expect).abs().maxCoeff() < 1e-10);
}

TEST_CASE("free wave in sw: psi = 0 keeps the wave pair exact") {
    Grid g = small_grid();
    SpectralToolbox tb(g);
    const double eps = 0.04;
    SwStepper sw(tb, cfg_of(System::sw, eps, 1e-4));
    ComplexState s;
    s.frame = Frame::T;
    s.gauged = true;
    s.psi = ArrayXcd::Zero(g.size());
    s.phi.resize(g.size());
    double k = 2.0 * M_PI * 2.0 / g.length;
    for (int i = 0; i < g.n; ++i) s.phi[i] = std::cos(k * tb.coord(i));
    ArrayXd phi0 = s.phi;
    s.pphi = ArrayXd::Zero(g.size());
    sw.run(s, 2000);
    double T = 0.2;
    double w = k / std::sqrt(eps);
    CHECK((s.phi - phi0 * std::cos(w * T)).abs().maxCoeff() < 1e-10);
}

TEST_CASE("real and complex KGW forms agree after variable conversion") {
    // N = 256 keeps the 2/3 dealias band far beyond the Gaussian tail
    Grid g{1, 256, 16.0 * M_PI};
    SpectralToolbox tb(g);
    const double eps = 0.05;
    RealPairState r0 = gaussian_packet(tb, 1.0);

    double T_end = 0.05;
    double dt_tau = 2.5e-4;
    long long n_tau = static_cast<long long>(std::llround(T_end / eps / dt_tau));
    KgwStepper kgw(tb, cfg_of(System::kgw, eps, dt_tau));
    RealPairState r = r0;
    kgw.run(r, n_tau);

    double dt_T = eps * 2.5e-4;
    long long n_T = static_cast<long long>(std::llround(T_end / dt_T));
    KgwComplexStepper kc(tb, cfg_of(System::kgw_complex, eps, dt_T, Scheme::rk4));
    ComplexState c = gauge_to_T(to_complex(r0), eps);
    kc.run(c, n_T);

    ComplexState from_real = to_comparison_frame(r, eps);
    double err = state_error(from_real, c, tb, ErrorNorm::L2_state);
    double scale = std::sqrt(tb.integrate_abs2(c.psi));
    CHECK(err / scale < 1e-8);
}

TEST_CASE("nf2 reduces to sw as eps -> 0 and conserves its hamiltonian") {
    Grid g = small_grid();
    SpectralToolbox tb(g);
    ComplexState s = gauge_to_T(to_complex(gaussian_packet(tb, 1.0)), 0.02);
    s.phi = 0.1 * s.psi.abs2();
    s.pphi = -0.05 * s.psi.abs2();

    // correction difference is exactly linear in eps
    Nf2Stepper a(tb, cfg_of(System::nf2, 0.02, 1e-3, Scheme::rk4));
    Nf2Stepper b(tb, cfg_of(System::nf2, 1.0, 1e-3, Scheme::rk4));
    auto ra = a.rhs(s), rb = b.rhs(s);
    auto sa = sw_rhs(tb, s, 0.02, false), sb = sw_rhs(tb, s, 1.0, false);
    ArrayXcd da = ra.dpsi - sa.dpsi;
    ArrayXcd db = rb.dpsi - sb.dpsi;
    CHECK((da - 0.02 * db).abs().maxCoeff() < 1e-12);
    ArrayXd fa = ra.dpphi - sa.dpphi;
    ArrayXd fb = rb.dpphi - sb.dpphi;
    CHECK((fa - 0.02 * fb).abs().maxCoeff() < 1e-12);

    // hamiltonian drift at rk4 accuracy
    const double eps = 0.02;
    Nf2Stepper nf2(tb, cfg_of(System::nf2, eps, 1e-3, Scheme::rk4));
    ComplexState z = gauge_to_T(to_complex(gaussian_packet(tb, 1.0)), eps);
    double h0 = nf2.hamiltonian(z);
    double m0 = nf2.mass(z);
    nf2.run(z, 1000);
    CHECK(std::abs(nf2.hamiltonian(z) - h0) / std::abs(h0) < 1e-8);
    CHECK(std::abs(nf2.mass(z) - m0) / m0 < 1e-8);
}

TEST_CASE("g1 flow map: identity at eps 0 and invertible round trip") {
    Grid g = small_grid();
    SpectralToolbox tb(g);
    ComplexState s = to_complex(gaussian_packet(tb, 1.0));
    s.phi = 0.2 * s.psi.real();
    s.pphi = -0.1 * s.psi.real();

    G1Flow id_flow(tb, 0.0);
    ComplexState same = id_flow.map(s, +1);
    CHECK((same.psi - s.psi).abs().maxCoeff() == 0.0);

    G1Flow flow(tb, 0.04);
    ComplexState fwd = flow.map(s, +1);
    CHECK((fwd.psi - s.psi).abs().maxCoeff() > 1e-4);  // actually moves
    ComplexState back = flow.map(fwd, -1);
    double rel = (back.psi - s.psi).abs().maxCoeff() / s.psi.abs().maxCoeff();
    CHECK(rel < 1e-10);
    CHECK((back.phi - s.phi).abs().maxCoeff() < 1e-10);
}

TEST_CASE("kgw strang and rk4 schemes agree") {
    Grid g = small_grid();
    SpectralToolbox tb(g);
    const double eps = 0.05;
    RealPairState a = gaussian_packet(tb, 1.0);
    RealPairState b = a;
    KgwStepper strang(tb, cfg_of(System::kgw, eps, 1e-3));
    KgwStepper rk4(tb, cfg_of(System::kgw, eps, 1e-3, Scheme::rk4));
    strang.run(a, 2000);
    rk4.run(b, 2000);
    CHECK((a.u - b.u).abs().maxCoeff() < 1e-6);
}

TEST_CASE("kgw h-observable fluctuation amplitude scales like eps") {
    // exploratory: the h = int |psi|^2 observable is constant on time
    // average; its fast fluctuation amplitude shrinks linearly in eps
    Grid g{1, 128, 4.0 * M_PI};
    SpectralToolbox tb(g);
    auto fluctuation = [&](double eps) {
        SolverConfig c = cfg_of(System::kgw, eps, 5e-3);
        c.jeans = true;
        KgwStepper st(tb, c);
        RealPairState s = gaussian_packet(tb, 1.0);
        double lo = st.mass(s), hi = lo;
        for (int k = 0; k < 400; ++k) {
            st.run(s, 1);
            double h = st.mass(s);
            lo = std::min(lo, h);
            hi = std::max(hi, h);
        }
        return hi - lo;
    };
    double a = fluctuation(0.04);
    double b = fluctuation(0.01);
    double slope = std::log(a / b) / std::log(4.0);
    CHECK(slope > 0.5);
    CHECK(slope < 1.5);
}

TEST_CASE("3d toolbox drives a small sp run with conserved mass") {
    Grid g{3, 16, 8.0};
    SpectralToolbox tb(g);
    SolverConfig c = cfg_of(System::sp, 0.01, 1e-3);
    SpStepper sp(tb, c);
    ComplexState s;
    s.frame = Frame::T;
    s.gauged = true;
    s.psi.resize(g.size());
    const double ctr = g.length / 2;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int d = 0; d < g.n; ++d) {
                double x = tb.coord(a) - ctr, y = tb.coord(b) - ctr, z = tb.coord(d) - ctr;
                s.psi[(a * g.n + b) * g.n + d] = std::exp(-(x * x + y * y + z * z) / 2.0);
            }
    s.phi = ArrayXd::Zero(g.size());
    s.pphi = ArrayXd::Zero(g.size());
    double m0 = sp.mass(s);
    sp.run(s, 200);
    CHECK(std::abs(sp.mass(s) - m0) / m0 < 1e-12);
}

TEST_CASE("uniform state under jeans-sw is exactly stationary") {
    // the remainder-free first-order system with constant Psi and phi = 0:
    // nothing moves
    Grid g = small_grid();
    SpectralToolbox tb(g);
    SolverConfig c = cfg_of(System::sw, 0.02, 1e-3);
    c.jeans = true;
    SwStepper sw(tb, c);
    ComplexState s;
    s.frame = Frame::T;
    s.gauged = true;
    s.psi = ArrayXcd::Constant(g.size(), cplx(0.3, 0.1));
    s.phi = ArrayXd::Zero(g.size());
    s.pphi = ArrayXd::Zero(g.size());
    ComplexState s0 = s;
    sw.run(s, 500);
    CHECK((s.psi - s0.psi).abs().maxCoeff() < 1e-14);
    CHECK(s.phi.abs().maxCoeff() < 1e-14);
}

TEST_CASE("complex-form runs report the conserved real-form energy") {
    Grid g{1, 128, 16.0 * M_PI};
    SpectralToolbox tb(g);
    const double eps = 0.02;
    RealPairState init = gaussian_packet(tb, 1.0);
    SolverConfig c = cfg_of(System::kgw_complex, eps, 1e-4, Scheme::rk4);
    KgwStepper ref(tb, cfg_of(System::kgw, eps, 1e-3));
    double h0 = ref.hamiltonian(init);
    ComplexState s = gauge_to_T(to_complex(init), eps);
    KgwComplexStepper kc(tb, c);
    kc.run(s, 500);
    double h1 = kgw_energy(tb, to_real_pair(ungauge_to_tau(s, eps)), eps, false);
    CHECK(std::abs(h1 - h0) / std::abs(h0) < 1e-9);
}

TEST_CASE("3d kgw stepper conserves the hamiltonian at strang order") {
    Grid g{3, 16, 8.0};
    SpectralToolbox tb(g);
    SolverConfig c = cfg_of(System::kgw, 0.05, 2e-3);
    KgwStepper st(tb, c);
    RealPairState s = gaussian_packet(tb, 1.2);
    double h0 = st.hamiltonian(s);
    double m0 = st.mass(s);
    st.run(s, 500);
    CHECK(std::abs(st.hamiltonian(s) - h0) / std::abs(h0) < 1e-6);
    CHECK(std::abs(st.mass(s) - m0) / m0 < 0.2);  // h oscillates at O(eps)
}
