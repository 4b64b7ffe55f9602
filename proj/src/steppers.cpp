#include "nf/steppers.hpp"

namespace nf {

const char* system_name(System s) {
    switch (s) {
        case System::kgw: return "kgw";
        case System::kgw_complex: return "kgw_complex";
        case System::sw: return "sw";
        case System::sp: return "sp";
        case System::nf2: return "nf2";
    }
    return "?";
}

double default_dt(const Grid& grid, double eps) {
    return std::min(1e-3, 0.1 * std::sqrt(eps) * grid.dx());
}

namespace {

void check_finite(double v, long long step, const char* what) {
    if (!std::isfinite(v)) throw SolverError(std::string("solver failure (") + what + ")", step);
}

// Fourier-space quadratic form sum k^2 |f_hat|^2 -> int |grad f|^2
double grad_energy(const SpectralToolbox& tb, const ArrayXd& f) {
    ArrayXcd g = f.cast<cplx>();
    tb.to_fourier(g);
    double s = (tb.k_squared() * g.abs2()).sum();
    return s * tb.grid().cell_volume() / static_cast<double>(g.size());
}

double grad_energy(const SpectralToolbox& tb, const ArrayXcd& f) {
    ArrayXcd g = f;
    tb.to_fourier(g);
    double s = (tb.k_squared() * g.abs2()).sum();
    return s * tb.grid().cell_volume() / static_cast<double>(g.size());
}

}  // namespace

// -------------------------------------------------------------------- KGW

KgwStepper::KgwStepper(const SpectralToolbox& tb, const SolverConfig& cfg) : tb_(tb), cfg_(cfg) {
    if (cfg_.dt <= 0) cfg_.dt = default_dt(tb.grid(), cfg_.epsilon);
    half_ = make_tables(cfg_.dt / 2);
    full_ = make_tables(cfg_.dt);
}

KgwStepper::Rot KgwStepper::make_tables(double h) const {
    const ArrayXd& k2 = tb_.k_squared();
    const double eps = cfg_.epsilon;
    Rot r;
    const Eigen::Index n = k2.size();
    r.cu.resize(n); r.su.resize(n); r.swu.resize(n);
    r.cp.resize(n); r.sp.resize(n); r.swp.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double wu = std::sqrt(1.0 + eps * k2[i]);
        r.cu[i] = std::cos(wu * h);
        r.su[i] = std::sin(wu * h) / wu;
        r.swu[i] = wu * std::sin(wu * h);
        double wp2 = eps * k2[i];
        if (wp2 > 0) {
            double wp = std::sqrt(wp2);
            r.cp[i] = std::cos(wp * h);
            r.sp[i] = std::sin(wp * h) / wp;
            r.swp[i] = wp * std::sin(wp * h);
        } else {
            // free zero mode: phi += p_phi h
            r.cp[i] = 1.0;
            r.sp[i] = h;
            r.swp[i] = 0.0;
        }
    }
    return r;
}

void KgwStepper::linear_flow(RealPairState& s, const Rot& r) const {
    ArrayXcd u = s.u.cast<cplx>(), pu = s.pu.cast<cplx>();
    ArrayXcd ph = s.phi.cast<cplx>(), pp = s.pphi.cast<cplx>();
    tb_.to_fourier(u);
    tb_.to_fourier(pu);
    tb_.to_fourier(ph);
    tb_.to_fourier(pp);
    ArrayXcd u2 = r.cu.cast<cplx>() * u + r.su.cast<cplx>() * pu;
    ArrayXcd pu2 = -r.swu.cast<cplx>() * u + r.cu.cast<cplx>() * pu;
    ArrayXcd ph2 = r.cp.cast<cplx>() * ph + r.sp.cast<cplx>() * pp;
    ArrayXcd pp2 = -r.swp.cast<cplx>() * ph + r.cp.cast<cplx>() * pp;
    tb_.to_real(u2);
    tb_.to_real(pu2);
    tb_.to_real(ph2);
    tb_.to_real(pp2);
    s.u = u2.real();
    s.pu = pu2.real();
    s.phi = ph2.real();
    s.pphi = pp2.real();
}

void KgwStepper::kick(RealPairState& s, double h) const {
    const double eps = cfg_.epsilon;
    ArrayXd phi_eff = cfg_.jeans ? tb_.zero_mean(s.phi) : s.phi;
    ArrayXd src = s.u * s.u;
    if (cfg_.jeans) src = tb_.zero_mean(src);
    s.pu -= (2.0 * eps * h) * phi_eff * s.u;
    s.pphi -= (eps * h) * src;
}

void KgwStepper::rk4_step(RealPairState& s) const {
    const double eps = cfg_.epsilon, h = cfg_.dt;
    auto rhs = [&](const RealPairState& x) {
        RealPairState d;
        ArrayXd phi_eff = cfg_.jeans ? tb_.zero_mean(x.phi) : x.phi;
        ArrayXd coupling = phi_eff * x.u;
        ArrayXd src = x.u * x.u;
        coupling = tb_.dealias(coupling);
        src = tb_.dealias(src);
        if (cfg_.jeans) src = tb_.zero_mean(src);
        d.u = x.pu;
        d.pu = -x.u + eps * (tb_.laplacian(x.u) - 2.0 * coupling);
        d.phi = x.pphi;
        d.pphi = eps * (tb_.laplacian(x.phi) - src);
        return d;
    };
    RealPairState k1 = rhs(s);
    RealPairState t = s;
    t.u = s.u + 0.5 * h * k1.u; t.pu = s.pu + 0.5 * h * k1.pu;
    t.phi = s.phi + 0.5 * h * k1.phi; t.pphi = s.pphi + 0.5 * h * k1.pphi;
    RealPairState k2 = rhs(t);
    t.u = s.u + 0.5 * h * k2.u; t.pu = s.pu + 0.5 * h * k2.pu;
    t.phi = s.phi + 0.5 * h * k2.phi; t.pphi = s.pphi + 0.5 * h * k2.pphi;
    RealPairState k3 = rhs(t);
    t.u = s.u + h * k3.u; t.pu = s.pu + h * k3.pu;
    t.phi = s.phi + h * k3.phi; t.pphi = s.pphi + h * k3.pphi;
    RealPairState k4 = rhs(t);
    s.u += (h / 6.0) * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
    s.pu += (h / 6.0) * (k1.pu + 2 * k2.pu + 2 * k3.pu + k4.pu);
    s.phi += (h / 6.0) * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
    s.pphi += (h / 6.0) * (k1.pphi + 2 * k2.pphi + 2 * k3.pphi + k4.pphi);
}

void KgwStepper::run(RealPairState& s, long long nsteps) const {
    if (nsteps <= 0) return;
    const double h = cfg_.dt;
    if (cfg_.scheme == Scheme::rk4) {
        for (long long i = 0; i < nsteps; ++i) {
            rk4_step(s);
            s.time += h;
            if (i % 512 == 0) check_finite(s.u[0] + s.pphi[0], i, "kgw rk4");
        }
        return;
    }
    // fused Strang: A(h/2) K (A(h) K)^{n-1} A(h/2)
    linear_flow(s, half_);
    kick(s, h);
    for (long long i = 1; i < nsteps; ++i) {
        linear_flow(s, full_);
        kick(s, h);
        if (i % 512 == 0) check_finite(s.u[0] + s.pphi[0], i, "kgw strang");
    }
    linear_flow(s, half_);
    s.time += h * static_cast<double>(nsteps);
}

double kgw_energy(const SpectralToolbox& tb, const RealPairState& s, double eps, bool jeans) {
    double quad = tb.integrate(0.5 * (s.pu * s.pu + s.u * s.u + s.pphi * s.pphi));
    double grad = 0.5 * eps * (grad_energy(tb, s.u) + grad_energy(tb, s.phi));
    ArrayXd phi_eff = jeans ? tb.zero_mean(s.phi) : s.phi;
    double coupling = eps * tb.integrate(phi_eff * s.u * s.u);
    return quad + grad + coupling;
}

double KgwStepper::hamiltonian(const RealPairState& s) const {
    return kgw_energy(tb_, s, cfg_.epsilon, cfg_.jeans);
}

double KgwStepper::mass(const RealPairState& s) const {
    return tb_.integrate(0.5 * (s.u * s.u + s.pu * s.pu));
}

// ------------------------------------------------------------ complex KGW

KgwComplexStepper::KgwComplexStepper(const SpectralToolbox& tb, const SolverConfig& cfg)
    : tb_(tb), cfg_(cfg) {
    if (cfg_.dt <= 0) cfg_.dt = default_dt(tb.grid(), cfg_.epsilon);
}

void KgwComplexStepper::run(ComplexState& s, long long nsteps) const {
    const double eps = cfg_.epsilon, h = cfg_.dt;
    struct D {
        ArrayXcd psi;
        ArrayXd phi, pphi;
    };
    auto rhs = [&](const ComplexState& x, double T) {
        D d;
        ArrayXd phi_eff = cfg_.jeans ? tb_.zero_mean(x.phi) : x.phi;
        cplx osc = std::exp(cplx(0, 2.0 * T / eps));
        ArrayXcd lap_psi = tb_.laplacian(x.psi);
        ArrayXcd lap_psis = lap_psi.conjugate();
        ArrayXcd coupling = phi_eff.cast<cplx>() * x.psi;
        ArrayXcd coupling_s = phi_eff.cast<cplx>() * x.psi.conjugate();
        tb_.dealias(coupling);
        tb_.dealias(coupling_s);
        d.psi = cplx(0, -1) * (-0.5 * lap_psi + coupling + osc * (-0.5 * lap_psis + coupling_s));
        d.phi = x.pphi / eps;
        ArrayXcd psi2 = x.psi * x.psi;
        tb_.dealias(psi2);
        ArrayXcd dens = x.psi * x.psi.conjugate();
        tb_.dealias(dens);
        ArrayXd src = dens.real() + (0.5 * osc * psi2.conjugate() + 0.5 * std::conj(osc) * psi2).real();
        if (cfg_.jeans) src = tb_.zero_mean(src);
        d.pphi = tb_.laplacian(x.phi) - src;
        return d;
    };
    for (long long i = 0; i < nsteps; ++i) {
        double T = s.time;
        D k1 = rhs(s, T);
        ComplexState t = s;
        t.psi = s.psi + 0.5 * h * k1.psi; t.phi = s.phi + 0.5 * h * k1.phi;
        t.pphi = s.pphi + 0.5 * h * k1.pphi;
        D k2 = rhs(t, T + 0.5 * h);
        t.psi = s.psi + 0.5 * h * k2.psi; t.phi = s.phi + 0.5 * h * k2.phi;
        t.pphi = s.pphi + 0.5 * h * k2.pphi;
        D k3 = rhs(t, T + 0.5 * h);
        t.psi = s.psi + h * k3.psi; t.phi = s.phi + h * k3.phi;
        t.pphi = s.pphi + h * k3.pphi;
        D k4 = rhs(t, T + h);
        s.psi += (h / 6.0) * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi);
        s.phi += (h / 6.0) * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
        s.pphi += (h / 6.0) * (k1.pphi + 2 * k2.pphi + 2 * k3.pphi + k4.pphi);
        s.time += h;
        if (i % 256 == 0) check_finite(std::abs(s.psi[0]) + s.pphi[0], i, "kgw_complex rk4");
    }
}

double KgwComplexStepper::mass(const ComplexState& s) const { return tb_.integrate_abs2(s.psi); }

// --------------------------------------------------------------------- SW

SwStepper::SwStepper(const SpectralToolbox& tb, const SolverConfig& cfg) : tb_(tb), cfg_(cfg) {
    if (cfg_.dt <= 0) cfg_.dt = default_dt(tb.grid(), cfg_.epsilon);
    half_ = make_tables(cfg_.dt / 2);
    full_ = make_tables(cfg_.dt);
}

SwStepper::Rot SwStepper::make_tables(double h) const {
    const ArrayXd& k2 = tb_.k_squared();
    const double eps = cfg_.epsilon;
    Rot r;
    const Eigen::Index n = k2.size();
    r.kin.resize(n);
    r.cp.resize(n); r.sp.resize(n); r.swp.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r.kin[i] = std::exp(cplx(0, -0.5 * k2[i] * h));
        if (k2[i] > 0) {
            // phi' = p/eps, p' = -k^2 phi: frequency |k|/sqrt(eps)
            double w = std::sqrt(k2[i] / eps);
            r.cp[i] = std::cos(w * h);
            r.sp[i] = std::sin(w * h) / (eps * w);
            r.swp[i] = eps * w * std::sin(w * h);
        } else {
            r.cp[i] = 1.0;
            r.sp[i] = h / eps;
            r.swp[i] = 0.0;
        }
    }
    return r;
}

void SwStepper::linear_flow(ComplexState& s, const Rot& r) const {
    ArrayXcd psi = s.psi;
    ArrayXcd ph = s.phi.cast<cplx>(), pp = s.pphi.cast<cplx>();
    tb_.to_fourier(psi);
    tb_.to_fourier(ph);
    tb_.to_fourier(pp);
    psi *= r.kin;
    ArrayXcd ph2 = r.cp.cast<cplx>() * ph + r.sp.cast<cplx>() * pp;
    ArrayXcd pp2 = -r.swp.cast<cplx>() * ph + r.cp.cast<cplx>() * pp;
    tb_.to_real(psi);
    tb_.to_real(ph2);
    tb_.to_real(pp2);
    s.psi = psi;
    s.phi = ph2.real();
    s.pphi = pp2.real();
}

void SwStepper::kick(ComplexState& s, double h) const {
    ArrayXd phi_eff = cfg_.jeans ? tb_.zero_mean(s.phi) : s.phi;
    s.psi *= (cplx(0, -h) * phi_eff.cast<cplx>()).exp();
    ArrayXd src = s.psi.abs2();
    if (cfg_.jeans) src = tb_.zero_mean(src);
    s.pphi -= h * src;
}

void SwStepper::run(ComplexState& s, long long nsteps) const {
    if (nsteps <= 0) return;
    const double h = cfg_.dt;
    linear_flow(s, half_);
    kick(s, h);
    for (long long i = 1; i < nsteps; ++i) {
        linear_flow(s, full_);
        kick(s, h);
        if (i % 512 == 0) check_finite(std::abs(s.psi[0]) + s.pphi[0], i, "sw strang");
    }
    linear_flow(s, half_);
    s.time += h * static_cast<double>(nsteps);
}

double SwStepper::hamiltonian(const ComplexState& s) const {
    const double eps = cfg_.epsilon;
    ArrayXd phi_eff = cfg_.jeans ? tb_.zero_mean(s.phi) : s.phi;
    double e = 0.5 * grad_energy(tb_, s.psi) + 0.5 * grad_energy(tb_, s.phi);
    e += tb_.integrate(s.pphi * s.pphi) / (2.0 * eps);
    e += tb_.integrate(phi_eff * s.psi.abs2());
    return e;
}

double SwStepper::mass(const ComplexState& s) const { return tb_.integrate_abs2(s.psi); }

// --------------------------------------------------------------------- SP

SpStepper::SpStepper(const SpectralToolbox& tb, const SolverConfig& cfg) : tb_(tb), cfg_(cfg) {
    if (cfg_.dt <= 0) cfg_.dt = default_dt(tb.grid(), cfg_.epsilon);
    const ArrayXd& k2 = tb_.k_squared();
    kin_half_ = (cplx(0, -0.25 * cfg_.dt) * k2.cast<cplx>()).exp();
    kin_full_ = (cplx(0, -0.5 * cfg_.dt) * k2.cast<cplx>()).exp();
}

void SpStepper::refresh_potential(ComplexState& s) const {
    s.phi = tb_.inverse_laplacian_zero_mean(s.psi.abs2());
}

void SpStepper::run(ComplexState& s, long long nsteps) const {
    if (nsteps <= 0) return;
    const double h = cfg_.dt;
    auto kinetic = [&](const ArrayXcd& table) {
        tb_.to_fourier(s.psi);
        s.psi *= table;
        tb_.to_real(s.psi);
    };
    auto potential = [&]() {
        refresh_potential(s);
        s.psi *= (cplx(0, -h) * s.phi.cast<cplx>()).exp();
    };
    kinetic(kin_half_);
    potential();
    for (long long i = 1; i < nsteps; ++i) {
        kinetic(kin_full_);
        potential();
        if (i % 512 == 0) check_finite(std::abs(s.psi[0]), i, "sp strang");
    }
    kinetic(kin_half_);
    s.time += h * static_cast<double>(nsteps);
    refresh_potential(s);
}

double SpStepper::hamiltonian(const ComplexState& s) const {
    ArrayXd phi = tb_.inverse_laplacian_zero_mean(s.psi.abs2());
    return 0.5 * grad_energy(tb_, s.psi) + 0.5 * tb_.integrate(phi * s.psi.abs2());
}

double SpStepper::mass(const ComplexState& s) const { return tb_.integrate_abs2(s.psi); }

// -------------------------------------------------------------------- NF2

Nf2Stepper::Nf2Stepper(const SpectralToolbox& tb, const SolverConfig& cfg) : tb_(tb), cfg_(cfg) {
    if (cfg_.dt <= 0) cfg_.dt = default_dt(tb.grid(), cfg_.epsilon);
}

Nf2Stepper::Rhs sw_rhs(const SpectralToolbox& tb, const ComplexState& s, double eps, bool jeans) {
    Nf2Stepper::Rhs d;
    ArrayXd phi_eff = jeans ? tb.zero_mean(s.phi) : s.phi;
    ArrayXcd coupling = phi_eff.cast<cplx>() * s.psi;
    tb.dealias(coupling);
    d.dpsi = cplx(0, -1) * (-0.5 * tb.laplacian(s.psi) + coupling);
    d.dphi = s.pphi / eps;
    ArrayXd src = s.psi.abs2();
    if (jeans) src = tb.zero_mean(src);
    d.dpphi = tb.laplacian(s.phi) - src;
    return d;
}

Nf2Stepper::Rhs Nf2Stepper::correction(const ComplexState& s) const {
    // Hamilton equations of Z2 in gauged frame-T variables:
    //   i dPsi  = -(1/8) lap^2 Psi + (1/4)(phi lap Psi + lap(phi Psi))
    //             + (i/16)(p lap Psi - lap(p Psi)) - (1/2) phi^2 Psi + (1/8)|Psi|^2 Psi
    //   dphi    = -(1/8) Im(Psi* lap Psi)
    //   dp_phi  = -(1/4) 2Re(Psi* lap Psi) + phi |Psi|^2
    // In the zero-mean gauge the second-order correction carries one extra
    // nonlocal term, -(1/16V)(int Psi^2)(int Psi*^2), whose only effect is
    // i dPsi += -(1/8V)(int Psi^2) Psi*.
    Rhs d;
    ArrayXd phi_eff = cfg_.jeans ? tb_.zero_mean(s.phi) : s.phi;
    ArrayXcd lap_psi = tb_.laplacian(s.psi);
    ArrayXcd lap2_psi = tb_.laplacian(lap_psi);
    ArrayXcd phi_psi = phi_eff.cast<cplx>() * s.psi;
    tb_.dealias(phi_psi);
    ArrayXcd p_psi = s.pphi.cast<cplx>() * s.psi;
    tb_.dealias(p_psi);
    ArrayXcd phi_lap = phi_eff.cast<cplx>() * lap_psi;
    tb_.dealias(phi_lap);
    ArrayXcd p_lap = s.pphi.cast<cplx>() * lap_psi;
    tb_.dealias(p_lap);
    ArrayXcd phi2_psi = (phi_eff * phi_eff).cast<cplx>() * s.psi;
    tb_.dealias(phi2_psi);
    ArrayXcd cubic = s.psi.abs2().cast<cplx>() * s.psi;
    tb_.dealias(cubic);

    ArrayXcd hpsi = -0.125 * lap2_psi + 0.25 * (phi_lap + tb_.laplacian(phi_psi)) +
                    cplx(0, 1.0 / 16.0) * (p_lap - tb_.laplacian(p_psi)) - 0.5 * phi2_psi +
                    0.125 * cubic;
    if (cfg_.jeans) {
        const double vol = tb_.grid().cell_volume() * static_cast<double>(s.psi.size());
        cplx s2 = (s.psi * s.psi).sum() * tb_.grid().cell_volume();
        hpsi += (-1.0 / (8.0 * vol)) * s2 * s.psi.conjugate();
    }
    d.dpsi = cplx(0, -1) * hpsi;

    ArrayXd quad = (s.psi.conjugate() * lap_psi).imag();
    d.dphi = -0.125 * quad;

    ArrayXd re_quad = (s.psi.conjugate() * lap_psi).real();
    ArrayXd src = -0.5 * re_quad + phi_eff * s.psi.abs2();
    if (cfg_.jeans) src = tb_.zero_mean(src);
    d.dpphi = src;
    return d;
}

Nf2Stepper::Rhs Nf2Stepper::rhs(const ComplexState& s) const {
    Rhs base = sw_rhs(tb_, s, cfg_.epsilon, cfg_.jeans);
    Rhs corr = correction(s);
    Rhs d;
    d.dpsi = base.dpsi + cfg_.epsilon * corr.dpsi;
    d.dphi = base.dphi + cfg_.epsilon * corr.dphi;
    d.dpphi = base.dpphi + cfg_.epsilon * corr.dpphi;
    return d;
}

void Nf2Stepper::run(ComplexState& s, long long nsteps) const {
    const double h = cfg_.dt;
    for (long long i = 0; i < nsteps; ++i) {
        Rhs k1 = rhs(s);
        ComplexState t = s;
        t.psi = s.psi + 0.5 * h * k1.dpsi; t.phi = s.phi + 0.5 * h * k1.dphi;
        t.pphi = s.pphi + 0.5 * h * k1.dpphi;
        Rhs k2 = rhs(t);
        t.psi = s.psi + 0.5 * h * k2.dpsi; t.phi = s.phi + 0.5 * h * k2.dphi;
        t.pphi = s.pphi + 0.5 * h * k2.dpphi;
        Rhs k3 = rhs(t);
        t.psi = s.psi + h * k3.dpsi; t.phi = s.phi + h * k3.dphi;
        t.pphi = s.pphi + h * k3.dpphi;
        Rhs k4 = rhs(t);
        s.psi += (h / 6.0) * (k1.dpsi + 2 * k2.dpsi + 2 * k3.dpsi + k4.dpsi);
        s.phi += (h / 6.0) * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi);
        s.pphi += (h / 6.0) * (k1.dpphi + 2 * k2.dpphi + 2 * k3.dpphi + k4.dpphi);
        s.time += h;
        if (i % 64 == 0) {
            double norm = s.psi.abs2().sum();
            if (!std::isfinite(norm) || norm > 1e12)
                throw SolverError("solver failure (nf2 instability)", i);
        }
    }
}

double Nf2Stepper::hamiltonian(const ComplexState& s) const {
    const double eps = cfg_.epsilon;
    ArrayXd phi_eff = cfg_.jeans ? tb_.zero_mean(s.phi) : s.phi;
    double e = 0.5 * grad_energy(tb_, s.psi) + 0.5 * grad_energy(tb_, s.phi);
    e += tb_.integrate(s.pphi * s.pphi) / (2.0 * eps);
    e += tb_.integrate(phi_eff * s.psi.abs2());

    ArrayXcd lap_psi = tb_.laplacian(s.psi);
    ArrayXd re_quad = (s.psi.conjugate() * lap_psi).real();
    ArrayXd im_quad = (s.psi.conjugate() * lap_psi).imag();
    double e2 = -0.125 * tb_.integrate_abs2(lap_psi) + 0.5 * tb_.integrate(phi_eff * re_quad) -
                0.125 * tb_.integrate(s.pphi * im_quad) -
                0.5 * tb_.integrate(phi_eff * phi_eff * s.psi.abs2()) +
                (1.0 / 16.0) * tb_.integrate(s.psi.abs2() * s.psi.abs2());
    if (cfg_.jeans) {
        const double vol = tb_.grid().cell_volume() * static_cast<double>(s.psi.size());
        cplx s2 = (s.psi * s.psi).sum() * tb_.grid().cell_volume();
        e2 += -std::norm(s2) / (16.0 * vol);
    }
    return e + eps * e2;
}

double Nf2Stepper::mass(const ComplexState& s) const { return tb_.integrate_abs2(s.psi); }

// ---------------------------------------------------------------- G1 flow

G1Flow::G1Flow(const SpectralToolbox& tb, double eps, int substeps, bool jeans)
    : tb_(tb), eps_(eps), substeps_(substeps), jeans_(jeans) {}

ComplexState G1Flow::map(const ComplexState& s, int direction) const {
    if (s.frame != Frame::tau || s.gauged)
        throw std::invalid_argument("G1Flow: expects an ungauged tau-frame state");
    // ds psi   = (1/4) lap psi* - (1/2) phi psi* - (i/4) p_phi psi*
    // ds phi   = (1/4) Re(psi^2)
    // ds p_phi = (1/2) Im(psi^2)
    struct D {
        ArrayXcd psi;
        ArrayXd phi, pphi;
    };
    auto rhs = [&](const ComplexState& x) {
        D d;
        ArrayXcd psis = x.psi.conjugate();
        ArrayXcd coupling = (x.phi.cast<cplx>() * 0.5 + cplx(0, 0.25) * x.pphi.cast<cplx>()) * psis;
        tb_.dealias(coupling);
        d.psi = 0.25 * tb_.laplacian(psis) - coupling;
        ArrayXcd psi2 = x.psi * x.psi;
        tb_.dealias(psi2);
        d.phi = 0.25 * psi2.real();
        d.pphi = 0.5 * psi2.imag();
        if (jeans_) {
            d.phi = tb_.zero_mean(d.phi);
            d.pphi = tb_.zero_mean(d.pphi);
        }
        return d;
    };
    ComplexState x = s;
    double h = direction * eps_ / substeps_;
    for (int i = 0; i < substeps_; ++i) {
        D k1 = rhs(x);
        ComplexState t = x;
        t.psi = x.psi + 0.5 * h * k1.psi; t.phi = x.phi + 0.5 * h * k1.phi;
        t.pphi = x.pphi + 0.5 * h * k1.pphi;
        D k2 = rhs(t);
        t.psi = x.psi + 0.5 * h * k2.psi; t.phi = x.phi + 0.5 * h * k2.phi;
        t.pphi = x.pphi + 0.5 * h * k2.pphi;
        D k3 = rhs(t);
        t.psi = x.psi + h * k3.psi; t.phi = x.phi + h * k3.phi;
        t.pphi = x.pphi + h * k3.pphi;
        D k4 = rhs(t);
        x.psi += (h / 6.0) * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi);
        x.phi += (h / 6.0) * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
        x.pphi += (h / 6.0) * (k1.pphi + 2 * k2.pphi + 2 * k3.pphi + k4.pphi);
    }
    return x;
}

}  // namespace nf
