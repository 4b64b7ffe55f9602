// Acceptance suite: one pass/fail line per criterion, exit nonzero if any
// criterion fails.  Run all criteria or a single one: acceptance [N].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

#include "nf/experiment.hpp"
#include "nf/modeoracle.hpp"
#include "nf/normalform.hpp"
#include "nf/parse.hpp"
#include "nf/units.hpp"

using namespace nf;

namespace {

struct Criterion {
    int id;
    const char* label;
    std::function<bool(std::string&)> run;
};

bool within(double value, double target, double tol) {
    return std::abs(value - target) <= tol;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------- criterion 1

bool symbolic_golden_suite(std::string& detail) {
    NormalFormResult res = normal_form(2);
    Functional dF2 = deviation(res.F[1]);
    Functional s1 = l_h_inverse(dF2);
    Functional s2 = l_k(s1);
    Functional s3 = l_h_inverse(s2);
    Functional s4 = l_k(s3);
    Functional s5 = l_h_inverse(s4);
    bool ok = res.Z[0] == kgw::Z1() && res.G[0] == kgw::G1() && res.Z[1] == kgw::Z2() &&
              res.F[1] == kgw::F2() && dF2 == kgw::dF2() && s1 == kgw::lh_inv_dF2() &&
              s2 == kgw::lk_lh_inv_dF2() && s3 == kgw::lh_inv_lk_lh_inv_dF2() &&
              s4 == kgw::lk_lh_inv_lk_lh_inv_dF2() &&
              s5 == kgw::lh_inv_lk_lh_inv_lk_lh_inv_dF2() && res.G[1] == kgw::G2();
    detail = ok ? "Z1, G1, Z2, F2, dF2, five intermediate expressions and G2 match exactly"
                : "coefficient mismatch against the closed-form results";
    return ok;
}

// ---------------------------------------------------------- criterion 2

bool algebraic_identities(std::string& detail) {
    NormalFormResult res = normal_form(3);
    bool ok = true;
    for (int j = 0; j < 3; ++j) {
        ok = ok && res.residuals[j].is_zero();
        ok = ok && poisson_bracket(res.Z[j], kgw::h()).is_zero();
        ok = ok && flow_average(res.G[j]).is_zero();
    }
    ok = ok && (z2_shortcut_check() == kgw::Z2());
    detail = ok ? "residuals, {Z_j,h}, <G_j> vanish exactly for j=1..3; Z2 shortcut matches"
                : "an identity failed to vanish exactly";
    return ok;
}

// ---------------------------------------------------------- criterion 3

Functional random_functional(std::mt19937& rng, int min_factors, int max_factors) {
    std::uniform_int_distribution<int> nterms(1, 2);
    std::uniform_int_distribution<int> nfac(min_factors, max_factors);
    std::uniform_int_distribution<int> lbl(0, 3);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> kern(0, 3);
    std::vector<RawTerm> raw;
    int T = nterms(rng);
    for (int t = 0; t < T; ++t) {
        RawTerm rt;
        int c = coef(rng);
        if (c == 0) c = 2;
        rt.coeff = ExactComplex(Rational(c, 2), Rational(coef(rng), 3));
        int m = nfac(rng);
        for (int i = 1; i <= m; ++i) rt.factors.push_back({static_cast<FieldLabel>(lbl(rng)), i});
        switch (kern(rng)) {
            case 0: rt.kernel = KPoly::one(); break;
            case 1: rt.kernel = KPoly::var(1, 1); break;
            case 2: rt.kernel = KPoly::var(1, m); break;
            default: rt.kernel = KPoly::var(m, m); break;
        }
        raw.push_back(std::move(rt));
    }
    return make_functional(raw);
}

bool oracle_equivalence(std::string& detail) {
    // truncation commutes with the bracket on the zero-mode system for any
    // degree, and on negation-symmetric sets with a quadratic argument;
    // averages commute unconditionally
    std::mt19937 rng(20240517);
    std::uniform_int_distribution<long long> comp(-3, 3);
    int bracket_cases = 0, average_cases = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Functional F, G;
        ModeOracle o({{0, 0, 0}});
        switch (rep % 3) {
            case 0:
                F = random_functional(rng, 1, 4);
                G = random_functional(rng, 1, 4);
                break;
            case 1: {
                // two modes +-kappa: without a zero mode every term must be
                // exactly quadratic, or a contraction routes through k = 0
                std::array<long long, 3> kv{comp(rng), comp(rng), 1 + (rep % 2)};
                o = ModeOracle({kv, {-kv[0], -kv[1], -kv[2]}});
                F = random_functional(rng, 2, 2);
                G = random_functional(rng, 2, 2);
                break;
            }
            default: {
                std::array<long long, 3> kv{comp(rng), 1 + (rep % 3), comp(rng)};
                o = ModeOracle({{0, 0, 0}, kv, {-kv[0], -kv[1], -kv[2]}});
                F = random_functional(rng, 1, 2);
                G = random_functional(rng, 1, 3);
                break;
            }
        }
        if (!ModeOracle::equal(o.evaluate(poisson_bracket(F, G)),
                               o.bracket(o.evaluate(F), o.evaluate(G)))) {
            detail = "bracket mismatch at case " + std::to_string(rep);
            return false;
        }
        ++bracket_cases;
        if (!ModeOracle::equal(o.evaluate(flow_average(F)),
                               ModeOracle::phase_average(o.evaluate(F)))) {
            detail = "average mismatch at case " + std::to_string(rep);
            return false;
        }
        ++average_cases;
    }
    detail = std::to_string(bracket_cases) + " bracket and " + std::to_string(average_cases) +
             " average cases agree exactly";
    return true;
}

// ---------------------------------------------------------- criterion 4

bool formulation_equivalence(std::string& detail) {
    Grid g{1, 256, 16.0 * M_PI};
    SpectralToolbox tb(g);
    RealPairState init = gaussian_packet(tb, 1.0);
    PairSpec ps;
    ps.a = System::kgw;
    ps.b = System::kgw_complex;
    ps.eps = 0.01;
    ps.t_end = 1.0;
    ps.samples = 1;
    ps.dt_a = 5e-4;
    ps.dt_b = 4e-5;
    ps.scheme_b = Scheme::rk4;
    PairResult r = run_pair(tb, ps, init);

    // scale by the state norm at T = 1
    SolverConfig cb;
    cb.system = System::kgw_complex;
    cb.epsilon = ps.eps;
    cb.dt = ps.dt_b;
    cb.scheme = Scheme::rk4;
    SystemRunner ref(System::kgw_complex, tb, cb, 1.0);
    ref.init(init);
    ref.advance_one_sample();
    ComplexState s = ref.comparable();
    double scale = std::sqrt(tb.integrate_abs2(s.psi) + tb.integrate(s.phi * s.phi) +
                             tb.integrate(s.pphi * s.pphi));
    double rel = r.final_error / scale;
    detail = "relative state difference " + fmt(rel) + " (tolerance 1e-8)";
    return rel <= 1e-8;
}

// ---------------------------------------------------------- criterion 5

bool approximation_scaling(std::string& detail) {
    Grid g{1, 128, 4.0 * M_PI};
    SpectralToolbox tb(g);
    RealPairState init = gaussian_packet(tb, 1.0);
    std::vector<double> epses = {0.04, 0.02, 0.01, 0.005};
    std::vector<double> first, second;
    for (double eps : epses) {
        PairSpec ps;
        ps.a = System::kgw;
        ps.b = System::sw;
        ps.eps = eps;
        ps.t_end = 1.0;
        ps.samples = 2;
        ps.jeans_a = ps.jeans_b = true;
        first.push_back(run_pair(tb, ps, init).final_error);

        PairSpec p2 = ps;
        p2.b = System::nf2;
        p2.scheme_b = Scheme::rk4;
        p2.dt_b = 2.5e-4;
        p2.g1_transform = true;
        second.push_back(run_pair(tb, p2, init).final_error);
    }
    double slope1 = fit_loglog_slope(epses, first);
    double slope2 = fit_loglog_slope(epses, second);
    detail = "KGW vs SW slope " + fmt(slope1) + " (1.0 +- 0.3); transformed vs NF2 slope " +
             fmt(slope2) + " (2.0 +- 0.3)";
    return within(slope1, 1.0, 0.3) && within(slope2, 2.0, 0.3);
}

// ---------------------------------------------------------- criterion 6

bool conservation(std::string& detail) {
    Grid g{1, 128, 16.0 * M_PI};
    SpectralToolbox tb(g);
    const double eps = 0.01;

    SolverConfig csw;
    csw.system = System::sw;
    csw.epsilon = eps;
    csw.dt = 2.5e-4;
    csw.jeans = true;
    SwStepper sw(tb, csw);
    ComplexState s = gauge_to_T(to_complex(gaussian_packet(tb, 1.0)), eps);
    double m0 = sw.mass(s);
    sw.run(s, 10000);
    double sw_drift = std::abs(sw.mass(s) - m0) / m0;

    SolverConfig csp;
    csp.system = System::sp;
    csp.epsilon = eps;
    csp.dt = 2.5e-4;
    SpStepper sp(tb, csp);
    ComplexState q = gauge_to_T(to_complex(gaussian_packet(tb, 1.0)), eps);
    double n0 = sp.mass(q);
    sp.run(q, 10000);
    double sp_drift = std::abs(sp.mass(q) - n0) / n0;

    auto energy_drift = [&](double dt) {
        SolverConfig c;
        c.system = System::kgw;
        c.epsilon = 0.05;
        c.dt = dt;
        KgwStepper st(tb, c);
        RealPairState r = gaussian_packet(tb, 1.0);
        double h0 = st.hamiltonian(r);
        st.run(r, static_cast<long long>(std::llround(20.0 / dt)));
        return std::abs(st.hamiltonian(r) - h0);
    };
    double d1 = energy_drift(4e-3), d2 = energy_drift(2e-3), d3 = energy_drift(1e-3);
    double ratio1 = d1 / d2, ratio2 = d2 / d3;

    detail = "mass drift sw " + fmt(sw_drift) + ", sp " + fmt(sp_drift) +
             " (<= 1e-12); energy ratios " + fmt(ratio1) + ", " + fmt(ratio2) + " (4 +- 0.5)";
    return sw_drift <= 1e-12 && sp_drift <= 1e-12 && within(ratio1, 4.0, 0.5) &&
           within(ratio2, 4.0, 0.5);
}

// ---------------------------------------------------------- criterion 7

bool radiative_limit(std::string& detail) {
    Grid g{1, 128, 4.0 * M_PI};
    SpectralToolbox tb(g);
    BoxGround ground = imaginary_time_ground_box(tb, 1.0, 1e-10);

    // the radiative correction vanishes identically on an exact stationary
    // state; a small multiplicative bump keeps the data near-stationary
    // while leaving a nonzero wave response to measure
    ArrayXcd psi = ground.state.psi;
    for (int i = 0; i < g.n; ++i) {
        double x = tb.coord(i) - g.length / 2;
        psi[i] *= 1.0 + 0.02 * std::exp(-x * x);
    }
    psi *= std::sqrt(1.0 / tb.integrate_abs2(psi));
    RealPairState init;
    init.u = std::sqrt(2.0) * psi.real();
    init.pu = std::sqrt(2.0) * psi.imag();
    init.phi = tb.inverse_laplacian_zero_mean(psi.abs2());
    init.pphi = ArrayXd::Zero(g.size());

    std::vector<double> epses = {0.04, 0.02, 0.01, 0.005};
    std::vector<double> errs;
    for (double eps : epses) {
        PairSpec ps;
        ps.a = System::sw;
        ps.b = System::sp;
        ps.eps = eps;
        ps.t_end = 1.0;
        ps.samples = 20;
        ps.jeans_a = true;
        ps.norm = ErrorNorm::L2_psi;
        errs.push_back(run_pair(tb, ps, init).sup_error);
    }
    double slope = fit_loglog_slope(epses, errs);
    detail = "sup_T<=1 |Psi_SW - Psi_SP| slope " + fmt(slope) + " (1.0 +- 0.4)";
    return within(slope, 1.0, 0.4);
}

// ---------------------------------------------------------- criterion 8

bool stationary_states(std::string& detail) {
    EigenResult shoot0 = shoot_radial(0, 1e-8);
    EigenResult flow0 = imaginary_time_ground(1e-8);
    double agree = std::abs(shoot0.omega - flow0.omega) / std::abs(shoot0.omega);

    EigenResult shoot1 = shoot_radial(1, 1e-8);
    EigenResult shoot2 = shoot_radial(2, 1e-8);
    bool ordered = shoot0.mu > shoot1.mu && shoot1.mu > shoot2.mu && shoot2.mu > 0;

    Grid g{1, 256, 16.0 * M_PI};
    SpectralToolbox tb(g);
    BoxGround ground = imaginary_time_ground_box(tb, 1.0, 1e-10);
    SolverConfig cfg;
    cfg.system = System::sp;
    cfg.epsilon = 0.01;
    cfg.dt = 5e-4;
    SpStepper sp(tb, cfg);
    ComplexState s = ground.state;
    ArrayXd amp0 = s.psi.abs();
    sp.run(s, static_cast<long long>(std::llround(10.0 / cfg.dt)));
    double drift = (s.psi.abs() - amp0).abs().maxCoeff();

    detail = "eigenvalue agreement " + fmt(agree) + " (<= 1e-6); mu sequence " + fmt(shoot0.mu) +
             " > " + fmt(shoot1.mu) + " > " + fmt(shoot2.mu) + " > 0; |Psi| drift " + fmt(drift) +
             " over T = 10 (<= 1e-6)";
    return agree <= 1e-6 && ordered && drift <= 1e-6;
}

// ---------------------------------------------------------- criterion 9

bool unit_conversion(std::string& detail) {
    bool ok = true;
    double lo = 1e300, hi = -1e300;
    for (double m : {1e-58, 2.5e-58, 5e-58, 1e-57}) {
        PhysicalParams p = convert_units(m, 1e12 * constants::solar_mass);
        int decade = static_cast<int>(std::floor(std::log10(p.mu2)));
        ok = ok && decade >= 4 && decade <= 6;
        lo = std::min(lo, p.mu2);
        hi = std::max(hi, p.mu2);
    }
    PhysicalParams mid = convert_units(1e-57, 1e12 * constants::solar_mass);
    ok = ok && mid.mu2 > 1e4 && mid.mu2 < 1e6;
    detail = "mu^2 spans [" + fmt(lo) + ", " + fmt(hi) + "] over the quoted mass range";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "symbolic golden suite (closed-form results and the full second-order chain)",
         symbolic_golden_suite},
        {2, "algebraic identities through order 3", algebraic_identities},
        {3, "oracle equivalence on 2- and 3-mode truncations, 100 cases", oracle_equivalence},
        {4, "real-form vs complex-form KGW agreement at T = 1", formulation_equivalence},
        {5, "first- and second-order approximation scaling in epsilon", approximation_scaling},
        {6, "mass conservation and Strang energy-drift order", conservation},
        {7, "SW to SP radiative limit scaling", radiative_limit},
        {8, "stationary states: dual-method eigenvalues, mu ordering, SP stationarity",
         stationary_states},
        {9, "unit conversion reproduces the quoted mu^2 window", unit_conversion},
    };

    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        auto t1 = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(t1 - t0).count();
        std::printf("[%s] criterion %d: %s — %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.label,
                    detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
