#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nf/stationary.hpp"
#include "nf/steppers.hpp"

using namespace nf;

TEST_CASE("ground state: shooting and imaginary time agree to 1e-6") {
    EigenResult shoot = shoot_radial(0, 1e-8);
    CHECK(shoot.nodes == 0);
    CHECK(shoot.omega < 0);
    CHECK(shoot.residual < 1e-8);

    EigenResult flow = imaginary_time_ground(1e-8);
    CHECK(flow.nodes == 0);
    CHECK(std::abs(flow.omega - shoot.omega) / std::abs(shoot.omega) < 1e-6);

    // ground profile is radially monotone decreasing
    bool monotone = true;
    for (Eigen::Index i = 1; i < flow.profile.chi.size(); ++i) {
        if (flow.profile.chi[i] > flow.profile.chi[i - 1] + 1e-12) {
            monotone = false;
            break;
        }
    }
    CHECK(monotone);
}

TEST_CASE("mu sequence is positive and strictly decreasing") {
    EigenResult e0 = shoot_radial(0, 1e-8);
    EigenResult e1 = shoot_radial(1, 1e-8);
    EigenResult e2 = shoot_radial(2, 1e-8);
    EigenResult e3 = shoot_radial(3, 1e-8);
    CHECK(e0.nodes == 0);
    CHECK(e1.nodes == 1);
    CHECK(e2.nodes == 2);
    CHECK(e3.nodes == 3);
    CHECK(e0.mu > e1.mu);
    CHECK(e1.mu > e2.mu);
    CHECK(e2.mu > e3.mu);
    CHECK(e3.mu > 0);

    auto gate_hi = existence_gate(e0.mu * 1.5, {e0.mu, e1.mu, e2.mu});
    CHECK_FALSE(gate_hi.exists);
    CHECK(gate_hi.mu0 == doctest::Approx(e0.mu));
    auto gate_1 = existence_gate(e1.mu, {e0.mu, e1.mu, e2.mu});
    CHECK(gate_1.exists);
    CHECK(gate_1.nearest_j == 1);
}

TEST_CASE("scaling family satisfies the equations") {
    EigenResult e = shoot_radial(0, 1e-8);
    for (double alpha : {0.5, 2.0}) {
        RadialProfile q = rescale_profile(e.profile, alpha);
        double res = radial_residual(q, alpha * alpha * e.omega);
        CHECK(res < 10.0 * 1e-8);
    }
}

TEST_CASE("mu_from_omega domain and arithmetic") {
    CHECK(mu_from_omega(-0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(mu_from_omega(0.1), PreconditionError);
    CHECK_THROWS_AS(mu_from_omega(0.0), PreconditionError);
}

TEST_CASE("box ground state is stationary under the sp stepper") {
    Grid g{1, 256, 16.0 * M_PI};
    SpectralToolbox tb(g);
    BoxGround ground = imaginary_time_ground_box(tb, 1.0, 1e-10);
    CHECK(ground.residual <= 1e-10);

    SolverConfig cfg;
    cfg.system = System::sp;
    cfg.epsilon = 0.01;
    cfg.dt = 5e-4;
    SpStepper sp(tb, cfg);
    ComplexState s = ground.state;
    ArrayXd amp0 = s.psi.abs();
    sp.run(s, static_cast<long long>(std::llround(10.0 / cfg.dt)));
    double drift = (s.psi.abs() - amp0).abs().maxCoeff();
    CHECK(drift < 1e-6);
}

TEST_CASE("box ground state is a standing wave of jeans-sw at any eps") {
    Grid g{1, 128, 16.0 * M_PI};
    SpectralToolbox tb(g);
    BoxGround ground = imaginary_time_ground_box(tb, 1.0, 1e-10);
    for (double eps : {0.04, 0.5}) {
        SolverConfig cfg;
        cfg.system = System::sw;
        cfg.epsilon = eps;
        cfg.dt = 1e-4;
        cfg.jeans = true;
        SwStepper sw(tb, cfg);
        ComplexState s = ground.state;
        ArrayXd amp0 = s.psi.abs();
        sw.run(s, 10000);
        CHECK((s.psi.abs() - amp0).abs().maxCoeff() < 1e-6);
    }
}
