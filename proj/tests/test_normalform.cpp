#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nf/normalform.hpp"
#include "nf/parse.hpp"
#include "nf/pretty.hpp"

using namespace nf;

TEST_CASE("flow average and deviation act by charge projection") {
    CHECK(flow_average(kgw::H1()) == kgw::Z1());
    CHECK(flow_average(flow_average(kgw::H1())) == kgw::Z1());
    CHECK(flow_average(build("int[phi psi^2]")).is_zero());
    CHECK(deviation(kgw::H1()) == kgw::dH1());
    CHECK(deviation(kgw::Z1()).is_zero());
    CHECK(flow_average(deviation(kgw::F2())).is_zero());
}

TEST_CASE("L_h inverse multiplies charge-n terms by i/n") {
    CHECK(l_h_inverse(kgw::dH1()) == kgw::lh_inv_dH1());
    CHECK(l_h_inverse(build("int[phi psi^2]")) ==
          build("int[phi psi^2]").scaled(ExactComplex::i_over(2)));
    CHECK_THROWS_AS(l_h_inverse(build("int[psi psi*]")), PreconditionError);

    // L_h (L_h^{-1} X) = X on zero-average inputs
    Functional X = build("int[phi psi^2 - 3 pphi psi*^2 + (i/3) lap(psi) psi phi^2]");
    CHECK(poisson_bracket(l_h_inverse(X), kgw::h()) == X);

    // frequency-generalized interface: unit frequency is the default,
    // a tight threshold trips the small-divisor guard
    CHECK(l_h_inverse(kgw::dH1(), Rational(1)) == kgw::lh_inv_dH1());
    CHECK_THROWS_AS(l_h_inverse(kgw::dH1(), Rational(1, 100), Rational(1)), SmallDivisorError);
}

TEST_CASE("L_k replaces phi by pphi and matches the bracket with k") {
    CHECK(l_k(kgw::lh_inv_dH1()) == kgw::lk_lh_inv_dH1());
    CHECK(l_k(build("int[grad(psi).grad(psi*)]")).is_zero());
    CHECK(l_k(build("int[phi^2 psi psi*]")) == build("int[2 phi pphi psi psi*]"));

    Functional F = build("int[phi^2 psi^2 + (i/2) lap(phi) pphi psi psi*]");
    CHECK(l_k(F) == poisson_bracket(F, kgw::k()));
}

TEST_CASE("first-order chain reproduces the closed forms term by term") {
    Functional dH1 = deviation(kgw::H1());
    Functional y = l_h_inverse(dH1);
    CHECK(y == kgw::lh_inv_dH1());
    CHECK(l_k(y) == kgw::lk_lh_inv_dH1());
    CHECK(l_h_inverse(l_k(y)) == kgw::lh_inv_lk_lh_inv_dH1());
    CHECK(l_k(l_h_inverse(l_k(y))).is_zero());
    CHECK(solve_generator(dH1) == kgw::G1());
}

TEST_CASE("solve_generator truncates by phi-degree nilpotence") {
    Functional dF = build("int[phi psi^2 - phi psi*^2]");
    // deg_phi = 1: exactly one L_k application survives
    Functional G = solve_generator(dF);
    Functional expected = l_h_inverse(dF) - l_h_inverse(l_k(l_h_inverse(dF)));
    CHECK(G == expected);
    CHECK(flow_average(G).is_zero());
    CHECK(poisson_bracket(G, kgw::H0()) == dF);
}

TEST_CASE("lie series collection gives F2 = L_G1 H1 + (1/2) L_G1^2 H0") {
    auto ledger = lie_collect(kgw::H0(), kgw::H1(), {kgw::G1()}, 2);
    CHECK(ledger.F[1] == kgw::H1());
    Functional f2_direct = poisson_bracket(kgw::H1(), kgw::G1()) +
                           poisson_bracket(poisson_bracket(kgw::H0(), kgw::G1()), kgw::G1())
                               .scaled(ExactComplex(Rational(1, 2)));
    CHECK(ledger.F[2] == f2_direct);
    CHECK(ledger.F[2] == kgw::F2());
}

TEST_CASE("second-order golden suite: F2, Z2, dF2 and the 4.4.1 chain") {
    auto nf2 = normal_form(2);
    CHECK(nf2.F[1] == kgw::F2());
    CHECK(nf2.Z[1] == kgw::Z2());

    Functional dF2 = deviation(nf2.F[1]);
    CHECK(dF2 == kgw::dF2());

    Functional s1 = l_h_inverse(dF2);
    CHECK(s1 == kgw::lh_inv_dF2());
    Functional s2 = l_k(s1);
    CHECK(s2 == kgw::lk_lh_inv_dF2());
    Functional s3 = l_h_inverse(s2);
    CHECK(s3 == kgw::lh_inv_lk_lh_inv_dF2());
    Functional s4 = l_k(s3);
    CHECK(s4 == kgw::lk_lh_inv_lk_lh_inv_dF2());
    Functional s5 = l_h_inverse(s4);
    CHECK(s5 == kgw::lh_inv_lk_lh_inv_lk_lh_inv_dF2());
    CHECK(l_k(s5).is_zero());

    CHECK(nf2.G[1] == kgw::G2());
    CHECK(nf2.G[0] == kgw::G1());
    CHECK(nf2.Z[0] == kgw::Z1());
}

TEST_CASE("z2 shortcut identity") {
    CHECK(z2_shortcut_check() == kgw::Z2());
    CHECK((z2_shortcut_check() - flow_average(kgw::F2())).is_zero());
}

TEST_CASE("normal form identities hold through order three") {
    auto res = normal_form(3);
    REQUIRE(res.Z.size() == 3);
    for (int j = 0; j < 3; ++j) {
        CAPTURE(j);
        CHECK(res.residuals[j].is_zero());
        CHECK(poisson_bracket(res.Z[j], kgw::h()).is_zero());
        CHECK(flow_average(res.G[j]).is_zero());
    }
    CHECK_FALSE(res.Z[2].is_zero());
}

TEST_CASE("L_k preserves charge so the generator series stays averaged-free") {
    Functional dF2 = deviation(kgw::F2());
    Functional cur = l_h_inverse(dF2);
    while (true) {
        Functional nxt = l_k(cur);
        for (const auto& [n, part] : charge_split(nxt)) CHECK(n != 0);
        if (nxt.is_zero()) break;
        cur = l_h_inverse(nxt);
    }
}
