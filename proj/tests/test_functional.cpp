#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nf/bracket.hpp"
#include "nf/normalform.hpp"
#include "nf/parse.hpp"
#include "nf/pretty.hpp"

using namespace nf;

TEST_CASE("integration by parts produces identical canonical forms") {
    CHECK(build("int[grad(psi).grad(psi*)]") == build("-1 * int[psi* lap(psi)]"));
    CHECK(build("int[grad(psi).grad(psi*)]") == build("-1 * int[psi lap(psi*)]"));
    CHECK(build("int[grad(phi).grad(phi)]") == build("-1 * int[phi lap(phi)]"));
    // grad f . grad g = (1/2)(lap(fg) - f lap g - g lap f) with the total
    // Laplacian integrating to zero
    CHECK(build("int[(grad(psi).grad(psi*)) phi]") ==
          build("int[(1/2) psi psi* lap(phi) - (1/2) phi psi* lap(psi) - (1/2) phi psi lap(psi*)]"));
}

TEST_CASE("canonical form is invariant under reordering and reassociation") {
    CHECK(build("int[phi psi psi*]") == build("int[psi* (phi psi)]"));
    CHECK(build("int[2 phi psi^2] - int[phi psi psi]") == build("int[phi psi^2]"));
    CHECK(build("int[(psi + psi*)^2 phi]") ==
          build("int[phi psi^2 + 2 phi psi psi* + phi psi*^2]"));
}

TEST_CASE("total derivatives vanish by momentum conservation") {
    CHECK(build("int[lap(phi)]").is_zero());
    CHECK(build("int[lap(psi)]").is_zero());
    CHECK_FALSE(build("int[phi]").is_zero());
}

TEST_CASE("the first-order correction has exactly three canonical terms") {
    CHECK(kgw::Z1().size() == 3);
    CHECK(flow_average(kgw::H1()) == kgw::Z1());
}

TEST_CASE("charge split partitions and recombines") {
    auto parts = charge_split(kgw::H1());
    CHECK(parts.size() == 3);
    CHECK(parts.count(0) == 1);
    CHECK(parts.count(2) == 1);
    CHECK(parts.count(-2) == 1);
    Functional sum;
    for (const auto& [n, f] : parts) sum += f;
    CHECK(sum == kgw::H1());
    CHECK(parts[0] == kgw::Z1());

    auto quartic = charge_split(build("int[psi^2 psi*^2]"));
    CHECK(quartic.size() == 1);
    CHECK(quartic.count(0) == 1);

    auto g1 = charge_split(kgw::G1());
    CHECK(g1.size() == 2);
    CHECK(g1.count(2) == 1);
    CHECK(g1.count(-2) == 1);
    CHECK(g1.count(0) == 0);
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(build("int[psi +]"), ParseError);
    CHECK_THROWS_AS(build("int[bogus]"), ParseError);
    CHECK_THROWS_AS(build("int[psi"), ParseError);
    try {
        build("int[psi + ]");
    } catch (const ParseError& e) {
        CHECK(e.position > 0);
    }
}

TEST_CASE("pretty print is deterministic and shows the closed-form coefficients") {
    CHECK(pretty_print(Functional{}) == "0");
    std::string g1 = pretty_print(kgw::G1());
    CHECK(g1.find("i/8") != std::string::npos);
    CHECK(g1.find("i/4") != std::string::npos);
    CHECK(g1.find("1/8") != std::string::npos);
    CHECK(pretty_print(kgw::G1()) == g1);

    std::string z1 = pretty_print(kgw::Z1());
    CHECK(z1.find("grad(phi).grad(phi)") != std::string::npos);
    CHECK(z1.find("psi psi* phi") != std::string::npos);

    std::string z2_latex = pretty_print(kgw::Z2(), PrintStyle::latex);
    CHECK(z2_latex.find("\\Delta \\psi") != std::string::npos);
    CHECK(z2_latex.find("\\int") != std::string::npos);

    // round trip: rendering of the laplacian form re-parses to the same functional
    CHECK(build(pretty_print(kgw::Z2())) == kgw::Z2());
    CHECK(build(pretty_print(kgw::G2())) == kgw::G2());
}

TEST_CASE("json rendering carries exact rationals") {
    std::string j = to_json(kgw::G1());
    CHECK(j.find("\"1/8\"") != std::string::npos);
    CHECK(j.find("\"psi*\"") != std::string::npos);
}
