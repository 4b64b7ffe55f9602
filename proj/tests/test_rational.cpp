#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nf/rational.hpp"

using namespace nf;

TEST_CASE("bigint arithmetic round trips through strings") {
    CHECK(BigInt::from_string("123456789012345678901234567890").to_string() ==
          "123456789012345678901234567890");
    BigInt a = BigInt::from_string("987654321987654321");
    BigInt b = BigInt::from_string("-123456789123456789");
    CHECK((a + b).to_string() == "864197532864197532");
    CHECK((a * b).to_string() == "-121932631356500531347203169112635269");
    BigInt q, r;
    BigInt::divmod(a, BigInt(1000), q, r);
    CHECK(q.to_string() == "987654321987654");
    CHECK(r.to_string() == "321");
    CHECK(BigInt::gcd(BigInt(84), BigInt(-36)).to_string() == "12");
}

TEST_CASE("rational normalization and exact field operations") {
    Rational a(6, -8);
    CHECK(a.to_string() == "-3/4");
    CHECK((a + Rational(3, 4)).is_zero());
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
    CHECK((Rational(1, 7) / Rational(2, 7)) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), PreconditionError);
    CHECK(Rational::from_string("-5/15") == Rational(-1, 3));
}

TEST_CASE("gaussian rationals close under division") {
    ExactComplex z(Rational(1, 2), Rational(-1, 3));
    ExactComplex w(Rational(2), Rational(1));
    ExactComplex q = z / w;
    CHECK(q * w == z);
    CHECK((ExactComplex::i() * ExactComplex::i()) == ExactComplex(-1));
    CHECK(ExactComplex::i_over(16).to_string() == "i/16");
    CHECK(ExactComplex(Rational(-1, 8)).to_string() == "-1/8");
    CHECK(ExactComplex(Rational(0), Rational(3, 16)).to_string() == "3i/16");
}
