#include <doctest.h>

#include <random>

#include "skewlab/rational.hpp"

using skewlab::Rational;

TEST_CASE("rational reduces to canonical form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(6, 3).is_integer());
}

TEST_CASE("rational arithmetic") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(3, 4) * Rational(2, 9) == Rational(1, 6));
    CHECK(Rational(3, 4) / Rational(9, 2) == Rational(1, 6));
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::invalid_argument);
}

TEST_CASE("floor and frac for negative values") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-1, 3).frac() == Rational(2, 3));
    CHECK(Rational(5, 3).frac() == Rational(2, 3));
    CHECK(Rational(4, 2).frac() == Rational(0));
}

TEST_CASE("ordering matches cross multiplication") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(2, 6) <= Rational(1, 3));
    CHECK(Rational(7, 8) > Rational(6, 7));
}

TEST_CASE("parse") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-3/4") == Rational(-3, 4));
    CHECK(Rational::parse("5") == Rational(5));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("-0.5") == Rational(-1, 2));
    CHECK_THROWS_AS(Rational::parse("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
}

TEST_CASE("overflow is detected, not wrapped") {
    Rational big(std::numeric_limits<std::int64_t>::max() / 2, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("field axioms on random small rationals") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> num(-50, 50), den(1, 50);
    for (int i = 0; i < 500; ++i) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Rational(0));
        // frac is idempotent and lands in [0,1)
        Rational f = a.frac();
        CHECK(f.frac() == f);
        CHECK(f >= Rational(0));
        CHECK(f < Rational(1));
        CHECK((a - f).is_integer());
    }
}
