#include <doctest.h>

#include <cmath>
#include <random>

#include "skewlab/circle.hpp"

using namespace skewlab;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
}

TEST_CASE("slope construction and period") {
    Slope half = Slope::rational(1, 2);
    CHECK(half.is_rational());
    CHECK(period(half) == 2);
    CHECK(period(Slope::rational(2, 5)) == 5);
    CHECK(period(Slope::rational(4, 10)) == 5);  // reduced form
    CHECK(!period(Slope::irrational(kGolden)).has_value());

    // degenerate slopes are rejected: 0 and integers reduce to 0 mod 1
    CHECK_THROWS_AS(Slope::rational(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Slope::rational(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Slope::rational(3, 1), std::invalid_argument);
    CHECK_THROWS_AS(Slope::irrational(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Slope::irrational(1.0), std::invalid_argument);

    // slopes are canonicalized mod 1
    CHECK(Slope::rational(3, 2).ratio() == Rational(1, 2));
    CHECK(Slope::rational(-1, 3).ratio() == Rational(2, 3));
}

TEST_CASE("rotate wraps mod 1") {
    CirclePoint t = CirclePoint::exact(1, 4);
    Slope half = Slope::rational(1, 2);
    CHECK(rotate(t, half).ratio() == Rational(3, 4));
    CHECK(rotate(CirclePoint::exact(3, 4), half).ratio() == Rational(1, 4));

    CirclePoint a = CirclePoint::approx(0.25);
    CHECK(rotate(a, half).value() == doctest::Approx(0.75));
    CHECK(rotate(CirclePoint::approx(0.75), half).value() == doctest::Approx(0.25));

    // exactness preserved only when both sides are exact
    CHECK(rotate(t, half).is_exact());
    CHECK(!rotate(t, Slope::irrational(kGolden)).is_exact());
    CHECK(!rotate(a, half).is_exact());
}

TEST_CASE("orbit_point closed form") {
    CHECK(orbit_point(CirclePoint::exact(0, 1), Slope::rational(1, 3), 5).ratio() ==
          Rational(2, 3));
    CHECK(orbit_point(CirclePoint::approx(0.1), Slope::irrational(kGolden), 0).value() ==
          doctest::Approx(0.1));
}

TEST_CASE("closed-form orbit equals chained rotation exactly in exact mode") {
    Slope lam = Slope::rational(997, 4096);
    CirclePoint t = CirclePoint::exact(5, 17);
    CirclePoint it = t;
    for (std::uint64_t n = 0; n <= 20000; ++n) {
        if (n % 977 == 0)  // spot-check along the way
            CHECK(orbit_point(t, lam, n).ratio() == it.ratio());
        it = rotate(it, lam);
    }
    CHECK(orbit_point(t, lam, 1000000).ratio() ==
          (Rational(5, 17) + Rational(1000000) * Rational(997, 4096)).frac());
}

TEST_CASE("closed-form orbit tracks chained rotation within 2^-40 in approx mode") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 4; ++rep) {
        double lam_v = rep == 0 ? kGolden : uni(rng);
        if (lam_v <= 0.0 || lam_v >= 1.0) continue;
        Slope lam = Slope::irrational(lam_v);
        CirclePoint t = CirclePoint::approx(uni(rng));
        CirclePoint it = t;
        std::uint64_t n = 0;
        for (std::uint64_t target : {1000ull, 100000ull, 1000000ull}) {
            for (; n < target; ++n) it = rotate(it, lam);
            double closed = orbit_point(t, lam, n).value();
            CHECK(circle_distance(closed, it.value()) < 0x1.0p-40);
        }
    }
}

TEST_CASE("circle distance is rotation invariant") {
    CHECK(circle_distance(0.1, 0.9) == doctest::Approx(0.2));
    CHECK(circle_distance(0.0, 0.5) == doctest::Approx(0.5));
    CHECK(circle_distance(0.3, 0.3) == 0.0);
}

TEST_CASE("weyl average of a constant is the constant") {
    Slope lam = Slope::irrational(kGolden);
    double v = weyl_average([](double) { return 3.25; }, lam, CirclePoint::approx(0.2), 1000);
    CHECK(v == doctest::Approx(3.25));
}

TEST_CASE("weyl average of cos(2 pi t) obeys the geometric-sum bound") {
    // |(1/n) sum cos(2 pi (t + i lambda))| <= 1 / (n sin(pi lambda))
    Slope lam = Slope::irrational(kGolden);
    std::uint64_t n = 10000;
    double bound = 1.0 / (static_cast<double>(n) * std::sin(M_PI * kGolden));
    for (double t0 : {0.0, 0.123, 0.5, 0.987}) {
        double v = weyl_average([](double t) { return std::cos(2.0 * M_PI * t); }, lam,
                                CirclePoint::approx(t0), n);
        CHECK(std::fabs(v) <= bound * (1.0 + 1e-9) + 1e-12);
        CHECK(std::fabs(v) <= 1.1e-4);
    }
}

TEST_CASE("weyl average of an interval indicator equidistributes") {
    // direct-summation oracle at n = 1e5: within 1e-3 of the length 1/2
    Slope lam = Slope::irrational(kGolden);
    std::uint64_t n = 100000;
    double v = weyl_average([](double t) { return t < 0.5 ? 1.0 : 0.0; }, lam,
                            CirclePoint::approx(0.1), n);
    // independent oracle: plain accumulation over the same orbit
    double direct = 0.0;
    for (std::uint64_t i = 0; i < n; ++i)
        direct += orbit_point(CirclePoint::approx(0.1), lam, i).value() < 0.5 ? 1.0 : 0.0;
    direct /= static_cast<double>(n);
    CHECK(v == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::fabs(v - 0.5) <= 1e-3);
}

TEST_CASE("weyl average rejects rational slopes") {
    CHECK_THROWS_AS(weyl_average([](double) { return 1.0; }, Slope::rational(1, 2),
                                 CirclePoint::approx(0.0), 10),
                    std::invalid_argument);
}
