#include <doctest.h>

#include <cmath>
#include <random>

#include "skewlab/coupling.hpp"

using namespace skewlab;

TEST_CASE("staircase coupling evaluates (1, [t+lambda])") {
    Slope half = Slope::rational(1, 2);
    Coupling k = Coupling::staircase(half);
    CHECK(k(CirclePoint::exact(0, 1)) == Vec2{1, 0});
    CHECK(k(CirclePoint::exact(1, 2)) == Vec2{1, 1});
    CHECK(k(CirclePoint::exact(3, 4)) == Vec2{1, 1});
    CHECK(k(CirclePoint::approx(0.25)) == Vec2{1, 0});
}

TEST_CASE("constant coupling sums to n*k0") {
    Coupling k = Coupling::constant(Vec2{2, -1});
    CirclePoint t = CirclePoint::exact(1, 3);
    Slope lam = Slope::rational(1, 3);
    CHECK(cocycle(t, lam, k, 0).vector == Vec2{0, 0});
    CHECK(cocycle(t, lam, k, 7).vector == Vec2{14, -7});
}

TEST_CASE("staircase cocycle small cases") {
    // lambda = 1/2, t = 0: kappa_1 = (1,0), kappa_2 = (2,1)
    Slope half = Slope::rational(1, 2);
    CirclePoint t0 = CirclePoint::exact(0, 1);
    Coupling k = Coupling::staircase(half);
    CHECK(cocycle(t0, half, k, 1).vector == Vec2{1, 0});
    CHECK(cocycle(t0, half, k, 2).vector == Vec2{2, 1});
}

TEST_CASE("staircase cocycle equals the line pattern (lambda=1/3, t=1/2, n=3)") {
    Slope third = Slope::rational(1, 3);
    CirclePoint t = CirclePoint::exact(1, 2);
    Coupling k = Coupling::staircase(third);
    // L_{1/3,1/2}(3) = (3, [3/3 + 1/2]) = (3, 1)
    CHECK(cocycle(t, third, k, 3).vector == Vec2{3, 1});
}

TEST_CASE("cocycle prefix agrees with one-shot sums and the generic path") {
    Slope lam = Slope::rational(5, 7);
    CirclePoint t = CirclePoint::exact(2, 11);
    Coupling k = Coupling::staircase(lam);
    auto prefix = cocycle_prefix(t, lam, k, 50);
    REQUIRE(prefix.size() == 51);
    CHECK(prefix[0] == Vec2{0, 0});
    for (std::uint64_t n : {1ull, 7ull, 23ull, 50ull})
        CHECK(prefix[n] == cocycle(t, lam, k, n).vector);

    // generic path oracle: sum coupling evaluations at closed-form orbit points
    Vec2 acc{0, 0};
    for (std::uint64_t i = 0; i < 50; ++i) {
        acc += k(orbit_point(t, lam, i));
        CHECK(prefix[i + 1] == acc);
    }
}

TEST_CASE("cocycle identity holds exactly for random rational inputs") {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<std::int64_t> den(2, 997), num(0, 996), pq(1, 996);
    for (int rep = 0; rep < 60; ++rep) {
        std::int64_t q = den(rng);
        std::int64_t p = pq(rng) % q;
        if (p == 0) p = 1;
        std::int64_t b = den(rng);
        std::int64_t a = num(rng) % b;
        Slope lam = Slope::rational(p, q);
        CirclePoint t = CirclePoint::exact(a, b);
        Coupling k = Coupling::staircase(lam);

        auto prefix = cocycle_prefix(t, lam, k, 256);
        std::uniform_int_distribution<std::uint64_t> pick(0, 255);
        for (int trial = 0; trial < 16; ++trial) {
            std::uint64_t n = pick(rng);
            std::uint64_t m = pick(rng) % (256 - n + 1);
            Vec2 rhs = prefix[n] + cocycle(orbit_point(t, lam, n), lam, k, m).vector;
            CHECK(prefix[n + m] == rhs);
        }
    }
}

TEST_CASE("cocycle identity in approx mode (integer outputs, away from boundaries)") {
    Slope lam = Slope::irrational((std::sqrt(5.0) - 1.0) / 2.0);
    CirclePoint t = CirclePoint::approx(0.1234);
    Coupling k = Coupling::staircase(lam);
    auto prefix = cocycle_prefix(t, lam, k, 512);
    for (std::uint64_t n : {3ull, 100ull, 333ull}) {
        BoundaryLog log;
        Vec2 tail = cocycle(orbit_point(t, lam, n), lam, k, 512 - n, &log).vector;
        if (log.near_floor_boundary == 0) CHECK(prefix[n] + tail == prefix[512]);
    }
}

TEST_CASE("custom coupling goes through the generic path") {
    Slope lam = Slope::rational(1, 4);
    Coupling k = Coupling::custom(
        [](const CirclePoint& t) {
            return Vec2{1, t.value() < 0.5 ? 0 : 2};
        },
        "half_indicator");
    CirclePoint t = CirclePoint::exact(0, 1);
    // orbit 0, 1/4, 1/2, 3/4 -> second coords 0, 0, 2, 2
    CHECK(cocycle(t, lam, k, 4).vector == Vec2{4, 4});
}
