#include <doctest.h>

#include <cmath>
#include <random>

#include "skewlab/lattice.hpp"

using namespace skewlab;

TEST_CASE("line_point floor arithmetic") {
    Slope half = Slope::rational(1, 2);
    CirclePoint t0 = CirclePoint::exact(0, 1);
    CHECK(line_point(half, t0, 0) == Vec2{0, 0});
    CHECK(line_point(half, t0, 1) == Vec2{1, 0});
    CHECK(line_point(half, t0, 2) == Vec2{2, 1});
    CHECK(line_point(half, t0, 3) == Vec2{3, 1});
    CHECK(line_point(Slope::rational(1, 3), CirclePoint::exact(1, 2), 2) == Vec2{2, 1});
    CHECK(line_point(Slope::rational(2, 5), CirclePoint::exact(0, 1), 0) == Vec2{0, 0});
    // negative z takes the true floor
    CHECK(line_point(half, t0, -1) == Vec2{-1, -1});
}

TEST_CASE("window basics") {
    Slope half = Slope::rational(1, 2);
    CHECK(window(half, CirclePoint::exact(0, 1), 0, 2) ==
          std::vector<Vec2>{Vec2{0, 0}, Vec2{1, 0}});
    CHECK(window(half, CirclePoint::exact(1, 2), 0, 2) ==
          std::vector<Vec2>{Vec2{0, 0}, Vec2{1, 1}});
    CHECK_THROWS_AS(window(half, CirclePoint::exact(0, 1), 0, 0), std::invalid_argument);
}

TEST_CASE("window translation identity") {
    // window(lambda, t, i, m) = window(lambda, tau^i(t), 0, m) + L(i)
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> den(2, 97);
    for (int rep = 0; rep < 40; ++rep) {
        std::int64_t q = den(rng), b = den(rng);
        std::int64_t p = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q));
        if (p % q == 0) p = 1;
        std::int64_t a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(b));
        Slope lam = Slope::rational(p, q);
        CirclePoint t = CirclePoint::exact(a, b);
        std::int64_t i = static_cast<std::int64_t>(rng() % 200);
        std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 5);

        auto shifted = window(lam, orbit_point(t, lam, i), 0, m);
        Vec2 base = line_point(lam, t, i);
        for (Vec2& pnt : shifted) pnt = pnt + base;
        CHECK(window(lam, t, i, m) == shifted);
    }
}

TEST_CASE("step decomposition identity") {
    // L(3) = L(2) + L_{tau^2(0)}(1) for lambda = 1/2
    auto d = step_decompose(Slope::rational(1, 2), CirclePoint::exact(0, 1), 2, 1);
    CHECK(d.lhs == Vec2{3, 1});
    CHECK(d.equal());

    auto d2 = step_decompose(Slope::rational(1, 3), CirclePoint::exact(1, 4), 4, 2);
    CHECK(d2.equal());

    auto d3 = step_decompose(Slope::rational(2, 5), CirclePoint::exact(1, 7), 0, 9);
    CHECK(d3.equal());
}

TEST_CASE("line equals cocycle") {
    auto c = line_equals_cocycle(Slope::rational(1, 2), CirclePoint::exact(0, 1), 2);
    CHECK(c.cocycle_value == Vec2{2, 1});
    CHECK(c.equal());

    // exhaustive over n <= 1e4 for (2/5, 1/7)
    Slope lam = Slope::rational(2, 5);
    CirclePoint t = CirclePoint::exact(1, 7);
    auto prefix = cocycle_prefix(t, lam, Coupling::staircase(lam), 10000);
    for (std::int64_t n = 0; n <= 10000; ++n)
        REQUIRE(prefix[static_cast<std::size_t>(n)] == line_point(lam, t, n));
}

TEST_CASE("line equals cocycle in approx mode away from boundaries") {
    Slope lam = Slope::irrational((std::sqrt(5.0) - 1.0) / 2.0);
    CirclePoint t = CirclePoint::approx(0.31);
    BoundaryLog log;
    auto prefix = cocycle_prefix(t, lam, Coupling::staircase(lam), 10000, &log);
    BoundaryLog line_log;
    for (std::int64_t n = 0; n <= 10000; ++n) {
        BoundaryLog one;
        Vec2 lp = line_point(lam, t, n, &one);
        if (one.near_floor_boundary == 0 && log.near_floor_boundary == 0)
            REQUIRE(prefix[static_cast<std::size_t>(n)] == lp);
        line_log.near_floor_boundary += one.near_floor_boundary;
    }
}

TEST_CASE("monotone staircase increments") {
    // second coordinates rise by 0 or 1; rises over n steps = [lambda n + t] - [t]
    Slope lam = Slope::rational(3, 7);
    CirclePoint t = CirclePoint::exact(2, 5);
    std::int64_t rises = 0;
    for (std::int64_t z = 0; z < 300; ++z) {
        Vec2 a = line_point(lam, t, z);
        Vec2 b = line_point(lam, t, z + 1);
        std::int64_t d = b.y - a.y;
        CHECK(d >= 0);
        CHECK(d <= 1);
        rises += d;
    }
    CHECK(rises == line_point(lam, t, 300).y - line_point(lam, t, 0).y);
}

TEST_CASE("shape_breakpoints for lambda=1/2, m=2") {
    auto cells = shape_breakpoints(Slope::rational(1, 2), 2);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].lo.ratio() == Rational(0));
    CHECK(cells[1].lo.ratio() == Rational(1, 2));
    CHECK(*cells[0].exact_length == Rational(1, 2));
    CHECK(*cells[1].exact_length == Rational(1, 2));
    CHECK(cells[0].shape == std::vector<Vec2>{Vec2{0, 0}, Vec2{1, 0}});  // flat
    CHECK(cells[1].shape == std::vector<Vec2>{Vec2{0, 0}, Vec2{1, 1}});  // step
}

TEST_CASE("shape_breakpoints m=1 has a single cell") {
    auto cells = shape_breakpoints(Slope::rational(2, 5), 1);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].shape == std::vector<Vec2>{Vec2{0, 0}});
    CHECK(*cells[0].exact_length == Rational(1));
}

TEST_CASE("shape_breakpoints lambda=1/3, m=3 and grid constancy oracle") {
    auto cells = shape_breakpoints(Slope::rational(1, 3), 3);
    REQUIRE(cells.size() == 3);
    CHECK(cells[0].lo.ratio() == Rational(0));
    CHECK(cells[1].lo.ratio() == Rational(1, 3));
    CHECK(cells[2].lo.ratio() == Rational(2, 3));
    // oracle: evaluate the window shape on a fine grid and confirm it is
    // constant strictly between breakpoints
    Slope lam = Slope::rational(1, 3);
    for (const auto& cell : cells) {
        Rational lo = cell.lo.ratio();
        for (int j = 1; j < 20; ++j) {
            Rational t = lo + *cell.exact_length * Rational(j, 20);
            if (t == lo || t - lo == *cell.exact_length) continue;
            CHECK(canonical_window(lam, CirclePoint::exact(t), 0, 3) == cell.shape);
        }
    }
}

TEST_CASE("shape-measure identity: step-cell length equals lambda for m=2") {
    for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {2, 5}, {3, 7}, {5, 8}}) {
        Slope lam = Slope::rational(p, q);
        Rational step_len(0);
        for (const auto& cell : shape_breakpoints(lam, 2))
            if (cell.shape[1] == Vec2{1, 1}) step_len += *cell.exact_length;
        CHECK(step_len == lam.ratio());
    }
    // approx mode: grid measure to 1e-9
    double lam_v = (std::sqrt(5.0) - 1.0) / 2.0;
    Slope lam = Slope::irrational(lam_v);
    double step_len = 0.0;
    for (const auto& cell : shape_breakpoints(lam, 2))
        if (cell.shape[1] == Vec2{1, 1}) step_len += cell.length;
    CHECK(step_len == doctest::Approx(lam_v).epsilon(1e-9));
}

TEST_CASE("line_point flags boundary proximity in approx mode") {
    BoundaryLog log;
    Slope lam = Slope::irrational(0.5 - 0x1.0p-44);  // declared irrational probe value
    line_point(lam, CirclePoint::approx(0.5), 1, &log);  // lambda + 0.5 ~ 1 - 2^-44
    CHECK(log.near_floor_boundary == 1);
}
