#include "skewlab/coupling.hpp"

#include <cmath>
#include <numeric>

#include "skewlab/detail/exact_orbit.hpp"

namespace skewlab {

Coupling Coupling::staircase(const Slope& lambda) {
    Coupling c;
    c.kind_ = Kind::staircase;
    c.slope_ = lambda;
    c.name_ = "staircase(" + lambda.str() + ")";
    return c;
}

Coupling Coupling::constant(Vec2 k0) {
    Coupling c;
    c.kind_ = Kind::constant;
    c.k0_ = k0;
    c.name_ = "constant" + k0.str();
    return c;
}

Coupling Coupling::custom(std::function<Vec2(const CirclePoint&)> eval, std::string name) {
    Coupling c;
    c.kind_ = Kind::custom;
    c.eval_ = std::move(eval);
    c.name_ = std::move(name);
    return c;
}

const Slope& Coupling::slope() const {
    if (kind_ != Kind::staircase) throw std::logic_error("Coupling: slope() on non-staircase");
    return slope_;
}

Vec2 Coupling::constant_value() const {
    if (kind_ != Kind::constant) throw std::logic_error("Coupling: constant_value() on non-constant");
    return k0_;
}

Vec2 Coupling::operator()(const CirclePoint& t, BoundaryLog* log) const {
    switch (kind_) {
        case Kind::constant:
            return k0_;
        case Kind::staircase: {
            if (t.is_exact() && slope_.is_rational()) {
                // t, lambda in [0,1) so the floor is 0 or 1; exact.
                Rational s = t.ratio() + slope_.ratio();
                return {1, s.floor()};
            }
            FloorValue f = floor_checked(t.value() + slope_.value());
            if (f.near_boundary) note_boundary(log);
            return {1, f.value};
        }
        case Kind::custom:
            return eval_(t);
    }
    return {};
}

std::vector<Vec2> cocycle_prefix(const CirclePoint& t, const Slope& lambda,
                                 const Coupling& kappa, std::uint64_t n, BoundaryLog* log) {
    std::vector<Vec2> out(n + 1);
    out[0] = Vec2{0, 0};

    if (kappa.kind() == Coupling::Kind::constant) {
        Vec2 k0 = kappa.constant_value();
        for (std::uint64_t i = 1; i <= n; ++i)
            out[i] = static_cast<std::int64_t>(i) * k0;
        return out;
    }

    if (kappa.kind() == Coupling::Kind::staircase && t.is_exact() && lambda.is_rational() &&
        detail::ExactOrbit::fits(t, lambda)) {
        detail::ExactOrbit orbit(t, lambda);
        std::int64_t k2 = 0;
        for (std::uint64_t i = 1; i <= n; ++i) {
            k2 += orbit.step();
            out[i] = Vec2{static_cast<std::int64_t>(i), k2};
        }
        return out;
    }

    // Generic path: orbit points in closed form (no iterative float drift),
    // coupling evaluated per point.
    Vec2 acc{0, 0};
    for (std::uint64_t i = 0; i < n; ++i) {
        acc += kappa(orbit_point(t, lambda, i), log);
        out[i + 1] = acc;
    }
    return out;
}

CocycleSum cocycle(const CirclePoint& t, const Slope& lambda, const Coupling& kappa,
                   std::uint64_t n, BoundaryLog* log) {
    if (kappa.kind() == Coupling::Kind::constant)
        return {n, static_cast<std::int64_t>(n) * kappa.constant_value()};

    if (kappa.kind() == Coupling::Kind::staircase && t.is_exact() && lambda.is_rational() &&
        detail::ExactOrbit::fits(t, lambda)) {
        detail::ExactOrbit orbit(t, lambda);
        std::int64_t k2 = 0;
        for (std::uint64_t i = 0; i < n; ++i) k2 += orbit.step();
        return {n, Vec2{static_cast<std::int64_t>(n), k2}};
    }

    Vec2 acc{0, 0};
    for (std::uint64_t i = 0; i < n; ++i) acc += kappa(orbit_point(t, lambda, i), log);
    return {n, acc};
}

}  // namespace skewlab
