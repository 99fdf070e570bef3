#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/vec2.hpp"

namespace skewlab {

/// The Z^2-valued coupling function linking base and fibre. The staircase
/// coupling kappa(t) = (1, [t+lambda]) drives the stair-climbing pattern;
/// the constant coupling gives an uncoupled product.
class Coupling {
public:
    enum class Kind { staircase, constant, custom };

    static Coupling staircase(const Slope& lambda);
    static Coupling constant(Vec2 k0);
    static Coupling custom(std::function<Vec2(const CirclePoint&)> eval, std::string name);

    Vec2 operator()(const CirclePoint& t, BoundaryLog* log = nullptr) const;

    Kind kind() const { return kind_; }
    const Slope& slope() const;  // staircase only
    Vec2 constant_value() const; // constant only
    const std::string& name() const { return name_; }

private:
    Coupling() = default;
    Kind kind_ = Kind::constant;
    Slope slope_ = Slope::irrational(0.5);  // placeholder; unused unless staircase
    Vec2 k0_{};
    std::function<Vec2(const CirclePoint&)> eval_;
    std::string name_;
};

/// Ergodic sum kappa_n(t) = sum_{i<n} kappa(tau^i(t)).
struct CocycleSum {
    std::uint64_t n = 0;
    Vec2 vector{};
};

/// Full prefix kappa_0, ..., kappa_n (n+1 entries). In exact mode the orbit
/// runs on a stable common denominator, so the per-step cost is a handful of
/// integer operations.
std::vector<Vec2> cocycle_prefix(const CirclePoint& t, const Slope& lambda,
                                 const Coupling& kappa, std::uint64_t n,
                                 BoundaryLog* log = nullptr);

CocycleSum cocycle(const CirclePoint& t, const Slope& lambda, const Coupling& kappa,
                   std::uint64_t n, BoundaryLog* log = nullptr);

/// Streaming variant: visit(i, kappa_i(t)) for i = 1..n, without storing the
/// prefix. A template so that hot visitors inline.
template <class Visit>
void cocycle_scan(const CirclePoint& t, const Slope& lambda, const Coupling& kappa,
                  std::uint64_t n, Visit&& visit, BoundaryLog* log = nullptr);

}  // namespace skewlab

#include "skewlab/detail/exact_orbit.hpp"

namespace skewlab {

template <class Visit>
void cocycle_scan(const CirclePoint& t, const Slope& lambda, const Coupling& kappa,
                  std::uint64_t n, Visit&& visit, BoundaryLog* log) {
    if (kappa.kind() == Coupling::Kind::constant) {
        Vec2 k0 = kappa.constant_value();
        for (std::uint64_t i = 1; i <= n; ++i) visit(i, static_cast<std::int64_t>(i) * k0);
        return;
    }
    if (kappa.kind() == Coupling::Kind::staircase && t.is_exact() && lambda.is_rational() &&
        detail::ExactOrbit::fits(t, lambda)) {
        detail::ExactOrbit orbit(t, lambda);
        std::int64_t k2 = 0;
        for (std::uint64_t i = 1; i <= n; ++i) {
            k2 += orbit.step();
            visit(i, Vec2{static_cast<std::int64_t>(i), k2});
        }
        return;
    }
    Vec2 acc{0, 0};
    for (std::uint64_t i = 0; i < n; ++i) {
        acc += kappa(orbit_point(t, lambda, i), log);
        visit(i + 1, acc);
    }
}

}  // namespace skewlab
