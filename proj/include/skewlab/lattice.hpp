#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/coupling.hpp"
#include "skewlab/vec2.hpp"

namespace skewlab {

/// Stair-climbing lattice approximation of the line with slope lambda and
/// intercept t: L(z) = (z, [lambda*z + t]).
Vec2 line_point(const Slope& lambda, const CirclePoint& t, std::int64_t z,
                BoundaryLog* log = nullptr);

/// The window [L(z1), ..., L(z1+m-1)], m >= 1.
std::vector<Vec2> window(const Slope& lambda, const CirclePoint& t, std::int64_t z1,
                         std::int64_t m, BoundaryLog* log = nullptr);

/// Window shifted so its first point is the origin. Marginal distributions
/// of a shift-invariant field depend only on this canonical shape.
std::vector<Vec2> canonical_window(const Slope& lambda, const CirclePoint& t,
                                   std::int64_t z1, std::int64_t m,
                                   BoundaryLog* log = nullptr);

/// Both sides of the decomposition L_{lambda,t}(n+u) = L_{lambda,t}(n) +
/// L_{lambda,tau^n(t)}(u).
struct StepDecomposition {
    Vec2 lhs;
    Vec2 rhs;
    bool equal() const { return lhs == rhs; }
};
StepDecomposition step_decompose(const Slope& lambda, const CirclePoint& t,
                                 std::uint64_t n, std::uint64_t u,
                                 BoundaryLog* log = nullptr);

/// Both sides of the identity kappa_n(t) = L_{lambda,t}(n) for the staircase
/// coupling; the cocycle side is evaluated as an ergodic sum, the line side
/// in closed form.
struct LineCocycleCheck {
    Vec2 cocycle_value;
    Vec2 line_value;
    bool equal() const { return cocycle_value == line_value; }
};
LineCocycleCheck line_equals_cocycle(const Slope& lambda, const CirclePoint& t,
                                     std::uint64_t n, BoundaryLog* log = nullptr);

/// One maximal interval of intercepts on which the canonical window shape is
/// constant: [lo, lo+length) with the shape attached. Lengths are exact
/// rationals for rational slopes.
struct ShapeCell {
    CirclePoint lo;
    double length = 0.0;
    std::optional<Rational> exact_length;
    std::vector<Vec2> shape;  // canonical window at any interior t
};

/// Partition of [0,1) by the breakpoints {0} union {frac(-lambda*z) : 1 <= z
/// <= m-1}, each cell carrying the constant window shape it supports.
/// Breakpoints are exact rationals for rational slopes; floats deduplicated
/// at tolerance 2^-40 otherwise.
std::vector<ShapeCell> shape_breakpoints(const Slope& lambda, std::int64_t m);

}  // namespace skewlab
