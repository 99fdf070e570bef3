#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "skewlab/rational.hpp"

namespace skewlab {

/// Inputs this close to an integer make a floor evaluation unreliable in
/// floating point; such evaluations raise a boundary warning.
inline constexpr double kBoundaryTol = 0x1.0p-40;

/// Counts boundary warnings raised along a computation. Optional everywhere;
/// passing nullptr disables the bookkeeping, never the computation.
struct BoundaryLog {
    std::uint64_t near_floor_boundary = 0;
};

inline void note_boundary(BoundaryLog* log) {
    if (log) ++log->near_floor_boundary;
}

/// floor(x) plus a flag marking that x is within kBoundaryTol of an integer.
struct FloorValue {
    std::int64_t value;
    bool near_boundary;
};

FloorValue floor_checked(double x);

/// Rotation parameter. Rational slopes are kept as reduced fractions in
/// (0,1); p = 0 after reduction mod 1 is rejected as degenerate (the
/// constant-coupling path covers uncoupled products). Irrationality of a
/// real slope is declared by the caller, not verified here.
class Slope {
public:
    static Slope rational(std::int64_t p, std::int64_t q);
    static Slope rational(const Rational& r) { return rational(r.num(), r.den()); }
    static Slope irrational(double value);

    bool is_rational() const { return rational_; }
    std::int64_t p() const { return ratio_.num(); }
    std::int64_t q() const { return ratio_.den(); }
    const Rational& ratio() const;
    double value() const { return value_; }

    std::string str() const;

private:
    Slope() = default;
    bool rational_ = false;
    Rational ratio_;
    double value_ = 0.0;
};

/// Returns the rotation period q for a rational slope p/q; nullopt for an
/// irrational slope.
std::optional<std::int64_t> period(const Slope& lambda);

/// A point of the circle T = [0,1), in exact-rational or 64-bit floating
/// representation. Construction reduces mod 1.
///
/// Approx points carry a hidden compensation term so that long chains of
/// rotations do not drift: the represented point is value + residual with
/// |residual| a few ulps, and value() is always the [0,1) head.
class CirclePoint {
public:
    /// Defaults to the exact origin of the circle.
    CirclePoint() : exact_(true) {}

    static CirclePoint exact(const Rational& r);
    static CirclePoint exact(std::int64_t num, std::int64_t den) {
        return exact(Rational(num, den));
    }
    static CirclePoint approx(double v);

    bool is_exact() const { return exact_; }
    const Rational& ratio() const;
    double value() const { return value_; }

    friend bool operator==(const CirclePoint& a, const CirclePoint& b) {
        if (a.exact_ != b.exact_) return false;
        return a.exact_ ? a.ratio_ == b.ratio_ : a.value_ == b.value_;
    }

    std::string str() const;

private:
    friend CirclePoint rotate(const CirclePoint&, const Slope&);
    bool exact_ = false;
    Rational ratio_;
    double value_ = 0.0;
    double residual_ = 0.0;
};

/// Rotation-invariant circle distance min(|s-t|, 1-|s-t|).
double circle_distance(double s, double t);

/// One rotation step t + lambda mod 1. Exactness is preserved when both the
/// point and the slope are rational; otherwise the result is approximate.
CirclePoint rotate(const CirclePoint& t, const Slope& lambda);

/// n-fold rotation computed in closed form as frac(t + n*lambda): exact in
/// exact mode, compensated floating point otherwise (no per-step drift).
CirclePoint orbit_point(const CirclePoint& t, const Slope& lambda, std::uint64_t n);

/// (1/n) sum_{i<n} g(orbit_point(t, lambda, i)) for an irrational slope.
/// Rational slopes are rejected; use the periodic decomposition instead.
double weyl_average(const std::function<double(double)>& g, const Slope& lambda,
                    const CirclePoint& t, std::uint64_t n);

}  // namespace skewlab
