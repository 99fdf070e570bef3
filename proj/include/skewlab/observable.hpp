#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skewlab/field.hpp"
#include "skewlab/marginal.hpp"
#include "skewlab/vec2.hpp"

namespace skewlab {

/// A real function on Upsilon^m stored as an explicit table of exact values,
/// ranked like MarginalTable (big-endian in the symbol indices).
class FTable {
public:
    FTable(std::size_t alphabet_size, std::size_t m, std::vector<Rational> values,
           std::string name);

    std::size_t alphabet_size() const { return k_; }
    std::size_t m() const { return m_; }
    const std::string& name() const { return name_; }
    std::span<const Rational> values() const { return values_; }
    const Rational& operator()(std::size_t rank) const { return values_[rank]; }

    /// Known finite sup-norm.
    double bound() const { return bound_; }

    /// Least common denominator of all values; exact accumulation runs on
    /// integer numerators over this denominator.
    std::int64_t common_den() const { return common_den_; }
    std::int64_t scaled_num(std::size_t rank) const { return scaled_num_[rank]; }

    static FTable constant(const Alphabet& a, std::size_t m, Rational c);
    /// m = 1, f(y) = numeric value of y.
    static FTable identity(const Alphabet& a);
    /// f(y) = product of the coordinates' numeric values.
    static FTable product(const Alphabet& a, std::size_t m);
    /// indicator of all coordinates equal.
    static FTable all_equal(const Alphabet& a, std::size_t m);

private:
    std::size_t k_;
    std::size_t m_;
    std::vector<Rational> values_;
    std::string name_;
    double bound_;
    std::int64_t common_den_;
    std::vector<std::int64_t> scaled_num_;
};

/// Observable F(t, omega) = f(omega(window at t)). The window is either the
/// canonical m-step staircase shape at t (so F follows the line pattern) or
/// a fixed, t-independent set of sites.
class WindowObservable {
public:
    enum class ShapeRule { staircase, fixed };

    static WindowObservable staircase(FTable f);
    static WindowObservable fixed(std::vector<Vec2> window, FTable f);

    ShapeRule shape_rule() const { return rule_; }
    const FTable& f() const { return f_; }
    std::size_t m() const { return f_.m(); }
    double bound() const { return f_.bound(); }
    const std::vector<Vec2>& fixed_window() const;

private:
    WindowObservable(ShapeRule r, std::vector<Vec2> w, FTable f)
        : rule_(r), window_(std::move(w)), f_(std::move(f)) {}
    ShapeRule rule_;
    std::vector<Vec2> window_;
    FTable f_;
};

}  // namespace skewlab
