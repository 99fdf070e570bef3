#include "skewlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skewlab {

Vec2 line_point(const Slope& lambda, const CirclePoint& t, std::int64_t z, BoundaryLog* log) {
    if (t.is_exact() && lambda.is_rational()) {
        const Rational& lr = lambda.ratio();
        const Rational& tr = t.ratio();
        // floor((p*z*bt + at*q) / (q*bt)) in 128-bit
        Rational::int128 num = static_cast<Rational::int128>(lr.num()) * z * tr.den() +
                               static_cast<Rational::int128>(tr.num()) * lr.den();
        Rational::int128 den = static_cast<Rational::int128>(lr.den()) * tr.den();
        Rational::int128 q = num / den;
        if (num % den != 0 && num < 0) --q;
        return {z, static_cast<std::int64_t>(q)};
    }
    FloorValue f = floor_checked(lambda.value() * static_cast<double>(z) + t.value());
    if (f.near_boundary) note_boundary(log);
    return {z, f.value};
}

std::vector<Vec2> window(const Slope& lambda, const CirclePoint& t, std::int64_t z1,
                         std::int64_t m, BoundaryLog* log) {
    if (m < 1) throw std::invalid_argument("window: size must be >= 1");
    std::vector<Vec2> w;
    w.reserve(static_cast<std::size_t>(m));
    for (std::int64_t z = z1; z < z1 + m; ++z) w.push_back(line_point(lambda, t, z, log));
    return w;
}

std::vector<Vec2> canonical_window(const Slope& lambda, const CirclePoint& t,
                                   std::int64_t z1, std::int64_t m, BoundaryLog* log) {
    std::vector<Vec2> w = window(lambda, t, z1, m, log);
    Vec2 base = w.front();
    for (Vec2& p : w) p = p - base;
    return w;
}

StepDecomposition step_decompose(const Slope& lambda, const CirclePoint& t,
                                 std::uint64_t n, std::uint64_t u, BoundaryLog* log) {
    StepDecomposition d;
    d.lhs = line_point(lambda, t, static_cast<std::int64_t>(n + u), log);
    CirclePoint tn = orbit_point(t, lambda, n);
    d.rhs = line_point(lambda, t, static_cast<std::int64_t>(n), log) +
            line_point(lambda, tn, static_cast<std::int64_t>(u), log);
    return d;
}

LineCocycleCheck line_equals_cocycle(const Slope& lambda, const CirclePoint& t,
                                     std::uint64_t n, BoundaryLog* log) {
    LineCocycleCheck c;
    c.cocycle_value = cocycle(t, lambda, Coupling::staircase(lambda), n, log).vector;
    c.line_value = line_point(lambda, t, static_cast<std::int64_t>(n), log);
    return c;
}

std::vector<ShapeCell> shape_breakpoints(const Slope& lambda, std::int64_t m) {
    if (m < 1) throw std::invalid_argument("shape_breakpoints: m must be >= 1");

    std::vector<ShapeCell> cells;
    if (lambda.is_rational()) {
        std::vector<Rational> pts;
        pts.emplace_back(0);
        for (std::int64_t z = 1; z < m; ++z)
            pts.push_back((Rational(-z) * lambda.ratio()).frac());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            ShapeCell cell;
            cell.lo = CirclePoint::exact(pts[i]);
            Rational hi = (i + 1 < pts.size()) ? pts[i + 1] : Rational(1);
            cell.exact_length = hi - pts[i];
            cell.length = cell.exact_length->to_double();
            Rational mid = (pts[i] + hi) * Rational(1, 2);
            cell.shape = canonical_window(lambda, CirclePoint::exact(mid), 0, m);
            cells.push_back(std::move(cell));
        }
    } else {
        std::vector<double> pts{0.0};
        for (std::int64_t z = 1; z < m; ++z) {
            double v = -lambda.value() * static_cast<double>(z);
            pts.push_back(v - std::floor(v));
        }
        std::sort(pts.begin(), pts.end());
        std::vector<double> uniq;
        for (double p : pts)
            if (uniq.empty() || p - uniq.back() >= kBoundaryTol) uniq.push_back(p);
        for (std::size_t i = 0; i < uniq.size(); ++i) {
            ShapeCell cell;
            cell.lo = CirclePoint::approx(uniq[i]);
            double hi = (i + 1 < uniq.size()) ? uniq[i + 1] : 1.0;
            cell.length = hi - uniq[i];
            double mid = 0.5 * (uniq[i] + hi);
            cell.shape = canonical_window(lambda, CirclePoint::approx(mid), 0, m);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace skewlab
