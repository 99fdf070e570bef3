#include "skewlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skewlab/lattice.hpp"
#include "skewlab/marginal.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab {

TGrid TGrid::uniform(std::size_t n, const Rational& offset) {
    if (n == 0) throw std::invalid_argument("TGrid: empty grid");
    TGrid g;
    g.points.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        g.points.push_back(CirclePoint::exact(
            offset + Rational(static_cast<std::int64_t>(j), static_cast<std::int64_t>(n))));
    return g;
}

TGrid TGrid::uniform_approx(std::size_t n, double offset) {
    if (n == 0) throw std::invalid_argument("TGrid: empty grid");
    TGrid g;
    g.points.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        g.points.push_back(
            CirclePoint::approx(offset + static_cast<double>(j) / static_cast<double>(n)));
    return g;
}

TGrid TGrid::breakpoint_avoiding(std::size_t n, const Slope& lambda, std::int64_t m) {
    if (n == 0) throw std::invalid_argument("TGrid: empty grid");
    std::vector<ShapeCell> cells = shape_breakpoints(lambda, m);
    std::vector<double> breakpoints;
    for (const ShapeCell& c : cells) breakpoints.push_back(c.lo.value());

    auto clear_of_breakpoints = [&](double t) {
        for (double b : breakpoints)
            if (circle_distance(t, b) < kGridClearance) return false;
        return true;
    };

    TGrid g;
    // one midpoint per shape cell first: these capture every shape exactly
    for (const ShapeCell& c : cells) {
        if (c.lo.is_exact() && c.exact_length) {
            Rational mid = c.lo.ratio() + *c.exact_length * Rational(1, 2);
            if (clear_of_breakpoints(mid.to_double()))
                g.points.push_back(CirclePoint::exact(mid));
        } else {
            double mid = c.lo.value() + 0.5 * c.length;
            if (clear_of_breakpoints(mid)) g.points.push_back(CirclePoint::approx(mid));
        }
    }
    // uniform fill, filtered
    for (std::size_t j = 0; j < n && g.points.size() < n; ++j) {
        double t = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        if (clear_of_breakpoints(t)) {
            bool dup = false;
            for (const CirclePoint& p : g.points)
                if (circle_distance(p.value(), t) < 1.0 / (4.0 * static_cast<double>(n)))
                    dup = true;
            if (!dup) g.points.push_back(CirclePoint::approx(t));
        }
    }
    std::sort(g.points.begin(), g.points.end(),
              [](const CirclePoint& a, const CirclePoint& b) { return a.value() < b.value(); });
    return g;
}

C2Result check_c2(const Slope& lambda, const Coupling& kappa, const TGrid& grid,
                  std::span<const std::uint64_t> checkpoints) {
    if (checkpoints.empty()) throw std::invalid_argument("check_c2: no checkpoints");
    C2Result out;
    out.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    out.min_envelope.assign(checkpoints.size(),
                            std::numeric_limits<std::int64_t>::max());
    std::uint64_t n_max = checkpoints.back();
    for (const CirclePoint& t : grid.points) {
        std::int64_t running_max = 0;
        std::size_t cp = 0;
        cocycle_scan(t, lambda, kappa, n_max, [&](std::uint64_t i, Vec2 k) {
            running_max = std::max(running_max, k.max_norm());
            if (i == checkpoints[cp]) {
                out.min_envelope[cp] = std::min(out.min_envelope[cp], running_max);
                ++cp;
            }
        });
    }
    return out;
}

double growth_condition_stat(const Slope& lambda, const Coupling& kappa, const TGrid& grid,
                             std::uint64_t n, std::uint64_t m) {
    if (n < 1) throw std::invalid_argument("growth_condition_stat: n must be >= 1");

    // constant coupling: kappa_i = i*k0, so the pair count has a closed form
    if (kappa.kind() == Coupling::Kind::constant) {
        std::int64_t norm = kappa.constant_value().max_norm();
        std::uint64_t band = norm == 0 ? n - 1 : std::min<std::uint64_t>(m / norm, n - 1);
        std::uint64_t count = n * (2 * band + 1) - band * (band + 1);
        return static_cast<double>(count) / (static_cast<double>(n) * static_cast<double>(n));
    }

    std::uint64_t worst = 0;
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (const CirclePoint& t : grid.points) {
        pts.clear();
        cocycle_scan(t, lambda, kappa, n, [&](std::uint64_t, Vec2 k) { pts.push_back(k); });
        std::sort(pts.begin(), pts.end());
        // ordered pairs (diagonal included) within max-norm m, counted over a
        // sliding x-window of the sorted sequence
        std::uint64_t count = 0;
        std::size_t lo = 0;
        std::int64_t im = static_cast<std::int64_t>(m);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            while (pts[i].x - pts[lo].x > im) ++lo;
            for (std::size_t j = lo; j <= i; ++j) {
                std::int64_t dy = pts[i].y - pts[j].y;
                if (dy < 0) dy = -dy;
                if (dy <= im) count += (i == j) ? 1 : 2;
            }
        }
        worst = std::max(worst, count);
    }
    return static_cast<double>(worst) / (static_cast<double>(n) * static_cast<double>(n));
}

namespace {

// P(E) for a finite constraint set, by exact marginal enumeration on the
// constrained sites.
Rational exact_event_prob(const FieldGenerator& gen,
                          const std::vector<std::pair<Vec2, std::size_t>>& constraints) {
    if (constraints.empty()) return Rational(1);
    std::vector<Vec2> sites;
    std::vector<std::size_t> syms;
    for (const auto& [site, sym] : constraints) {
        sites.push_back(site);
        syms.push_back(sym);
    }
    MarginalTable table = marginal_exact(gen, sites);
    return table.prob(syms);
}

// merges A's constraints with B's shifted by `shift`; nullopt on conflict
std::optional<std::vector<std::pair<Vec2, std::size_t>>> merge_constraints(
    const CylinderEvent& a, const CylinderEvent& b, Vec2 shift) {
    std::vector<std::pair<Vec2, std::size_t>> merged = a.constraints;
    for (const auto& [site, sym] : b.constraints) {
        Vec2 shifted = site + shift;
        bool conflict = false, dup = false;
        for (const auto& [ms, msym] : merged)
            if (ms == shifted) {
                if (msym != sym) conflict = true;
                dup = true;
            }
        if (conflict) return std::nullopt;
        if (!dup) merged.emplace_back(shifted, sym);
    }
    return merged;
}

bool event_holds(const FieldGenerator& field, const CylinderEvent& e, Vec2 shift) {
    if (e.impossible) return false;
    for (const auto& [site, sym] : e.constraints)
        if (field.sample_site(site + shift) != sym) return false;
    return true;
}

}  // namespace

CorrelationResult mixing_correlation(const FieldGenerator& gen, const CylinderEvent& A,
                                     const CylinderEvent& B, const ShiftBasis& basis, Vec2 k,
                                     std::uint64_t samples, std::uint64_t mc_seed) {
    Vec2 shift = k.x * basis.v1 + k.y * basis.v2;
    CorrelationResult out;

    if (samples == 0) {
        Rational pa = A.impossible ? Rational(0) : exact_event_prob(gen, A.constraints);
        Rational pb = B.impossible ? Rational(0) : exact_event_prob(gen, B.constraints);
        Rational pab(0);
        if (!A.impossible && !B.impossible) {
            auto merged = merge_constraints(A, B, shift);
            if (merged) pab = exact_event_prob(gen, *merged);
        }
        Rational corr = pab - pa * pb;
        if (corr < Rational(0)) corr = -corr;
        out.exact = corr;
        out.value = corr.to_double();
        return out;
    }

    std::uint64_t hits_ab = 0, hits_a = 0, hits_b = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        FieldGenerator replicate = gen.reseeded(split_seed(mc_seed, i));
        bool ia = event_holds(replicate, A, Vec2{0, 0});
        bool ib = event_holds(replicate, B, shift);
        hits_a += ia;
        hits_b += ib;
        hits_ab += (ia && ib);
    }
    double ns = static_cast<double>(samples);
    double pab = static_cast<double>(hits_ab) / ns;
    double pa = static_cast<double>(hits_a) / ns;
    double pb = static_cast<double>(hits_b) / ns;
    out.value = std::fabs(pab - pa * pb);
    out.samples = samples;
    // first-order error bound: se of the joint estimate plus propagated
    // marginal uncertainty
    auto se = [&](double p) { return std::sqrt(p * (1.0 - p) / ns); };
    out.std_error = se(pab) + pa * se(pb) + pb * se(pa);
    return out;
}

CorrelationResult weak_mixing_along(const FieldGenerator& gen, const CylinderEvent& A,
                                    const CylinderEvent& B, const ShiftBasis& basis,
                                    std::span<const Vec2> shifts, std::uint64_t samples,
                                    std::uint64_t mc_seed) {
    if (shifts.empty()) throw std::invalid_argument("weak_mixing_along: empty sequence");
    CorrelationResult out;
    Rational exact_acc(0);
    double acc = 0.0, se_acc = 0.0;
    bool all_exact = true;
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        CorrelationResult c =
            mixing_correlation(gen, A, B, basis, shifts[i], samples,
                               samples ? split_seed(mc_seed, i) : 0);
        acc += c.value;
        if (c.exact && all_exact)
            exact_acc += *c.exact;
        else
            all_exact = false;
        if (c.std_error) se_acc += *c.std_error;
        out.samples += c.samples;
    }
    auto n = static_cast<std::int64_t>(shifts.size());
    if (all_exact) {
        Rational v = exact_acc / Rational(n);
        out.exact = v;
        out.value = v.to_double();
    } else {
        out.value = acc / static_cast<double>(n);
        out.std_error = se_acc / static_cast<double>(n);
    }
    return out;
}

ErrorCurve uniform_error_curve(const SkewSystem& sys, const WindowObservable& obs,
                               const TGrid& grid, std::span<const std::uint64_t> seeds,
                               std::span<const std::uint64_t> checkpoints,
                               const std::function<double(const CirclePoint&)>& limit_at,
                               unsigned threads) {
    if (seeds.empty()) throw std::invalid_argument("uniform_error_curve: no seeds");
    std::size_t nt = grid.points.size();
    std::size_t ns = seeds.size();
    std::size_t ncp = checkpoints.size();

    // all orbits first (independent, parallelizable), reductions after in
    // fixed (t, seed) order
    std::vector<AverageSeries> series(nt * ns);
    parallel_for(nt * ns, threads, [&](std::size_t idx) {
        std::size_t ti = idx / ns;
        std::size_t si = idx % ns;
        series[idx] = ergodic_average(sys, obs, grid.points[ti], seeds[si], checkpoints);
    });

    ErrorCurve curve;
    curve.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    curve.sup_error.assign(ncp, 0.0);
    curve.l1_error.assign(ncp, 0.0);
    curve.l2_error.assign(ncp, 0.0);
    for (std::size_t ti = 0; ti < nt; ++ti) {
        double limit = limit_at(grid.points[ti]);
        std::vector<double> l1(ncp, 0.0), l2(ncp, 0.0);
        for (std::size_t si = 0; si < ns; ++si) {
            const AverageSeries& s = series[ti * ns + si];
            curve.boundary_warnings += s.boundary_warnings;
            for (std::size_t c = 0; c < ncp; ++c) {
                double err = std::fabs(s.averages[c] - limit);
                curve.sup_error[c] = std::max(curve.sup_error[c], err);
                l1[c] += err;
                l2[c] += err * err;
            }
        }
        double denom = static_cast<double>(ns);
        for (std::size_t c = 0; c < ncp; ++c) {
            curve.l1_error[c] = std::max(curve.l1_error[c], l1[c] / denom);
            curve.l2_error[c] = std::max(curve.l2_error[c], std::sqrt(l2[c] / denom));
        }
    }
    return curve;
}

namespace {

std::vector<ModulusEntry> modulus_from_matrix(const std::vector<double>& grid_t,
                                              const std::vector<std::vector<double>>& a,
                                              std::span<const double> deltas,
                                              std::span<const std::uint64_t> ns) {
    std::size_t G = grid_t.size();
    std::vector<ModulusEntry> out;
    for (double delta : deltas) {
        // grid is uniform with spacing 1/G; pairs closer than delta lie
        // within w index steps (circularly)
        std::size_t w = static_cast<std::size_t>(delta * static_cast<double>(G));
        if (w >= G) w = G - 1;
        for (std::size_t ni = 0; ni < ns.size(); ++ni) {
            ModulusEntry e;
            e.delta = delta;
            e.n = ns[ni];
            for (std::size_t j = 0; j < G; ++j) {
                for (std::size_t d = 1; d <= w; ++d) {
                    std::size_t jj = (j + d) % G;
                    if (circle_distance(grid_t[j], grid_t[jj]) >= delta) continue;
                    double diff = std::fabs(a[j][ni] - a[jj][ni]);
                    if (diff > e.modulus) {
                        e.modulus = diff;
                        e.arg_lo = grid_t[j];
                        e.arg_hi = grid_t[jj];
                    }
                }
            }
            out.push_back(e);
        }
    }
    return out;
}

double min_delta(std::span<const double> deltas) {
    if (deltas.empty()) throw std::invalid_argument("equicontinuity_modulus: no deltas");
    double md = deltas[0];
    for (double d : deltas) md = std::min(md, d);
    if (md <= 0.0) throw std::invalid_argument("equicontinuity_modulus: deltas must be positive");
    return md;
}

}  // namespace

std::vector<ModulusEntry> equicontinuity_modulus(const SkewSystem& sys,
                                                 const WindowObservable& obs,
                                                 std::span<const double> deltas,
                                                 std::span<const std::uint64_t> ns,
                                                 std::uint64_t seed) {
    double md = min_delta(deltas);
    std::size_t G = static_cast<std::size_t>(std::ceil(4.0 / md));
    std::vector<double> grid_t(G);
    std::vector<std::vector<double>> a(G);
    for (std::size_t j = 0; j < G; ++j) {
        grid_t[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(G);
        AverageSeries s =
            ergodic_average(sys, obs, CirclePoint::approx(grid_t[j]), seed, ns);
        a[j] = s.averages;
    }
    return modulus_from_matrix(grid_t, a, deltas, ns);
}

std::vector<ModulusEntry> equicontinuity_modulus_base(const Slope& lambda,
                                                      const std::function<double(double)>& g,
                                                      std::span<const double> deltas,
                                                      std::span<const std::uint64_t> ns) {
    double md = min_delta(deltas);
    std::size_t G = static_cast<std::size_t>(std::ceil(4.0 / md));
    std::uint64_t n_max = 0;
    for (std::uint64_t n : ns) n_max = std::max(n_max, n);
    std::vector<double> grid_t(G);
    std::vector<std::vector<double>> a(G);
    for (std::size_t j = 0; j < G; ++j) {
        grid_t[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(G);
        CirclePoint t = CirclePoint::approx(grid_t[j]);
        double sum = 0.0;
        std::size_t ci = 0;
        a[j].assign(ns.size(), 0.0);
        for (std::uint64_t i = 0; i < n_max; ++i) {
            sum += g(orbit_point(t, lambda, i).value());
            while (ci < ns.size() && i + 1 == ns[ci]) {
                a[j][ci] = sum / static_cast<double>(i + 1);
                ++ci;
            }
        }
    }
    return modulus_from_matrix(grid_t, a, deltas, ns);
}

}  // namespace skewlab
