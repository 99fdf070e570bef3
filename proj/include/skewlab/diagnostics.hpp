#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/coupling.hpp"
#include "skewlab/engine.hpp"
#include "skewlab/field.hpp"

namespace skewlab {

/// Minimum distance a breakpoint-avoiding grid keeps from every shape
/// breakpoint.
inline constexpr double kGridClearance = 0x1.0p-20;

/// Finite probe grid standing in for the paper-level sup over t. For
/// piecewise-constant staircase observables a breakpoint-avoiding grid with
/// one point per shape interval captures the limit-side sup exactly.
struct TGrid {
    std::vector<CirclePoint> points;

    static TGrid uniform(std::size_t n, const Rational& offset);
    static TGrid uniform_approx(std::size_t n, double offset);

    /// Shape-cell midpoints plus uniform fill, keeping kGridClearance from
    /// every breakpoint of the (slope, m) staircase.
    static TGrid breakpoint_avoiding(std::size_t n, const Slope& lambda, std::int64_t m);
};

/// An event determined by finitely many sites: {omega(j) = s_j for j in J}.
struct CylinderEvent {
    std::vector<std::pair<Vec2, std::size_t>> constraints;
    bool impossible = false;

    static CylinderEvent require(std::vector<std::pair<Vec2, std::size_t>> cs) {
        return CylinderEvent{std::move(cs), false};
    }
    static CylinderEvent single(Vec2 site, std::size_t symbol) {
        return require({{site, symbol}});
    }
    /// The empty event (probability zero).
    static CylinderEvent never() { return CylinderEvent{{}, true}; }
    /// The sure event (no constraints).
    static CylinderEvent sure() { return CylinderEvent{{}, false}; }
};

/// Growth diagnostic for condition (C2): per checkpoint, the minimum over
/// the grid of the running max of ||kappa_n(t)|| so far.
struct C2Result {
    std::vector<std::uint64_t> checkpoints;
    std::vector<std::int64_t> min_envelope;

    bool passes(std::int64_t threshold) const {
        return !min_envelope.empty() && min_envelope.back() > threshold;
    }
};
C2Result check_c2(const Slope& lambda, const Coupling& kappa, const TGrid& grid,
                  std::span<const std::uint64_t> checkpoints);

/// (1/n^2) sup over the grid of |{1 <= i,j <= n : ||kappa_i(t) - kappa_j(t)||
/// <= m}| (ordered pairs, diagonal included). Exact pair counts.
double growth_condition_stat(const Slope& lambda, const Coupling& kappa, const TGrid& grid,
                             std::uint64_t n, std::uint64_t m);

/// |P(A intersect theta_k^-1 B) - P(A) P(B)|. Exact by enumeration whenever
/// the joint support fits the budget; Monte Carlo with a reported standard
/// error when samples > 0 is requested instead.
struct CorrelationResult {
    double value = 0.0;
    std::optional<Rational> exact;
    std::optional<double> std_error;
    std::uint64_t samples = 0;
};
CorrelationResult mixing_correlation(const FieldGenerator& gen, const CylinderEvent& A,
                                     const CylinderEvent& B, const ShiftBasis& basis, Vec2 k,
                                     std::uint64_t samples = 0, std::uint64_t mc_seed = 0);

/// Cesaro average (1/n) sum_i |P(A intersect theta_{k_i}^-1 B) - P(A)P(B)|
/// along a given shift sequence, e.g. (kappa_i(t))_i.
CorrelationResult weak_mixing_along(const FieldGenerator& gen, const CylinderEvent& A,
                                    const CylinderEvent& B, const ShiftBasis& basis,
                                    std::span<const Vec2> shifts, std::uint64_t samples = 0,
                                    std::uint64_t mc_seed = 0);

/// Uniform-in-t error diagnostics: at each checkpoint n,
///   sup_error — max over grid points and seeds of |A_n(t, omega) - limit(t)|
///   lp_error  — max over grid points of the empirical L^p mean over seeds
/// Reductions run in fixed (t, seed) order.
struct ErrorCurve {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> sup_error;
    std::vector<double> l1_error;
    std::vector<double> l2_error;
    std::uint64_t boundary_warnings = 0;
};
ErrorCurve uniform_error_curve(const SkewSystem& sys, const WindowObservable& obs,
                               const TGrid& grid, std::span<const std::uint64_t> seeds,
                               std::span<const std::uint64_t> checkpoints,
                               const std::function<double(const CirclePoint&)>& limit_at,
                               unsigned threads = 1);

/// Empirical equicontinuity modulus sup_{d(s,t) < delta} |A_n(s) - A_n(t)|
/// over a fine circle grid, per (delta, n), with the maximizing pair.
struct ModulusEntry {
    double delta = 0.0;
    std::uint64_t n = 0;
    double modulus = 0.0;
    double arg_lo = 0.0;  // the maximizing pair of grid points
    double arg_hi = 0.0;
};
std::vector<ModulusEntry> equicontinuity_modulus(const SkewSystem& sys,
                                                 const WindowObservable& obs,
                                                 std::span<const double> deltas,
                                                 std::span<const std::uint64_t> ns,
                                                 std::uint64_t seed);

/// Same modulus for a fibre-independent observable F(t, omega) = g(t).
std::vector<ModulusEntry> equicontinuity_modulus_base(const Slope& lambda,
                                                      const std::function<double(double)>& g,
                                                      std::span<const double> deltas,
                                                      std::span<const std::uint64_t> ns);

}  // namespace skewlab
