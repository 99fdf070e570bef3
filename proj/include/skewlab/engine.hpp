#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/coupling.hpp"
#include "skewlab/field.hpp"
#include "skewlab/observable.hpp"

namespace skewlab {

/// Orbit steps in a single ergodic-average run are capped here.
inline constexpr std::uint64_t kOrbitBudget = 100'000'000;

/// The skew product S(t, omega) = (tau(t), theta_{kappa(t)} omega). The
/// fibre point is never materialized: reads go through the shift basis.
struct SkewSystem {
    Slope slope;
    Coupling coupling;
    ShiftBasis basis{};
    FieldGenerator gen;

    static SkewSystem staircase(const Slope& lambda, FieldGenerator gen) {
        return SkewSystem{lambda, Coupling::staircase(lambda), ShiftBasis{}, std::move(gen)};
    }
};

/// Running ergodic averages A_n recorded at increasing checkpoints. In exact
/// mode (rational slope, exact t, rational observable values) each average
/// also carries its exact rational value.
struct AverageSeries {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> averages;
    std::vector<std::optional<Rational>> exact;
    std::uint64_t seed = 0;
    std::uint64_t boundary_warnings = 0;

    double last() const { return averages.back(); }
    const std::optional<Rational>& last_exact() const { return exact.back(); }
};

/// Coordinates of S^n(t, omega): the base point tau^n(t) and the cocycle sum
/// kappa_n(t) that identifies the fibre shift.
std::pair<CirclePoint, Vec2> iterate(const SkewSystem& sys, const CirclePoint& t,
                                     std::uint64_t n);

/// Running means of F(tau^i(t), theta_{kappa_i(t)} omega), i < n, where
/// omega is the realization picked by `seed`. Summation is fixed-order and
/// compensated, so results are bitwise reproducible.
AverageSeries ergodic_average(const SkewSystem& sys, const WindowObservable& obs,
                              const CirclePoint& t, std::uint64_t seed,
                              std::span<const std::uint64_t> checkpoints);

/// The q sub-orbit average series A_m^(nu) of a periodic base (rational
/// slope), nu = 0..q-1, each recorded at the given m-checkpoints. Their mean
/// reconstructs A_{mq} exactly under rational accumulation.
struct PeriodicDecomposition {
    std::uint64_t q = 0;
    std::vector<AverageSeries> components;
};
PeriodicDecomposition periodic_components(const SkewSystem& sys, const WindowObservable& obs,
                                          const CirclePoint& t, std::uint64_t seed,
                                          std::span<const std::uint64_t> m_checkpoints);

/// 1, 2, 4, ..., then n itself if it is not a power of two.
std::vector<std::uint64_t> pow2_checkpoints(std::uint64_t n);

}  // namespace skewlab
