#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/field.hpp"
#include "skewlab/observable.hpp"

namespace skewlab {

/// A closed-form limit with its provenance. Values are exact rationals
/// whenever every ingredient (field probabilities, symbol values, slope,
/// intercept) is rational.
struct LimitValue {
    enum class Formula {
        ergodic_product,
        periodic_q_average,
        staircase_rational,
        staircase_irrational,
        m2_mixture,
    };

    double value = 0.0;
    std::optional<Rational> exact;
    Formula tag = Formula::ergodic_product;
    std::string provenance;

    static const char* formula_name(Formula f);
};

/// E[F] for a t-independent window: sum_y f(y) P_U(y) from the exact
/// marginal table. Accepts fixed-window observables and single-site
/// staircase observables (whose window never varies).
LimitValue limit_ergodic_product(const FieldGenerator& gen, const WindowObservable& obs);

/// Periodic-base staircase limit (1/q) sum_nu int f dP_{lambda, tau^nu(t), m}.
/// Raises a boundary warning if some tau^nu(t) sits on a shape breakpoint
/// (the value then follows the floor convention).
LimitValue limit_staircase_rational(const FieldGenerator& gen, const FTable& f,
                                    const Slope& lambda, const CirclePoint& t,
                                    BoundaryLog* log = nullptr);

/// Uniquely-ergodic-base staircase limit int_0^1 int f dP_{lambda,t,m} dt,
/// integrated exactly over the shape cells (interval length times exact
/// marginal integral).
LimitValue limit_staircase_irrational(const FieldGenerator& gen, const FTable& f,
                                      const Slope& lambda);

/// The m = 2 closed form lambda * int f dP_step + (1-lambda) * int f dP_flat.
LimitValue limit_m2_mixture(const FieldGenerator& gen, const FTable& f, const Slope& lambda);

/// int_0^1 g dt by adaptive Simpson quadrature (tolerance 1e-10 by default).
double limit_weyl(const std::function<double(double)>& g, double tol = 1e-10);

/// Exact per-phase orbit limits for a checkerboard fibre over a periodic
/// base: the value sequence has period p*q, so the limit is the exact
/// average over one full period, conditioned on each phase. This is the
/// ground truth the product-formula limit is checked against in the
/// negative-control diagnostics.
std::vector<LimitValue> checkerboard_phase_limits(const FieldGenerator& gen, const FTable& f,
                                                  const Slope& lambda, const CirclePoint& t);

}  // namespace skewlab
