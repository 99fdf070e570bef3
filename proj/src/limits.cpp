#include "skewlab/limits.hpp"

#include <cmath>
#include <stdexcept>

#include "skewlab/engine.hpp"
#include "skewlab/lattice.hpp"
#include "skewlab/marginal.hpp"

namespace skewlab {

const char* LimitValue::formula_name(Formula f) {
    switch (f) {
        case Formula::ergodic_product: return "ergodic_product";
        case Formula::periodic_q_average: return "periodic_q_average";
        case Formula::staircase_rational: return "staircase_rational";
        case Formula::staircase_irrational: return "staircase_irrational";
        case Formula::m2_mixture: return "m2_mixture";
    }
    return "?";
}

LimitValue limit_ergodic_product(const FieldGenerator& gen, const WindowObservable& obs) {
    std::vector<Vec2> win;
    if (obs.shape_rule() == WindowObservable::ShapeRule::fixed) {
        win = obs.fixed_window();
    } else if (obs.m() == 1) {
        win = {Vec2{0, 0}};
    } else {
        throw std::invalid_argument(
            "limit_ergodic_product: observable window must be t-independent");
    }
    MarginalTable table = marginal_exact(gen, win);
    Rational v = table.integrate(obs.f().values());
    LimitValue out;
    out.value = v.to_double();
    out.exact = v;
    out.tag = LimitValue::Formula::ergodic_product;
    out.provenance = gen.describe() + ", window size " + std::to_string(win.size());
    return out;
}

LimitValue limit_staircase_rational(const FieldGenerator& gen, const FTable& f,
                                    const Slope& lambda, const CirclePoint& t,
                                    BoundaryLog* log) {
    if (!lambda.is_rational())
        throw std::invalid_argument("limit_staircase_rational: slope must be rational");
    std::int64_t q = lambda.q();
    std::int64_t m = static_cast<std::int64_t>(f.m());

    Rational acc(0);
    double acc_d = 0.0;
    bool all_exact = true;
    for (std::int64_t nu = 0; nu < q; ++nu) {
        CirclePoint tn = orbit_point(t, lambda, static_cast<std::uint64_t>(nu));
        if (tn.is_exact()) {
            // breakpoint hit: frac(lambda*z + t_nu) == 0 for some 1 <= z < m
            for (std::int64_t z = 1; z < m; ++z) {
                Rational x = lambda.ratio() * Rational(z) + tn.ratio();
                if (x.frac() == Rational(0)) note_boundary(log);
            }
        }
        std::vector<Vec2> shape = canonical_window(lambda, tn, 0, m, log);
        Rational integral = marginal_exact(gen, shape).integrate(f.values());
        if (tn.is_exact()) {
            acc += integral;
        } else {
            all_exact = false;
        }
        acc_d += integral.to_double();
    }

    LimitValue out;
    out.tag = LimitValue::Formula::staircase_rational;
    out.provenance = gen.describe() + ", q=" + std::to_string(q) + ", t=" + t.str();
    if (all_exact && t.is_exact()) {
        Rational v = acc / Rational(q);
        out.exact = v;
        out.value = v.to_double();
    } else {
        out.value = acc_d / static_cast<double>(q);
    }
    return out;
}

LimitValue limit_staircase_irrational(const FieldGenerator& gen, const FTable& f,
                                      const Slope& lambda) {
    if (lambda.is_rational())
        throw std::invalid_argument("limit_staircase_irrational: slope must be irrational");
    double acc = 0.0;
    for (const ShapeCell& cell : shape_breakpoints(lambda, static_cast<std::int64_t>(f.m()))) {
        Rational integral = marginal_exact(gen, cell.shape).integrate(f.values());
        acc += cell.length * integral.to_double();
    }
    LimitValue out;
    out.value = acc;
    out.tag = LimitValue::Formula::staircase_irrational;
    out.provenance = gen.describe() + ", lambda=" + lambda.str();
    return out;
}

LimitValue limit_m2_mixture(const FieldGenerator& gen, const FTable& f, const Slope& lambda) {
    if (f.m() != 2) throw std::invalid_argument("limit_m2_mixture: needs m = 2");
    std::vector<Vec2> step{Vec2{0, 0}, Vec2{1, 1}};
    std::vector<Vec2> flat{Vec2{0, 0}, Vec2{1, 0}};
    Rational istep = marginal_exact(gen, step).integrate(f.values());
    Rational iflat = marginal_exact(gen, flat).integrate(f.values());

    LimitValue out;
    out.tag = LimitValue::Formula::m2_mixture;
    out.provenance = gen.describe() + ", lambda=" + lambda.str();
    if (lambda.is_rational()) {
        Rational v = lambda.ratio() * istep + (Rational(1) - lambda.ratio()) * iflat;
        out.exact = v;
        out.value = v.to_double();
    } else {
        out.value = lambda.value() * istep.to_double() +
                    (1.0 - lambda.value()) * iflat.to_double();
    }
    return out;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = g(lm), frm = g(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (!std::isfinite(delta)) throw std::runtime_error("limit_weyl: quadrature non-convergence");
    // depth cap: the remaining interval contributes at most its length times
    // the local spread, already below tolerance for bounded integrands
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double limit_weyl(const std::function<double(double)>& g, double tol) {
    double a = 0.0, b = 1.0;
    double fa = g(a), fm = g(0.5), fb = g(b - 0x1.0p-52);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double v = adaptive_simpson(g, a, b, fa, fm, fb, whole, tol, 48);
    if (!std::isfinite(v)) throw std::runtime_error("limit_weyl: quadrature non-convergence");
    return v;
}

std::vector<LimitValue> checkerboard_phase_limits(const FieldGenerator& gen, const FTable& f,
                                                  const Slope& lambda, const CirclePoint& t) {
    if (gen.kind() != FieldGenerator::Kind::phase_checkerboard)
        throw std::invalid_argument("checkerboard_phase_limits: needs a checkerboard field");
    if (!lambda.is_rational())
        throw std::invalid_argument("checkerboard_phase_limits: slope must be rational");

    std::int64_t p = gen.period();
    std::uint64_t period = static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(lambda.q());
    std::vector<LimitValue> out;
    for (std::int64_t phi = 0; phi < p; ++phi) {
        // scan for a seed realizing this phase; the phase map is onto, so a
        // match shows up after a few tries
        std::uint64_t seed = 0;
        while (gen.reseeded(seed).phase() != phi) ++seed;
        SkewSystem sys = SkewSystem::staircase(lambda, gen);
        std::uint64_t cps[1] = {period};
        AverageSeries s =
            ergodic_average(sys, WindowObservable::staircase(f), t, seed, cps);
        LimitValue lv;
        lv.value = s.last();
        lv.exact = s.last_exact();
        lv.tag = LimitValue::Formula::periodic_q_average;
        lv.provenance = "phase " + std::to_string(phi) + ", one full period " +
                        std::to_string(period);
        out.push_back(std::move(lv));
    }
    return out;
}

}  // namespace skewlab
