#include "skewlab/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "skewlab/detail/exact_orbit.hpp"
#include "skewlab/errors.hpp"

namespace skewlab {

std::pair<CirclePoint, Vec2> iterate(const SkewSystem& sys, const CirclePoint& t,
                                     std::uint64_t n) {
    return {orbit_point(t, sys.slope, n), cocycle(t, sys.slope, sys.coupling, n).vector};
}

namespace {

void check_checkpoints(std::span<const std::uint64_t> cps) {
    if (cps.empty()) throw std::invalid_argument("checkpoints: empty list");
    std::uint64_t prev = 0;
    for (std::uint64_t c : cps) {
        if (c <= prev) throw std::invalid_argument("checkpoints: must be strictly increasing");
        prev = c;
    }
    if (prev > kOrbitBudget) throw budget_error("checkpoints exceed the orbit budget");
}

// Fixed-order Neumaier summation; the loop owns the order, so results are
// reproducible bit for bit.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        double s = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - s) + x;
        else
            comp += (x - s) + sum;
        sum = s;
    }
    double value() const { return sum + comp; }
};

struct Accumulator {
    CompensatedSum num;
    __int128 exact_num = 0;
    std::int64_t common_den = 1;
    bool exact = false;

    void add(double term, std::int64_t scaled) {
        num.add(term);
        exact_num += scaled;
    }

    double mean(std::uint64_t n) const { return num.value() / static_cast<double>(n); }

    std::optional<Rational> exact_mean(std::uint64_t n) const {
        if (!exact) return std::nullopt;
        try {
            return Rational::from_int128(
                exact_num, static_cast<__int128>(common_den) * static_cast<__int128>(n));
        } catch (const std::overflow_error&) {
            return std::nullopt;
        }
    }
};

// One orbit evaluation step factored over the two arithmetic modes. The
// exact mode runs on the stable-denominator orbit; the approx mode computes
// base points in closed form to avoid iterative drift.
class OrbitReader {
public:
    OrbitReader(const SkewSystem& sys, const WindowObservable& obs, const CirclePoint& t,
                std::uint64_t seed)
        : sys_(sys),
          obs_(obs),
          field_(sys.gen.reseeded(seed)),
          t0_(t),
          exact_(t.is_exact() && sys.slope.is_rational() &&
                 sys.coupling.kind() != Coupling::Kind::custom &&
                 detail::ExactOrbit::fits(t, sys.slope)),
          orbit_(exact_ ? detail::ExactOrbit(t, sys_.slope)
                        : detail::ExactOrbit(CirclePoint::exact(Rational(0)),
                                             Slope::rational(1, 2))),
          m_(obs.m()),
          k_(sys.gen.alphabet().size()) {
        f_double_.reserve(obs_.f().values().size());
        for (const Rational& v : obs_.f().values()) f_double_.push_back(v.to_double());
        if (obs_.shape_rule() == WindowObservable::ShapeRule::fixed)
            shape_ = obs_.fixed_window();
        else
            shape_.resize(m_);
    }

    bool exact_mode() const { return exact_; }

    // evaluates F(tau^i(t), theta_kappa omega) for the current step, then
    // advances the base point and the cocycle
    void step(std::uint64_t i, Accumulator& acc) {
        if (obs_.shape_rule() == WindowObservable::ShapeRule::staircase) {
            if (exact_) {
                for (std::size_t dz = 0; dz < m_; ++dz)
                    shape_[dz] = Vec2{static_cast<std::int64_t>(dz),
                                      orbit_.window_floor(static_cast<std::int64_t>(dz))};
            } else {
                double ti = approx_point(i);
                shape_[0] = Vec2{0, 0};
                for (std::size_t dz = 1; dz < m_; ++dz) {
                    FloorValue f = floor_checked(sys_.slope.value() * static_cast<double>(dz) + ti);
                    if (f.near_boundary) ++boundary_warnings_;
                    shape_[dz] = Vec2{static_cast<std::int64_t>(dz), f.value};
                }
            }
        }
        std::size_t rank = 0;
        for (std::size_t u = 0; u < m_; ++u) {
            Vec2 site = shifted_site(sys_.basis, kappa_, shape_[u]);
            rank = rank * k_ + field_.sample_site(site);
        }
        acc.add(f_double_[rank], obs_.f().scaled_num(rank));
        advance(i);
    }

    std::uint64_t boundary_warnings() const { return boundary_warnings_; }

private:
    // base point tau^i(t) in closed form, cached across the two uses per step
    double approx_point(std::uint64_t i) {
        if (i != cached_i_) {
            cached_ti_ = orbit_point(t0_, sys_.slope, i).value();
            cached_i_ = i;
        }
        return cached_ti_;
    }

    void advance(std::uint64_t i) {
        if (exact_) {
            if (sys_.coupling.kind() == Coupling::Kind::staircase) {
                std::int64_t rise = orbit_.step();
                kappa_ += Vec2{1, rise};
            } else {
                kappa_ += sys_.coupling.constant_value();
                orbit_.step();
            }
        } else {
            if (sys_.coupling.kind() == Coupling::Kind::staircase) {
                FloorValue f = floor_checked(approx_point(i) + sys_.slope.value());
                if (f.near_boundary) ++boundary_warnings_;
                kappa_ += Vec2{1, f.value};
            } else if (sys_.coupling.kind() == Coupling::Kind::constant) {
                kappa_ += sys_.coupling.constant_value();
            } else {
                kappa_ += sys_.coupling(orbit_point(t0_, sys_.slope, i), nullptr);
            }
        }
    }

    const SkewSystem& sys_;
    const WindowObservable& obs_;
    FieldGenerator field_;
    CirclePoint t0_;
    bool exact_;
    detail::ExactOrbit orbit_;
    std::size_t m_;
    std::size_t k_;
    std::vector<double> f_double_;
    std::vector<Vec2> shape_;
    Vec2 kappa_{0, 0};
    std::uint64_t boundary_warnings_ = 0;
    std::uint64_t cached_i_ = ~std::uint64_t(0);
    double cached_ti_ = 0.0;
};

}  // namespace

AverageSeries ergodic_average(const SkewSystem& sys, const WindowObservable& obs,
                              const CirclePoint& t, std::uint64_t seed,
                              std::span<const std::uint64_t> checkpoints) {
    check_checkpoints(checkpoints);
    if (obs.f().alphabet_size() != sys.gen.alphabet().size())
        throw std::invalid_argument("ergodic_average: observable/field alphabet mismatch");

    OrbitReader reader(sys, obs, t, seed);
    Accumulator acc;
    acc.exact = reader.exact_mode();
    acc.common_den = obs.f().common_den();

    AverageSeries series;
    series.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    series.seed = seed;

    std::size_t next_cp = 0;
    std::uint64_t n_max = checkpoints.back();
    for (std::uint64_t i = 0; i < n_max; ++i) {
        reader.step(i, acc);
        if (i + 1 == checkpoints[next_cp]) {
            series.averages.push_back(acc.mean(i + 1));
            series.exact.push_back(acc.exact_mean(i + 1));
            ++next_cp;
        }
    }
    series.boundary_warnings = reader.boundary_warnings();
    return series;
}

PeriodicDecomposition periodic_components(const SkewSystem& sys, const WindowObservable& obs,
                                          const CirclePoint& t, std::uint64_t seed,
                                          std::span<const std::uint64_t> m_checkpoints) {
    if (!sys.slope.is_rational())
        throw std::invalid_argument("periodic_components: slope must be rational");
    check_checkpoints(m_checkpoints);

    std::uint64_t q = static_cast<std::uint64_t>(sys.slope.q());
    std::uint64_t m_max = m_checkpoints.back();
    if (m_max > kOrbitBudget / q) throw budget_error("periodic_components: orbit budget");

    OrbitReader reader(sys, obs, t, seed);
    std::vector<Accumulator> acc(q);
    for (auto& a : acc) {
        a.exact = reader.exact_mode();
        a.common_den = obs.f().common_den();
    }

    PeriodicDecomposition out;
    out.q = q;
    out.components.resize(q);
    for (std::uint64_t nu = 0; nu < q; ++nu) {
        out.components[nu].checkpoints.assign(m_checkpoints.begin(), m_checkpoints.end());
        out.components[nu].seed = seed;
    }

    // Terms arrive in orbit order i = j*q + nu; bucket nu fills at j = i/q.
    std::size_t next_cp = 0;
    for (std::uint64_t i = 0; i < m_max * q; ++i) {
        std::uint64_t nu = i % q;
        reader.step(i, acc[nu]);
        if (nu == q - 1 && (i + 1) / q == m_checkpoints[next_cp]) {
            std::uint64_t j = m_checkpoints[next_cp];
            for (std::uint64_t v = 0; v < q; ++v) {
                out.components[v].averages.push_back(acc[v].mean(j));
                out.components[v].exact.push_back(acc[v].exact_mean(j));
            }
            ++next_cp;
        }
    }
    for (auto& c : out.components) c.boundary_warnings = reader.boundary_warnings();
    return out;
}

std::vector<std::uint64_t> pow2_checkpoints(std::uint64_t n) {
    std::vector<std::uint64_t> cps;
    for (std::uint64_t c = 1; c < n && c != 0; c <<= 1) cps.push_back(c);
    if (cps.empty() || cps.back() != n) cps.push_back(n);
    return cps;
}

}  // namespace skewlab
