#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "skewlab/hash.hpp"
#include "skewlab/rational.hpp"
#include "skewlab/vec2.hpp"

namespace skewlab {

/// Finite ordered symbol set with numeric values for observables. Default
/// encoding is 0, 1, ..., k-1.
class Alphabet {
public:
    explicit Alphabet(std::size_t k);
    explicit Alphabet(std::vector<Rational> values);

    std::size_t size() const { return values_.size(); }
    const Rational& value(std::size_t symbol) const { return values_.at(symbol); }
    std::span<const Rational> values() const { return values_; }

    static Alphabet binary() { return Alphabet(2); }

private:
    std::vector<Rational> values_;
};

/// Basis (v1, v2) of the 2-parameter shift group theta_k = shift by
/// k1*v1 + k2*v2. The default is the axis basis.
struct ShiftBasis {
    Vec2 v1{1, 0};
    Vec2 v2{0, 1};

    bool independent() const { return v1.x * v2.y - v1.y * v2.x != 0; }
};

/// theta_k omega read at j looks the field up at j + k1*v1 + k2*v2.
inline Vec2 shifted_site(const ShiftBasis& basis, Vec2 k, Vec2 j) {
    return j + k.x * basis.v1 + k.y * basis.v2;
}

/// A seeded, lazily evaluated shift-invariant random field on Z^2. The value
/// at a site is a pure function of (seed, site); no state is materialized.
///
/// Three constructions:
///   iid            — independent symbols, one per site
///   block_factor   — g applied to an iid latent field over a finite stencil;
///                    finite-range factors of iid are tail-trivial, hence the
///                    shift group is strongly mixing
///   checkerboard   — (j1 + j2 + phase) mod period; shift-invariant in law
///                    but deliberately not mixing (a negative control)
class FieldGenerator {
public:
    enum class Kind { iid, block_factor, phase_checkerboard };

    using FactorFn = std::function<std::size_t(std::span<const std::size_t>)>;

    static FieldGenerator iid(Alphabet alphabet, std::vector<Rational> probs,
                              std::uint64_t seed);
    static FieldGenerator block_factor(Alphabet alphabet, Alphabet latent,
                                       std::vector<Rational> latent_probs,
                                       std::vector<Vec2> stencil, FactorFn factor,
                                       std::string factor_name, std::uint64_t seed);
    static FieldGenerator phase_checkerboard(std::int64_t period, std::uint64_t seed);

    /// Bernoulli(p) latent bits combined by OR over the stencil
    /// {(0,0),(1,1)}: the north-east OR factor. P(site = 1) = 1 - (1-p)^2.
    static FieldGenerator or_field(std::uint64_t seed, Rational latent_p = Rational(1, 4));

    /// Symbol at lattice site j; deterministic in (seed, j).
    std::size_t sample_site(Vec2 j) const;

    const Alphabet& alphabet() const { return alphabet_; }
    Kind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }

    /// Same construction, different realization.
    FieldGenerator reseeded(std::uint64_t seed) const;

    /// True for the generator classes whose shift group is provably strongly
    /// mixing (iid and finite-range block factors); false for the
    /// checkerboard.
    bool mixing_certified() const { return kind_ != Kind::phase_checkerboard; }

    // construction details, needed by exact marginal enumeration
    std::span<const Rational> site_probs() const { return probs_; }
    const Alphabet& latent_alphabet() const { return latent_; }
    std::span<const Rational> latent_probs() const { return latent_probs_; }
    std::span<const Vec2> stencil() const { return stencil_; }
    std::size_t apply_factor(std::span<const std::size_t> latent_syms) const;
    const std::string& factor_name() const { return factor_name_; }
    std::int64_t period() const { return period_; }
    std::int64_t phase() const;  // checkerboard phase derived from the seed

    std::string describe() const;

private:
    FieldGenerator(Alphabet a, Kind k, std::uint64_t seed)
        : alphabet_(std::move(a)), latent_(2), kind_(k), seed_(seed) {}

    std::size_t sample_from(std::span<const Rational> probs,
                            std::span<const double> cdf, std::uint64_t h) const;

    Alphabet alphabet_;
    Alphabet latent_;
    Kind kind_;
    std::uint64_t seed_;

    std::vector<Rational> probs_;      // iid
    std::vector<double> cdf_;          // iid sampling thresholds
    std::vector<Rational> latent_probs_;
    std::vector<double> latent_cdf_;
    std::vector<Vec2> stencil_;
    FactorFn factor_;
    std::string factor_name_;
    std::int64_t period_ = 0;
};

}  // namespace skewlab
