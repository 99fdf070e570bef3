#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skewlab/field.hpp"
#include "skewlab/rational.hpp"
#include "skewlab/vec2.hpp"

namespace skewlab {

/// Latent assignments enumerated for an exact marginal are capped at
/// |latent alphabet|^|latent support| <= 2^24, with the support itself
/// capped at 24 sites.
inline constexpr std::size_t kEnumerationBudget = std::size_t(1) << 24;
inline constexpr std::size_t kLatentSupportBudget = 24;

/// Exact (or empirical) joint distribution of the field restricted to a
/// canonical window shape. Symbol tuples are ranked big-endian: the tuple
/// (s_0, ..., s_{m-1}) has rank sum s_i * k^(m-1-i).
class MarginalTable {
public:
    MarginalTable(std::vector<Vec2> shape, std::size_t alphabet_size,
                  std::vector<Rational> probs, bool exact);

    const std::vector<Vec2>& shape() const { return shape_; }
    std::size_t alphabet_size() const { return k_; }
    std::size_t tuple_count() const { return probs_.size(); }
    bool exact() const { return exact_; }

    const Rational& prob(std::size_t rank) const { return probs_.at(rank); }
    const Rational& prob(std::span<const std::size_t> symbols) const {
        return probs_.at(rank_of(symbols, k_));
    }
    std::span<const Rational> probs() const { return probs_; }

    /// sum_y f(y) P(y), exact when both sides are exact.
    Rational integrate(std::span<const Rational> f_values) const;

    static std::size_t rank_of(std::span<const std::size_t> symbols, std::size_t k);
    static void unrank(std::size_t rank, std::size_t k, std::span<std::size_t> out);

private:
    std::vector<Vec2> shape_;
    std::size_t k_;
    std::vector<Rational> probs_;
    bool exact_;
};

/// Exact finite-window marginal by enumeration: product law for iid fields,
/// weighted enumeration over the latent support for block factors, and
/// per-phase enumeration for the checkerboard. The window is canonicalized
/// to its first point first (shift invariance).
MarginalTable marginal_exact(const FieldGenerator& gen, std::span<const Vec2> window);

/// Monte Carlo estimate of the same table: `samples` independent field
/// realizations (replicate i reseeded with split_seed(stream_seed, i)), each
/// read once at the window. Cell probabilities are exact rationals
/// count/samples.
MarginalTable marginal_mc(const FieldGenerator& gen, std::span<const Vec2> window,
                          std::uint64_t samples, std::uint64_t stream_seed);

}  // namespace skewlab
