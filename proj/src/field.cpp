#include "skewlab/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace skewlab {

Alphabet::Alphabet(std::size_t k) {
    if (k < 2) throw std::invalid_argument("Alphabet: need at least 2 symbols");
    values_.reserve(k);
    for (std::size_t i = 0; i < k; ++i) values_.emplace_back(static_cast<std::int64_t>(i));
}

Alphabet::Alphabet(std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("Alphabet: need at least 2 symbols");
}

namespace {

void check_probs(std::span<const Rational> probs, std::size_t k) {
    if (probs.size() != k)
        throw std::invalid_argument("FieldGenerator: probability vector size mismatch");
    Rational sum(0);
    for (const Rational& p : probs) {
        if (p < Rational(0)) throw std::invalid_argument("FieldGenerator: negative probability");
        sum += p;
    }
    if (sum != Rational(1))
        throw std::invalid_argument("FieldGenerator: probabilities must sum to 1 exactly");
}

std::vector<double> cumulative(std::span<const Rational> probs) {
    std::vector<double> cdf;
    cdf.reserve(probs.size());
    Rational acc(0);
    for (const Rational& p : probs) {
        acc += p;
        cdf.push_back(acc.to_double());
    }
    cdf.back() = 1.0;
    return cdf;
}

}  // namespace

FieldGenerator FieldGenerator::iid(Alphabet alphabet, std::vector<Rational> probs,
                                   std::uint64_t seed) {
    check_probs(probs, alphabet.size());
    FieldGenerator g(std::move(alphabet), Kind::iid, seed);
    g.cdf_ = cumulative(probs);
    g.probs_ = std::move(probs);
    return g;
}

FieldGenerator FieldGenerator::block_factor(Alphabet alphabet, Alphabet latent,
                                            std::vector<Rational> latent_probs,
                                            std::vector<Vec2> stencil, FactorFn factor,
                                            std::string factor_name, std::uint64_t seed) {
    check_probs(latent_probs, latent.size());
    if (stencil.empty()) throw std::invalid_argument("FieldGenerator: empty stencil");
    FieldGenerator g(std::move(alphabet), Kind::block_factor, seed);
    g.latent_ = std::move(latent);
    g.latent_cdf_ = cumulative(latent_probs);
    g.latent_probs_ = std::move(latent_probs);
    g.stencil_ = std::move(stencil);
    g.factor_ = std::move(factor);
    g.factor_name_ = std::move(factor_name);
    return g;
}

FieldGenerator FieldGenerator::phase_checkerboard(std::int64_t period, std::uint64_t seed) {
    if (period < 2) throw std::invalid_argument("FieldGenerator: checkerboard period must be >= 2");
    FieldGenerator g(Alphabet(static_cast<std::size_t>(period)), Kind::phase_checkerboard, seed);
    g.period_ = period;
    return g;
}

FieldGenerator FieldGenerator::or_field(std::uint64_t seed, Rational latent_p) {
    std::vector<Rational> lp{Rational(1) - latent_p, latent_p};
    return block_factor(
        Alphabet::binary(), Alphabet::binary(), std::move(lp), {Vec2{0, 0}, Vec2{1, 1}},
        [](std::span<const std::size_t> s) { return std::max(s[0], s[1]); }, "or", seed);
}

std::size_t FieldGenerator::sample_from(std::span<const Rational>,
                                        std::span<const double> cdf, std::uint64_t h) const {
    double u = uniform01(h);
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
        if (u < cdf[i]) return i;
    return cdf.size() - 1;
}

std::int64_t FieldGenerator::phase() const {
    if (kind_ != Kind::phase_checkerboard)
        throw std::logic_error("FieldGenerator: phase() on non-checkerboard field");
    return static_cast<std::int64_t>(splitmix64(seed_) % static_cast<std::uint64_t>(period_));
}

std::size_t FieldGenerator::apply_factor(std::span<const std::size_t> latent_syms) const {
    std::size_t s = factor_(latent_syms);
    if (s >= alphabet_.size()) throw std::logic_error("FieldGenerator: factor out of range");
    return s;
}

std::size_t FieldGenerator::sample_site(Vec2 j) const {
    switch (kind_) {
        case Kind::iid:
            return sample_from(probs_, cdf_, site_hash(seed_, j.x, j.y));
        case Kind::block_factor: {
            std::size_t latent[16];
            std::size_t nw = stencil_.size();
            if (nw > 16) throw std::invalid_argument("FieldGenerator: stencil too large");
            for (std::size_t w = 0; w < nw; ++w) {
                Vec2 site = j + stencil_[w];
                latent[w] = sample_from(latent_probs_, latent_cdf_,
                                        site_hash(seed_, site.x, site.y));
            }
            return apply_factor(std::span<const std::size_t>(latent, nw));
        }
        case Kind::phase_checkerboard: {
            std::int64_t v = (j.x + j.y + phase()) % period_;
            if (v < 0) v += period_;
            return static_cast<std::size_t>(v);
        }
    }
    return 0;
}

FieldGenerator FieldGenerator::reseeded(std::uint64_t seed) const {
    FieldGenerator g = *this;
    g.seed_ = seed;
    return g;
}

std::string FieldGenerator::describe() const {
    switch (kind_) {
        case Kind::iid:
            return "iid(k=" + std::to_string(alphabet_.size()) + ")";
        case Kind::block_factor:
            return "block_factor(" + factor_name_ + ")";
        case Kind::phase_checkerboard:
            return "checkerboard(period=" + std::to_string(period_) + ")";
    }
    return {};
}

}  // namespace skewlab
