#include "skewlab/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "skewlab/errors.hpp"

namespace skewlab {

MarginalTable::MarginalTable(std::vector<Vec2> shape, std::size_t alphabet_size,
                             std::vector<Rational> probs, bool exact)
    : shape_(std::move(shape)), k_(alphabet_size), probs_(std::move(probs)), exact_(exact) {
    Rational sum(0);
    for (const Rational& p : probs_) sum += p;
    if (exact_) {
        if (sum != Rational(1))
            throw std::logic_error("MarginalTable: exact probabilities must sum to 1");
    } else if (std::fabs(sum.to_double() - 1.0) > 1e-12) {
        throw std::logic_error("MarginalTable: probabilities must sum to 1 within 1e-12");
    }
}

Rational MarginalTable::integrate(std::span<const Rational> f_values) const {
    if (f_values.size() != probs_.size())
        throw std::invalid_argument("MarginalTable: observable table size mismatch");
    Rational acc(0);
    for (std::size_t r = 0; r < probs_.size(); ++r)
        if (probs_[r].num() != 0) acc += f_values[r] * probs_[r];
    return acc;
}

std::size_t MarginalTable::rank_of(std::span<const std::size_t> symbols, std::size_t k) {
    std::size_t r = 0;
    for (std::size_t s : symbols) r = r * k + s;
    return r;
}

void MarginalTable::unrank(std::size_t rank, std::size_t k, std::span<std::size_t> out) {
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = rank % k;
        rank /= k;
    }
}

namespace {

std::vector<Vec2> canonicalize(std::span<const Vec2> window) {
    if (window.empty()) throw std::invalid_argument("marginal: empty window");
    std::vector<Vec2> shape(window.begin(), window.end());
    Vec2 base = shape.front();
    for (Vec2& p : shape) p = p - base;
    for (std::size_t i = 0; i < shape.size(); ++i)
        for (std::size_t j = i + 1; j < shape.size(); ++j)
            if (shape[i] == shape[j])
                throw std::invalid_argument("marginal: window sites must be distinct");
    return shape;
}

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > limit / base) throw budget_error("enumeration budget exceeded");
        r *= base;
    }
    return r;
}

MarginalTable enumerate_iid(const FieldGenerator& gen, std::vector<Vec2> shape) {
    std::size_t k = gen.alphabet().size();
    std::size_t m = shape.size();
    std::size_t cells = checked_pow(k, m, kEnumerationBudget);
    std::vector<Rational> probs(cells);
    std::vector<std::size_t> syms(m);
    for (std::size_t r = 0; r < cells; ++r) {
        MarginalTable::unrank(r, k, syms);
        Rational p(1);
        for (std::size_t s : syms) p *= gen.site_probs()[s];
        probs[r] = p;
    }
    return MarginalTable(std::move(shape), k, std::move(probs), true);
}

MarginalTable enumerate_block_factor(const FieldGenerator& gen, std::vector<Vec2> shape) {
    std::size_t k = gen.alphabet().size();
    std::size_t m = shape.size();
    std::size_t kl = gen.latent_alphabet().size();

    // latent support: union of u + W over window sites u
    std::vector<Vec2> support;
    for (Vec2 u : shape)
        for (Vec2 w : gen.stencil()) support.push_back(u + w);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (support.size() > kLatentSupportBudget)
        throw budget_error("marginal_exact: latent support exceeds " +
                           std::to_string(kLatentSupportBudget) + " sites");
    std::size_t assignments = checked_pow(kl, support.size(), kEnumerationBudget);
    std::size_t cells = checked_pow(k, m, kEnumerationBudget);

    // common denominator for all latent weights
    std::int64_t common_den = 1;
    for (const Rational& p : gen.latent_probs()) common_den = std::lcm(common_den, p.den());
    std::vector<std::int64_t> scaled_num(kl);
    for (std::size_t s = 0; s < kl; ++s)
        scaled_num[s] = gen.latent_probs()[s].num() * (common_den / gen.latent_probs()[s].den());

    using u128 = unsigned __int128;
    u128 total_den = 1;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (total_den > (u128(1) << 120) / static_cast<u128>(common_den))
            throw budget_error("marginal_exact: latent weight denominator overflow");
        total_den *= static_cast<u128>(common_den);
    }

    // map each window site's latent reads into support indices
    std::vector<std::vector<std::size_t>> reads(m);
    for (std::size_t ui = 0; ui < m; ++ui)
        for (Vec2 w : gen.stencil()) {
            Vec2 site = shape[ui] + w;
            std::size_t idx = static_cast<std::size_t>(
                std::lower_bound(support.begin(), support.end(), site) - support.begin());
            reads[ui].push_back(idx);
        }

    std::vector<u128> acc(cells, 0);
    std::vector<std::size_t> latent(support.size(), 0);
    std::vector<std::size_t> window_syms(m);
    std::vector<std::size_t> latent_read;
    for (std::size_t a = 0; a < assignments; ++a) {
        // decode assignment a in base kl over the support
        std::size_t rest = a;
        u128 weight = 1;
        bool zero = false;
        for (std::size_t i = support.size(); i-- > 0;) {
            latent[i] = rest % kl;
            rest /= kl;
            std::int64_t w = scaled_num[latent[i]];
            if (w == 0) { zero = true; }
            weight *= static_cast<u128>(w);
        }
        if (zero) continue;
        for (std::size_t ui = 0; ui < m; ++ui) {
            latent_read.clear();
            for (std::size_t idx : reads[ui]) latent_read.push_back(latent[idx]);
            window_syms[ui] = gen.apply_factor(latent_read);
        }
        acc[MarginalTable::rank_of(window_syms, k)] += weight;
    }

    std::vector<Rational> probs(cells);
    for (std::size_t r = 0; r < cells; ++r) {
        u128 num = acc[r];
        u128 den = total_den;
        // reduce in 128 bits, then require a 64-bit result
        u128 a = num, b = den;
        while (b != 0) { u128 t = a % b; a = b; b = t; }
        if (a != 0) { num /= a; den /= a; }
        if (den > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
            throw budget_error("marginal_exact: reduced probability exceeds 64-bit range");
        probs[r] = Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
    }
    return MarginalTable(std::move(shape), k, std::move(probs), true);
}

MarginalTable enumerate_checkerboard(const FieldGenerator& gen, std::vector<Vec2> shape) {
    std::size_t k = gen.alphabet().size();
    std::size_t m = shape.size();
    std::int64_t p = gen.period();
    std::size_t cells = checked_pow(k, m, kEnumerationBudget);
    std::vector<Rational> probs(cells, Rational(0));
    std::vector<std::size_t> syms(m);
    for (std::int64_t phi = 0; phi < p; ++phi) {
        for (std::size_t i = 0; i < m; ++i) {
            std::int64_t v = (shape[i].x + shape[i].y + phi) % p;
            if (v < 0) v += p;
            syms[i] = static_cast<std::size_t>(v);
        }
        probs[MarginalTable::rank_of(syms, k)] += Rational(1, p);
    }
    return MarginalTable(std::move(shape), k, std::move(probs), true);
}

}  // namespace

MarginalTable marginal_exact(const FieldGenerator& gen, std::span<const Vec2> window) {
    std::vector<Vec2> shape = canonicalize(window);
    switch (gen.kind()) {
        case FieldGenerator::Kind::iid:
            return enumerate_iid(gen, std::move(shape));
        case FieldGenerator::Kind::block_factor:
            return enumerate_block_factor(gen, std::move(shape));
        case FieldGenerator::Kind::phase_checkerboard:
            return enumerate_checkerboard(gen, std::move(shape));
    }
    throw std::logic_error("marginal_exact: unknown generator kind");
}

MarginalTable marginal_mc(const FieldGenerator& gen, std::span<const Vec2> window,
                          std::uint64_t samples, std::uint64_t stream_seed) {
    if (samples == 0) throw std::invalid_argument("marginal_mc: samples must be positive");
    std::vector<Vec2> shape = canonicalize(window);
    std::size_t k = gen.alphabet().size();
    std::size_t cells = checked_pow(k, shape.size(), kEnumerationBudget);
    std::vector<std::int64_t> counts(cells, 0);
    std::vector<std::size_t> syms(shape.size());
    for (std::uint64_t i = 0; i < samples; ++i) {
        FieldGenerator replicate = gen.reseeded(split_seed(stream_seed, i));
        for (std::size_t u = 0; u < shape.size(); ++u)
            syms[u] = replicate.sample_site(shape[u]);
        ++counts[MarginalTable::rank_of(syms, k)];
    }
    std::vector<Rational> probs(cells);
    for (std::size_t r = 0; r < cells; ++r)
        probs[r] = Rational(counts[r], static_cast<std::int64_t>(samples));
    return MarginalTable(std::move(shape), k, std::move(probs), false);
}

}  // namespace skewlab
