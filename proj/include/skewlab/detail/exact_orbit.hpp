#pragma once

#include <cstdint>
#include <numeric>

#include "skewlab/circle.hpp"

namespace skewlab::detail {

// Exact rotation orbit on the stable denominator L = lcm(den(t), q): the
// point after i steps is r_i / L with r_{i+1} = (r_i + s) mod L, s = p*L/q.
// Floor reads [lambda*dz + t_i] become integer divisions (r_i + dz*s) / L.
struct ExactOrbit {
    std::int64_t L;
    std::int64_t r;
    std::int64_t s;

    // r + m*s must stay in int64; L <= 2^57 leaves room for small window
    // offsets m as well.
    static bool fits(const CirclePoint& t, const Slope& lambda) {
        __int128 b = t.ratio().den();
        __int128 q = lambda.q();
        __int128 l = b / std::gcd(t.ratio().den(), lambda.q()) * q;
        return l <= (static_cast<__int128>(1) << 57);
    }

    ExactOrbit(const CirclePoint& t, const Slope& lambda) {
        std::int64_t b = t.ratio().den();
        std::int64_t q = lambda.q();
        L = std::lcm(b, q);
        r = t.ratio().num() * (L / b);
        s = lambda.p() * (L / q);
    }

    // [lambda*dz + t_i] for the current point
    std::int64_t window_floor(std::int64_t dz) const { return (r + dz * s) / L; }

    // advance one step, returning [t_i + lambda] (the staircase increment)
    std::int64_t step() {
        r += s;
        if (r >= L) {
            r -= L;
            return 1;
        }
        return 0;
    }

    Rational point() const { return Rational(r, L); }
};

}  // namespace skewlab::detail
