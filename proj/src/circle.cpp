#include "skewlab/circle.hpp"

#include <cmath>

namespace skewlab {

FloorValue floor_checked(double x) {
    double f = std::floor(x);
    double d = x - f;
    bool near = d < kBoundaryTol || d > 1.0 - kBoundaryTol;
    return {static_cast<std::int64_t>(f), near};
}

Slope Slope::rational(std::int64_t p, std::int64_t q) {
    Rational r = Rational(p, q).frac();
    if (r.num() == 0)
        throw std::invalid_argument("Slope: rational slope reduces to 0 mod 1 (degenerate)");
    Slope s;
    s.rational_ = true;
    s.ratio_ = r;
    s.value_ = r.to_double();
    return s;
}

Slope Slope::irrational(double value) {
    if (!(value > 0.0 && value < 1.0))
        throw std::invalid_argument("Slope: irrational slope must lie in (0,1)");
    Slope s;
    s.rational_ = false;
    s.value_ = value;
    return s;
}

const Rational& Slope::ratio() const {
    if (!rational_) throw std::logic_error("Slope: ratio() on irrational slope");
    return ratio_;
}

std::string Slope::str() const {
    return rational_ ? ratio_.str() : std::to_string(value_);
}

std::optional<std::int64_t> period(const Slope& lambda) {
    if (!lambda.is_rational()) return std::nullopt;
    return lambda.q();
}

CirclePoint CirclePoint::exact(const Rational& r) {
    CirclePoint t;
    t.exact_ = true;
    t.ratio_ = r.frac();
    t.value_ = t.ratio_.to_double();
    return t;
}

CirclePoint CirclePoint::approx(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("CirclePoint: non-finite value");
    double f = v - std::floor(v);
    if (f >= 1.0) f = 0.0;  // frac of values just below an integer can round up
    CirclePoint t;
    t.exact_ = false;
    t.value_ = f;
    return t;
}

const Rational& CirclePoint::ratio() const {
    if (!exact_) throw std::logic_error("CirclePoint: ratio() on approx point");
    return ratio_;
}

std::string CirclePoint::str() const {
    return exact_ ? ratio_.str() : std::to_string(value_);
}

double circle_distance(double s, double t) {
    double d = std::fabs(s - t);
    return d <= 0.5 ? d : 1.0 - d;
}

CirclePoint rotate(const CirclePoint& t, const Slope& lambda) {
    if (t.is_exact() && lambda.is_rational())
        return CirclePoint::exact(t.ratio() + lambda.ratio());
    // compensated step: the rounding error of each addition is carried in
    // the residual, so iterated rotation does not accumulate drift
    double lam = lambda.value();
    double s = t.value() + lam;
    double bv = s - t.value();
    double e = (t.value() - (s - bv)) + (lam - bv);  // Knuth two-sum residual
    double r = t.residual_ + e;
    double hi = s + r;
    double lo = (s - hi) + r;
    if (hi >= 1.0) hi -= 1.0;  // exact (operands in [1,2))
    if (hi < 0.0) hi += 1.0;
    CirclePoint out = CirclePoint::approx(hi);
    out.residual_ = lo;
    return out;
}

namespace {

// frac(t + n*lambda) with the product n*lambda split error-free via fma and
// the residual carried through the final sum. Total rounding error is a few
// ulps independent of n.
double frac_closed_form(double t, double lambda, std::uint64_t n) {
    double dn = static_cast<double>(n);
    double hi = dn * lambda;
    double lo = std::fma(dn, lambda, -hi);
    double f = hi - std::floor(hi);  // exact: low-order bits of hi
    double s = f + t;
    double bv = s - f;
    double err = (f - (s - bv)) + (t - bv);  // Knuth two-sum residual
    double total = s + (lo + err);
    double out = total - std::floor(total);
    if (out >= 1.0) out = 0.0;
    if (out < 0.0) out += 1.0;
    return out;
}

}  // namespace

CirclePoint orbit_point(const CirclePoint& t, const Slope& lambda, std::uint64_t n) {
    if (t.is_exact() && lambda.is_rational()) {
        const Rational& lr = lambda.ratio();
        // t + n*p/q mod 1, in 128-bit and reduced once
        Rational::int128 num = static_cast<Rational::int128>(t.ratio().num()) * lr.den() +
                               static_cast<Rational::int128>(n) * lr.num() * t.ratio().den();
        Rational::int128 den = static_cast<Rational::int128>(t.ratio().den()) * lr.den();
        Rational::int128 m = num % den;
        if (m < 0) m += den;
        return CirclePoint::exact(Rational::from_int128(m, den));
    }
    if (n == 0) return CirclePoint::approx(t.value());
    return CirclePoint::approx(frac_closed_form(t.value(), lambda.value(), n));
}

double weyl_average(const std::function<double(double)>& g, const Slope& lambda,
                    const CirclePoint& t, std::uint64_t n) {
    if (lambda.is_rational())
        throw std::invalid_argument(
            "weyl_average: rational slope; use the periodic decomposition");
    if (n == 0) throw std::invalid_argument("weyl_average: n must be positive");
    // Neumaier-compensated running sum, fixed evaluation order.
    double sum = 0.0, comp = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        double x = g(orbit_point(t, lambda, i).value());
        double s = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - s) + x;
        else
            comp += (x - s) + sum;
        sum = s;
    }
    return (sum + comp) / static_cast<double>(n);
}

}  // namespace skewlab
