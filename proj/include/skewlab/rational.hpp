#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skewlab {

/// Exact rational arithmetic on 64-bit numerator/denominator.
///
/// Canonical form is maintained at all times: den > 0 and gcd(|num|, den) = 1.
/// Intermediate products are carried in 128-bit integers; a result that does
/// not fit back into int64 after reduction throws std::overflow_error rather
/// than silently wrapping.
class Rational {
public:
    using int128 = __int128;

    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}

    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        reduce_from(n, d);
    }

    static Rational from_int128(int128 n, int128 d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        Rational r;
        r.reduce_from128(n, d);
        return r;
    }

    /// Parses "p/q", "-3", or a plain decimal like "0.25" (read exactly as
    /// digits over a power of ten).
    static Rational parse(std::string_view s);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    bool is_integer() const { return den_ == 1; }

    std::int64_t floor() const {
        return floor_div(num_, den_);
    }

    /// Fractional part in [0,1).
    Rational frac() const {
        std::int64_t f = floor();
        return Rational(num_ - f * den_, den_);
    }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_int128(static_cast<int128>(a.num_) * b.den_ +
                               static_cast<int128>(b.num_) * a.den_,
                           static_cast<int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_int128(static_cast<int128>(a.num_) * b.den_ -
                               static_cast<int128>(b.num_) * a.den_,
                           static_cast<int128>(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_int128(static_cast<int128>(a.num_) * b.num_,
                           static_cast<int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return from_int128(static_cast<int128>(a.num_) * b.den_,
                           static_cast<int128>(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        // canonical form makes field-wise comparison sound
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<int128>(a.num_) * b.den_ < static_cast<int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

    static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    }

private:
    void reduce_from(std::int64_t n, std::int64_t d) {
        if (d < 0) { n = -n; d = -d; }
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }

    void reduce_from128(int128 n, int128 d) {
        if (d < 0) { n = -n; d = -d; }
        int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr int128 lo = std::numeric_limits<std::int64_t>::min();
        constexpr int128 hi = std::numeric_limits<std::int64_t>::max();
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rational: value exceeds 64-bit range");
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
    }

    static int128 gcd128(int128 a, int128 b) {
        while (b != 0) {
            int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rational Rational::parse(std::string_view s) {
    auto fail = [&] { throw std::invalid_argument("Rational: cannot parse '" + std::string(s) + "'"); };
    if (s.empty()) fail();
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        std::size_t pos = 0;
        std::int64_t p = std::stoll(std::string(s.substr(0, slash)), &pos);
        if (pos != slash) fail();
        std::int64_t q = std::stoll(std::string(s.substr(slash + 1)), &pos);
        if (pos != s.size() - slash - 1) fail();
        return Rational(p, q);
    }
    auto dot = s.find('.');
    if (dot != std::string_view::npos) {
        std::string digits(s);
        digits.erase(dot, 1);
        std::size_t pos = 0;
        std::int64_t n = std::stoll(digits, &pos);
        if (pos != digits.size()) fail();
        std::int64_t d = 1;
        for (std::size_t i = dot + 1; i < s.size(); ++i) {
            if (d > std::numeric_limits<std::int64_t>::max() / 10)
                throw std::overflow_error("Rational: decimal too long");
            d *= 10;
        }
        return Rational(n, d);
    }
    std::size_t pos = 0;
    std::int64_t n = std::stoll(std::string(s), &pos);
    if (pos != s.size()) fail();
    return Rational(n);
}

}  // namespace skewlab
