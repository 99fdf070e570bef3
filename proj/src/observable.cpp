#include "skewlab/observable.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace skewlab {

FTable::FTable(std::size_t alphabet_size, std::size_t m, std::vector<Rational> values,
               std::string name)
    : k_(alphabet_size), m_(m), values_(std::move(values)), name_(std::move(name)) {
    std::size_t expect = 1;
    for (std::size_t i = 0; i < m_; ++i) expect *= k_;
    if (values_.size() != expect)
        throw std::invalid_argument("FTable: expected " + std::to_string(expect) + " values");
    bound_ = 0.0;
    common_den_ = 1;
    for (const Rational& v : values_) {
        bound_ = std::max(bound_, std::fabs(v.to_double()));
        common_den_ = std::lcm(common_den_, v.den());
    }
    scaled_num_.reserve(values_.size());
    for (const Rational& v : values_)
        scaled_num_.push_back(v.num() * (common_den_ / v.den()));
}

FTable FTable::constant(const Alphabet& a, std::size_t m, Rational c) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < m; ++i) n *= a.size();
    return FTable(a.size(), m, std::vector<Rational>(n, c), "constant(" + c.str() + ")");
}

FTable FTable::identity(const Alphabet& a) {
    std::vector<Rational> v(a.values().begin(), a.values().end());
    return FTable(a.size(), 1, std::move(v), "identity");
}

FTable FTable::product(const Alphabet& a, std::size_t m) {
    std::size_t k = a.size();
    std::size_t n = 1;
    for (std::size_t i = 0; i < m; ++i) n *= k;
    std::vector<Rational> v(n);
    std::vector<std::size_t> syms(m);
    for (std::size_t r = 0; r < n; ++r) {
        MarginalTable::unrank(r, k, syms);
        Rational p(1);
        for (std::size_t s : syms) p *= a.value(s);
        v[r] = p;
    }
    return FTable(k, m, std::move(v), "product");
}

FTable FTable::all_equal(const Alphabet& a, std::size_t m) {
    std::size_t k = a.size();
    std::size_t n = 1;
    for (std::size_t i = 0; i < m; ++i) n *= k;
    std::vector<Rational> v(n, Rational(0));
    std::vector<std::size_t> syms(m);
    for (std::size_t r = 0; r < n; ++r) {
        MarginalTable::unrank(r, k, syms);
        bool eq = true;
        for (std::size_t s : syms) eq = eq && (s == syms[0]);
        if (eq) v[r] = Rational(1);
    }
    return FTable(k, m, std::move(v), "all_equal");
}

WindowObservable WindowObservable::staircase(FTable f) {
    return WindowObservable(ShapeRule::staircase, {}, std::move(f));
}

WindowObservable WindowObservable::fixed(std::vector<Vec2> window, FTable f) {
    if (window.size() != f.m())
        throw std::invalid_argument("WindowObservable: window size must match f's arity");
    return WindowObservable(ShapeRule::fixed, std::move(window), std::move(f));
}

const std::vector<Vec2>& WindowObservable::fixed_window() const {
    if (rule_ != ShapeRule::fixed)
        throw std::logic_error("WindowObservable: fixed_window() on staircase observable");
    return window_;
}

}  // namespace skewlab
