#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace skewlab {

/// A point or displacement of the planar lattice Z^2.
struct Vec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(std::int64_t s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }
    friend bool operator<(Vec2 a, Vec2 b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }

    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }

    std::int64_t max_norm() const {
        std::int64_t ax = x < 0 ? -x : x;
        std::int64_t ay = y < 0 ? -y : y;
        return ax > ay ? ax : ay;
    }

    std::string str() const {
        return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
    }
};

}  // namespace skewlab
