#pragma once

#include <cmath>
#include <utility>

namespace degel {

/// A point or vector in the plane.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

using Point = Vec2;

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct SymMat2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    static constexpr SymMat2 identity() { return {1.0, 0.0, 1.0}; }
    static constexpr SymMat2 diag(double d1, double d2) { return {d1, 0.0, d2}; }
    /// v v^T
    static constexpr SymMat2 outer(Vec2 v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

    constexpr SymMat2 operator+(const SymMat2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
    constexpr SymMat2 operator-(const SymMat2& o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }
    constexpr SymMat2 operator-() const { return {-a11, -a12, -a22}; }
    constexpr SymMat2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }
    constexpr bool operator==(const SymMat2&) const = default;

    constexpr double trace() const { return a11 + a22; }
    constexpr double det() const { return a11 * a22 - a12 * a12; }
    double frobenius() const { return std::sqrt(a11 * a11 + 2.0 * a12 * a12 + a22 * a22); }
    constexpr Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y}; }
    constexpr double quad(Vec2 v) const { return v.dot(apply(v)); }
    /// tr(A X) for symmetric A, X.
    constexpr double contract(const SymMat2& o) const { return a11 * o.a11 + 2.0 * a12 * o.a12 + a22 * o.a22; }

    /// Closed-form eigenvalues, first <= second.
    std::pair<double, double> eigenvalues() const {
        const double mean = 0.5 * (a11 + a22);
        const double radius = std::hypot(0.5 * (a11 - a22), a12);
        return {mean - radius, mean + radius};
    }
};

constexpr SymMat2 operator*(double s, const SymMat2& m) { return m * s; }

}  // namespace degel
