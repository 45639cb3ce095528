#pragma once

#include <cmath>

namespace bpl {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  Vec2& operator+=(const Vec2& o) { x1 += o.x1; x2 += o.x2; return *this; }
  Vec2& operator-=(const Vec2& o) { x1 -= o.x1; x2 -= o.x2; return *this; }
  Vec2& operator*=(double s) { x1 *= s; x2 *= s; return *this; }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(const Vec2& a) { return std::hypot(a.x1, a.x2); }

// Row-major 2×2 matrix; used for flow-map Jacobians and velocity gradients.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
  double det() const { return a11 * a22 - a12 * a21; }
  Vec2 operator*(const Vec2& v) const { return {a11 * v.x1 + a12 * v.x2, a21 * v.x1 + a22 * v.x2}; }
  Mat2 operator*(const Mat2& m) const {
    return {a11 * m.a11 + a12 * m.a21, a11 * m.a12 + a12 * m.a22, a21 * m.a11 + a22 * m.a21,
            a21 * m.a12 + a22 * m.a22};
  }
  Mat2 operator+(const Mat2& m) const { return {a11 + m.a11, a12 + m.a12, a21 + m.a21, a22 + m.a22}; }
  Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
};

}  // namespace bpl
