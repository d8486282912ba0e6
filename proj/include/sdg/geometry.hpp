#pragma once

#include <cmath>

namespace sdg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Point midpoint(Point a, Point b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

// Vectors share the point representation; fluxes and normals use this alias.
using Vec2 = Point;

/// Symmetric 2x2 tensor [[xx, xy], [xy, yy]].
struct Tensor2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  static Tensor2 identity() { return {}; }
  static Tensor2 isotropic(double k) { return {k, 0.0, k}; }

  double det() const { return xx * yy - xy * xy; }
  bool is_spd() const { return xx > 0.0 && det() > 0.0; }
  Vec2 apply(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
  Tensor2 inverse() const {
    const double d = det();
    return {yy / d, -xy / d, xx / d};
  }
  Tensor2 scaled(double s) const { return {s * xx, s * xy, s * yy}; }
};

/// Signed area of triangle (a, b, c); positive when counter-clockwise.
inline double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

/// Distance from p to the closed segment [a, b].
inline double segment_distance(Point p, Point a, Point b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return distance(p, a + t * d);
}

}  // namespace sdg
