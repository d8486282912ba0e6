#pragma once

#include <span>
#include <vector>

#include "sdg/geometry.hpp"

namespace sdg {

/// Nodal P^k basis on the reference triangle (0,0), (1,0), (0,1).
///
/// Sub-triangles map nu to (0,0) and their primal edge (a, b) to the side
/// (1,0)-(0,1). The first k+1 local nodes lie on that side, ordered from a to b;
/// the remaining nodes follow.
class LagrangeTriangle {
 public:
  explicit LagrangeTriangle(int order);

  int order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_node_count() const { return static_cast<std::size_t>(order_) + 1; }
  const std::vector<Point>& nodes() const { return nodes_; }

  void eval(Point xi, std::span<double> values) const;
  void eval_grad(Point xi, std::span<Vec2> grads) const;

 private:
  int order_;
  std::vector<Point> nodes_;
  std::vector<std::pair<int, int>> monomials_;
  std::vector<double> coeffs_;  // coeffs_[m * n + i]: weight of monomial m in basis function i
};

/// Nodal P^k basis on [0, 1] with nodes t_i = i / k.
class LagrangeSegment {
 public:
  explicit LagrangeSegment(int order);

  int order() const { return order_; }
  std::size_t size() const { return static_cast<std::size_t>(order_) + 1; }
  double node(std::size_t i) const { return static_cast<double>(i) / order_; }

  void eval(double t, std::span<double> values) const;
  void eval_deriv(double t, std::span<double> derivs) const;
  void eval_second(double t, std::span<double> second) const;

 private:
  int order_;
};

/// Affine map x = origin + J xi of a sub-triangle (nu, a, b).
struct TriangleMap {
  Point origin;
  double j00 = 0.0, j01 = 0.0, j10 = 0.0, j11 = 0.0;
  double det = 0.0;

  TriangleMap(Point nu, Point a, Point b)
      : origin(nu), j00(a.x - nu.x), j01(b.x - nu.x), j10(a.y - nu.y), j11(b.y - nu.y),
        det(j00 * j11 - j01 * j10) {}

  Point map(Point xi) const { return {origin.x + j00 * xi.x + j01 * xi.y, origin.y + j10 * xi.x + j11 * xi.y}; }
  Point to_reference(Point x) const {
    const double dx = x.x - origin.x;
    const double dy = x.y - origin.y;
    return {(j11 * dx - j01 * dy) / det, (-j10 * dx + j00 * dy) / det};
  }
  /// Physical gradient from a reference gradient (J^{-T} g).
  Vec2 grad(Vec2 g) const { return {(j11 * g.x - j10 * g.y) / det, (-j01 * g.x + j00 * g.y) / det}; }
};

}  // namespace sdg
