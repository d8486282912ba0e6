#pragma once

// Per-triangle tabulations shared by assembly, estimator and post-processing.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sdg/basis.hpp"
#include "sdg/mesh.hpp"
#include "sdg/problem.hpp"
#include "sdg/quadrature.hpp"
#include "sdg/spaces.hpp"

namespace sdg::detail {

/// Basis values and reference derivatives at the points of a triangle rule,
/// function-major (index i * nq + q).
struct RefTable {
  std::size_t nl = 0;
  std::size_t nq = 0;
  QuadratureRule rule;
  std::vector<double> phi;
  std::vector<double> dxi;
  std::vector<double> deta;
};

RefTable tabulate(const LagrangeTriangle& basis, int degree);

/// Physical quadrature data of one sub-triangle.
struct TriData {
  std::vector<Point> x;
  std::vector<double> w;   // physical weights
  std::vector<double> gx;  // physical basis gradients, function-major
  std::vector<double> gy;
};

TriangleMap triangle_map(const PolygonalMesh& mesh, std::size_t tri);
void fill_triangle(const PolygonalMesh& mesh, std::size_t tri, const RefTable& table, TriData& out);

/// nq x nl matrix of the S_h basis of sub-triangle tri at physical points.
Eigen::MatrixXd basis_at(const LagrangeTriangle& basis, const TriangleMap& map, std::span<const Point> xs);

/// nq x m matrix of v . n for the m V_h basis fields of the element owning tri,
/// restricted to tri and evaluated at physical points.
Eigen::MatrixXd flux_normal_at(const LagrangeTriangle& basis, const PolygonalMesh& mesh, const DofMapV& V,
                               std::size_t tri, std::span<const Point> xs, Vec2 n);

/// Points x_q = a + t_q (b - a) of an edge rule.
std::vector<Point> edge_points(Point a, Point b, const EdgeQuadrature& rule);

/// K on an element; throws SingularK when K is not SPD.
Tensor2 element_permeability(const ProblemSpec& problem, const PolygonalMesh& mesh, std::size_t element);

}  // namespace sdg::detail
