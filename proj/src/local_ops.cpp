#include "local_ops.hpp"

#include <cmath>
#include <string>

#include "sdg/error.hpp"

namespace sdg::detail {

RefTable tabulate(const LagrangeTriangle& basis, int degree) {
  RefTable t;
  t.rule = triangle_quadrature(degree);
  t.nl = basis.size();
  t.nq = t.rule.size();
  t.phi.resize(t.nl * t.nq);
  t.dxi.resize(t.nl * t.nq);
  t.deta.resize(t.nl * t.nq);
  std::vector<double> v(t.nl);
  std::vector<Vec2> g(t.nl);
  for (std::size_t q = 0; q < t.nq; ++q) {
    basis.eval(t.rule.points[q], v);
    basis.eval_grad(t.rule.points[q], g);
    for (std::size_t i = 0; i < t.nl; ++i) {
      t.phi[i * t.nq + q] = v[i];
      t.dxi[i * t.nq + q] = g[i].x;
      t.deta[i * t.nq + q] = g[i].y;
    }
  }
  return t;
}

TriangleMap triangle_map(const PolygonalMesh& mesh, std::size_t tri) {
  const SubTriangle& t = mesh.triangles[tri];
  return TriangleMap(mesh.points[t.pts[0]], mesh.points[t.pts[1]], mesh.points[t.pts[2]]);
}

void fill_triangle(const PolygonalMesh& mesh, std::size_t tri, const RefTable& table, TriData& out) {
  const TriangleMap map = triangle_map(mesh, tri);
  const std::size_t nq = table.nq;
  const double jac = std::abs(map.det);
  out.x.resize(nq);
  out.w.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    out.x[q] = map.map(table.rule.points[q]);
    out.w[q] = table.rule.weights[q] * jac;
  }
  out.gx.resize(table.nl * nq);
  out.gy.resize(table.nl * nq);
  for (std::size_t k = 0; k < table.nl * nq; ++k) {
    const Vec2 g = map.grad({table.dxi[k], table.deta[k]});
    out.gx[k] = g.x;
    out.gy[k] = g.y;
  }
}

Eigen::MatrixXd basis_at(const LagrangeTriangle& basis, const TriangleMap& map, std::span<const Point> xs) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(basis.size()));
  std::vector<double> v(basis.size());
  for (std::size_t q = 0; q < xs.size(); ++q) {
    basis.eval(map.to_reference(xs[q]), v);
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(i)) = v[i];
  }
  return out;
}

Eigen::MatrixXd flux_normal_at(const LagrangeTriangle& basis, const PolygonalMesh& mesh, const DofMapV& V,
                               std::size_t tri, std::span<const Point> xs, Vec2 n) {
  const SubTriangle& t = mesh.triangles[tri];
  const auto el = static_cast<std::size_t>(t.element);
  const auto j = tri - static_cast<std::size_t>(mesh.elements[el].first_triangle);
  const auto nl = static_cast<Eigen::Index>(basis.size());
  const Eigen::MatrixXd phi = basis_at(basis, triangle_map(mesh, tri), xs);
  Eigen::MatrixXd full(phi.rows(), 2 * nl);
  full.leftCols(nl) = n.x * phi;
  full.rightCols(nl) = n.y * phi;
  return full * V.basis[el].middleRows(static_cast<Eigen::Index>(j) * 2 * nl, 2 * nl);
}

std::vector<Point> edge_points(Point a, Point b, const EdgeQuadrature& rule) {
  std::vector<Point> xs(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) xs[q] = a + rule.points[q] * (b - a);
  return xs;
}

Tensor2 element_permeability(const ProblemSpec& problem, const PolygonalMesh& mesh, std::size_t element) {
  const Element& E = mesh.elements[element];
  const Tensor2 K = problem.permeability_at(E.center, E.side);
  if (!K.is_spd()) {
    throw Error(ErrorCode::SingularK, "permeability of element " + std::to_string(element) + " is not SPD");
  }
  return K;
}

}  // namespace sdg::detail
