#include "sdg/spaces.hpp"

#include <string>

#include "sdg/error.hpp"
#include "sdg/quadrature.hpp"

namespace sdg {

Point s_node_point(const PolygonalMesh& mesh, const LagrangeTriangle& basis, std::size_t tri, std::size_t i) {
  const SubTriangle& t = mesh.triangles[tri];
  const TriangleMap map(mesh.points[t.pts[0]], mesh.points[t.pts[1]], mesh.points[t.pts[2]]);
  return map.map(basis.nodes()[i]);
}

DofMapS build_S_h(const PolygonalMesh& mesh, SpaceConfig config, const BulkBoundary* boundary) {
  const LagrangeTriangle basis(config.order);
  const std::size_t k = static_cast<std::size_t>(config.order);
  DofMapS S;
  S.order = config.order;
  S.n_local = basis.size();
  S.l2g.assign(mesh.triangles.size() * S.n_local, -1);

  // Interior primal-edge nodes are shared; key = edge * (k + 1) + position along pts[0] -> pts[1].
  std::vector<int> shared(mesh.edges.size() * (k + 1), -1);
  int next = 0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const SubTriangle& tri = mesh.triangles[t];
    const Edge& e = mesh.edges[static_cast<std::size_t>(tri.primal_edge)];
    const bool same_dir = e.pts[0] == tri.pts[1];
    for (std::size_t j = 0; j <= k; ++j) {
      int& slot = S.l2g[t * S.n_local + j];
      if (e.kind == EdgeKind::Interior) {
        const std::size_t pos = same_dir ? j : k - j;
        int& key = shared[static_cast<std::size_t>(tri.primal_edge) * (k + 1) + pos];
        if (key < 0) key = next++;
        slot = key;
      } else {
        slot = next++;
      }
    }
    for (std::size_t i = k + 1; i < S.n_local; ++i) S.l2g[t * S.n_local + i] = next++;
  }
  S.n_all = static_cast<std::size_t>(next);
  S.dirichlet.assign(S.n_all, 0);
  S.dirichlet_value.assign(S.n_all, 0.0);
  S.on_boundary.assign(S.n_all, 0);

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const SubTriangle& tri = mesh.triangles[t];
    const Edge& e = mesh.edges[static_cast<std::size_t>(tri.primal_edge)];
    if (e.kind != EdgeKind::Boundary) continue;
    const bool is_dirichlet =
        boundary != nullptr && boundary->kind_at(mesh.edge_midpoint(tri.primal_edge)) == BoundaryKind::Dirichlet;
    for (std::size_t j = 0; j <= k; ++j) {
      const auto dof = static_cast<std::size_t>(S.l2g[t * S.n_local + j]);
      S.on_boundary[dof] = 1;
      if (is_dirichlet) {
        S.dirichlet[dof] = 1;
        S.dirichlet_value[dof] = boundary->pressure_at(s_node_point(mesh, basis, t, j), tri.side);
      }
    }
  }

  S.free_index.assign(S.n_all, -1);
  int nfree = 0;
  for (std::size_t d = 0; d < S.n_all; ++d) {
    if (!S.dirichlet[d]) S.free_index[d] = nfree++;
  }
  S.n_free = static_cast<std::size_t>(nfree);
  return S;
}

DofMapV build_V_h(const PolygonalMesh& mesh, SpaceConfig config) {
  const LagrangeTriangle basis(config.order);
  const std::size_t k = static_cast<std::size_t>(config.order);
  const std::size_t nl = basis.size();
  const EdgeQuadrature gauss = gauss_legendre(config.order + 1);

  DofMapV V;
  V.order = config.order;
  V.n_local = nl;
  V.offset.assign(mesh.elements.size() + 1, 0);
  V.basis.resize(mesh.elements.size());
  std::vector<double> phi(nl);

  for (std::size_t el = 0; el < mesh.elements.size(); ++el) {
    const Element& E = mesh.elements[el];
    const std::size_t n = E.vertices.size();
    const auto first = static_cast<std::size_t>(E.first_triangle);
    const auto rows = static_cast<Eigen::Index>(n * (k + 1));
    const auto cols = static_cast<Eigen::Index>(n * 2 * nl);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(rows, cols);
    for (std::size_t j = 0; j < n; ++j) {
      const int d = mesh.triangles[first + j].dual_edges[1];
      const Edge& e = mesh.edges[static_cast<std::size_t>(d)];
      const Point p0 = mesh.points[e.pts[0]];
      const Point p1 = mesh.points[e.pts[1]];
      for (std::size_t q = 0; q < gauss.size(); ++q) {
        const Point x = p0 + gauss.points[q] * (p1 - p0);
        const auto row = static_cast<Eigen::Index>(j * (k + 1) + q);
        for (int side = 0; side < 2; ++side) {
          const auto t = static_cast<std::size_t>(e.tri[static_cast<std::size_t>(side)]);
          const SubTriangle& tri = mesh.triangles[t];
          const TriangleMap map(mesh.points[tri.pts[0]], mesh.points[tri.pts[1]], mesh.points[tri.pts[2]]);
          basis.eval(map.to_reference(x), phi);
          const double sign = side == 0 ? 1.0 : -1.0;
          const std::size_t base = (t - first) * 2 * nl;
          for (std::size_t i = 0; i < nl; ++i) {
            C(row, static_cast<Eigen::Index>(base + i)) += sign * phi[i] * e.normal.x;
            C(row, static_cast<Eigen::Index>(base + nl + i)) += sign * phi[i] * e.normal.y;
          }
        }
      }
    }
    // Null space of C: trailing columns of Q in C^T = Q R.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(C.transpose());
    qr.setThreshold(1e-12);
    if (qr.rank() != rows) {
      throw Error(ErrorCode::NonConformingMesh,
                  "normal-continuity constraints of element " + std::to_string(el) + " are rank deficient");
    }
    const Eigen::MatrixXd Q = qr.householderQ();
    V.basis[el] = Q.rightCols(cols - rows);
    V.offset[el + 1] = V.offset[el] + static_cast<std::size_t>(cols - rows);
  }
  V.n_dofs = V.offset.back();
  return V;
}

DofMapW build_W_h(const PolygonalMesh& mesh, SpaceConfig config, std::span<const std::array<TipCondition, 2>> tips) {
  if (config.order < 1) throw Error(ErrorCode::InvalidArgument, "polynomial order must be >= 1");
  const auto k = static_cast<std::size_t>(config.order);
  DofMapW W;
  W.order = config.order;
  W.edge_slot.assign(mesh.edges.size(), -1);
  int next = 0;
  for (const FractureMesh& fm : mesh.fracture_meshes) {
    const auto f = static_cast<std::size_t>(fm.fracture);
    const TipCondition start = f < tips.size() ? tips[f][0] : TipCondition{};
    const TipCondition end = f < tips.size() ? tips[f][1] : TipCondition{};
    int vertex_dof = next++;
    W.dirichlet.push_back(start.kind == BoundaryKind::Dirichlet);
    W.dirichlet_value.push_back(start.kind == BoundaryKind::Dirichlet ? start.value : 0.0);
    for (std::size_t pos = 0; pos < fm.edges.size(); ++pos) {
      const auto slot = static_cast<int>(W.slot_edge.size());
      W.slot_edge.push_back(fm.edges[pos]);
      W.slot_fracture.push_back(fm.fracture);
      W.slot_position.push_back(static_cast<int>(pos));
      W.edge_slot[static_cast<std::size_t>(fm.edges[pos])] = slot;
      W.l2g.push_back(vertex_dof);
      for (std::size_t i = 1; i < k; ++i) {
        W.l2g.push_back(next++);
        W.dirichlet.push_back(0);
        W.dirichlet_value.push_back(0.0);
      }
      vertex_dof = next++;
      const bool last = pos + 1 == fm.edges.size();
      const bool fixed = last && end.kind == BoundaryKind::Dirichlet;
      W.dirichlet.push_back(fixed);
      W.dirichlet_value.push_back(fixed ? end.value : 0.0);
      W.l2g.push_back(vertex_dof);
    }
  }
  W.n_all = static_cast<std::size_t>(next);
  W.free_index.assign(W.n_all, -1);
  int nfree = 0;
  for (std::size_t d = 0; d < W.n_all; ++d) {
    if (!W.dirichlet[d]) W.free_index[d] = nfree++;
  }
  W.n_free = static_cast<std::size_t>(nfree);
  return W;
}

JumpAverage jump_and_average(const Edge& edge, double q1, double q2) {
  if (edge.tri[0] < 0 || (edge.normal.x == 0.0 && edge.normal.y == 0.0)) {
    throw Error(ErrorCode::OrientationUnset, "edge has no normal/side assignment");
  }
  if (edge.kind == EdgeKind::Boundary) return {q1, q1};
  return {q1 - q2, 0.5 * (q1 + q2)};
}

}  // namespace sdg
