#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sdg/basis.hpp"
#include "sdg/mesh.hpp"
#include "sdg/problem.hpp"

namespace sdg {

struct SpaceConfig {
  int order = 1;
};

/// Dofs of the staggered pressure space S_h: P^k on each sub-triangle, single-valued
/// across interior primal edges, essential data on Dirichlet boundary edges.
struct DofMapS {
  int order = 1;
  std::size_t n_local = 0;
  std::size_t n_all = 0;
  std::size_t n_free = 0;
  std::vector<int> l2g;                  // triangle t, local i -> l2g[t * n_local + i]
  std::vector<char> dirichlet;           // per dof
  std::vector<double> dirichlet_value;   // per dof
  std::vector<char> on_boundary;         // node lies on an outer-boundary primal edge
  std::vector<int> free_index;           // per dof, -1 for Dirichlet dofs

  std::span<const int> local(std::size_t tri) const { return {l2g.data() + tri * n_local, n_local}; }
};

/// Dofs of the staggered flux space V_h. Each polygon carries an orthonormal basis of
/// the [P^k]^2 fields on its sub-triangles whose normal component is continuous across
/// every dual edge; V_h therefore never couples different polygons.
///
/// Full coefficient layout inside a polygon: sub-triangle j, component c, node i at
/// row j * 2 * n_local + c * n_local + i.
struct DofMapV {
  int order = 1;
  std::size_t n_local = 0;
  std::size_t n_dofs = 0;
  std::vector<std::size_t> offset;       // per element, plus one
  std::vector<Eigen::MatrixXd> basis;    // per element: full coefficients x local dofs

  std::size_t count(std::size_t element) const { return offset[element + 1] - offset[element]; }
};

/// Dofs of the fracture pressure space W_h: continuous P^k along each fracture polyline.
struct DofMapW {
  int order = 1;
  std::size_t n_all = 0;
  std::size_t n_free = 0;
  std::vector<int> edge_slot;            // per mesh edge: slot index or -1
  std::vector<int> slot_edge;            // per slot: mesh edge id
  std::vector<int> slot_fracture;        // per slot: fracture index
  std::vector<int> slot_position;        // per slot: position along the fracture mesh
  std::vector<int> l2g;                  // slot s, local i (t = i / k) -> l2g[s * (k + 1) + i]
  std::vector<char> dirichlet;
  std::vector<double> dirichlet_value;
  std::vector<int> free_index;

  std::span<const int> local(std::size_t slot) const {
    const auto n = static_cast<std::size_t>(order) + 1;
    return {l2g.data() + slot * n, n};
  }
};

DofMapS build_S_h(const PolygonalMesh& mesh, SpaceConfig config, const BulkBoundary* boundary = nullptr);
DofMapV build_V_h(const PolygonalMesh& mesh, SpaceConfig config);
DofMapW build_W_h(const PolygonalMesh& mesh, SpaceConfig config,
                  std::span<const std::array<TipCondition, 2>> tips = {});

struct JumpAverage {
  double jump = 0.0;
  double average = 0.0;
};

/// [q] = q1 - q2 and {q} = (q1 + q2) / 2 with side 1 the sub-triangle the edge normal
/// points away from; on boundary edges [q] = {q} = q1.
JumpAverage jump_and_average(const Edge& edge, double q1, double q2 = 0.0);

/// Reference-triangle coordinates of node i of the S_h basis mapped into sub-triangle t.
Point s_node_point(const PolygonalMesh& mesh, const LagrangeTriangle& basis, std::size_t tri, std::size_t i);

}  // namespace sdg
