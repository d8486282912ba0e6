#pragma once

#include <array>
#include <span>
#include <vector>

#include "sdg/domain.hpp"
#include "sdg/geometry.hpp"

namespace sdg {

/// Edge families of the staggered construction.
enum class EdgeKind {
  Boundary,  // primal edge on the outer boundary (F_u \ F_u^0)
  Interior,  // interior primal edge off the fractures (F_u^0)
  Dual,      // edge from an interior point nu to a polygon vertex (F_p)
  Fracture,  // primal edge lying on a fracture (F_h^Gamma)
};

const char* to_string(EdgeKind kind);

/// Primal polygon S(nu). `corners` is the shape polygon used by refinement;
/// `vertices` additionally contains hanging nodes on its sides.
struct Element {
  std::vector<int> corners;
  std::vector<int> vertices;
  int level = 0;

  // Filled by subdivide().
  Point center;            // interior point nu: arithmetic mean of `vertices`
  double diameter = 0.0;   // h_S
  double area = 0.0;
  int side = 0;            // 0 without fractures, else 1/2 relative to the nearest fracture
  int first_triangle = 0;  // sub-triangles are [first_triangle, first_triangle + vertices.size())
};

/// Sub-triangle tau = (nu, a, b); (a, b) is its only primal edge.
struct SubTriangle {
  std::array<int, 3> pts{};         // indices into PolygonalMesh::points, counter-clockwise
  int element = -1;
  int primal_edge = -1;
  std::array<int, 2> dual_edges{};  // (nu, a) and (nu, b)
  double area = 0.0;
  double diameter = 0.0;
  int side = 0;
};

struct Edge {
  std::array<int, 2> pts{};
  EdgeKind kind = EdgeKind::Interior;
  double length = 0.0;
  Vec2 normal;                   // points from tri[0] to tri[1]; outward on the boundary
  std::array<int, 2> tri{-1, -1};  // tau_1, tau_2 (tau_2 = -1 on the boundary)
  int fracture = -1;
  int segment = -1;
};

/// One-dimensional mesh of a fracture: the trace of bulk edges, ordered by arclength.
struct FractureMesh {
  int fracture = -1;
  std::vector<int> edges;          // edge ids
  std::vector<int> nodes;          // point ids, edges.size() + 1 of them
  std::vector<double> arclength;   // arclength coordinate of each node
};

/// Fracture-aligned polygonal mesh together with its simplicial sub-mesh.
/// Values are immutable in practice: refine() and subdivide() return new meshes.
struct PolygonalMesh {
  DomainSpec domain;
  double tol = 1e-10;

  std::vector<Point> vertices;
  std::vector<Element> elements;

  // Sub-mesh, filled by subdivide(). points = vertices followed by one nu per element.
  std::vector<Point> points;
  std::vector<SubTriangle> triangles;
  std::vector<Edge> edges;
  std::vector<FractureMesh> fracture_meshes;

  bool subdivided() const { return !triangles.empty(); }
  int center_point(int element) const { return static_cast<int>(vertices.size()) + element; }
  std::size_t count(EdgeKind kind) const;
  /// D(e): the one or two sub-triangles having edge e.
  std::vector<int> dual_volume(int edge) const;
  /// Primal elements adjacent to edge e (one or two).
  std::vector<int> adjacent_elements(int edge) const;
  Point edge_midpoint(int edge) const { return midpoint(points[edges[edge].pts[0]], points[edges[edge].pts[1]]); }
};

/// Cartesian grid of squares of side target_h clipped to the outline. Returns a subdivided mesh.
PolygonalMesh build_initial_mesh(const DomainSpec& domain, double target_h);

/// Mesh from explicit counter-clockwise polygons (corners equal vertices). Returns a subdivided mesh.
PolygonalMesh make_polygon_mesh(const DomainSpec& domain, std::vector<Point> vertices,
                                std::vector<std::vector<int>> polygons);

/// Rebuilds the sub-mesh (points, triangles, classified edges, fracture meshes).
PolygonalMesh subdivide(PolygonalMesh mesh);

/// Quad split of every marked polygon plus 1-irregular closure. Returns a subdivided mesh.
PolygonalMesh refine(const PolygonalMesh& mesh, std::span<const int> marked);

/// Largest number of hanging nodes on any side of any polygon.
int max_hanging_nodes_per_side(const PolygonalMesh& mesh);

struct RegularityFloors {
  double rho_S = 0.1;
  double rho_E = 0.2;
};

struct RegularityReport {
  double rho_S = 0.0;
  double rho_E = 0.0;
  double h_max = 0.0;
  double h_min = 0.0;
  int worst_rho_S_element = -1;
  int worst_rho_E_element = -1;
  bool below_floor = false;
};

RegularityReport check_regularity(const PolygonalMesh& mesh, RegularityFloors floors = {});

}  // namespace sdg
