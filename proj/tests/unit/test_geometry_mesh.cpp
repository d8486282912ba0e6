#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "sdg/error.hpp"
#include "test_support.hpp"

using namespace sdg;

namespace {

std::size_t count_edges(const PolygonalMesh& m, EdgeKind k) {
  std::size_t n = 0;
  for (const Edge& e : m.edges) n += e.kind == k;
  return n;
}

DomainSpec lshape_domain() {
  DomainSpec d;
  d.outline = {Box{{0.0, 0.0}, {2.0, 1.0}}, Box{{1.0, -1.0}, {2.0, 0.0}}};
  return d;
}

// Distance from p to the fracture polyline.
double distance_to_polyline(const Fracture& f, Point p) {
  double best = 1e300;
  for (std::size_t s = 0; s + 1 < f.vertices.size(); ++s) best = std::min(best, segment_distance(p, f.vertices[s], f.vertices[s + 1]));
  return best;
}

void check_invariants(const PolygonalMesh& m) {
  // Every sub-triangle: one primal edge and two dual edges.
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const SubTriangle& T = m.triangles[t];
    ASSERT_NE(m.edges[T.primal_edge].kind, EdgeKind::Dual);
    for (int d : T.dual_edges) ASSERT_EQ(m.edges[d].kind, EdgeKind::Dual);
    ASSERT_GT(T.area, 0.0);
  }
  // Classification partitions the edges; unit normals; positive lengths.
  EXPECT_EQ(count_edges(m, EdgeKind::Boundary) + count_edges(m, EdgeKind::Interior) + count_edges(m, EdgeKind::Dual) +
                count_edges(m, EdgeKind::Fracture),
            m.edges.size());
  for (const Edge& e : m.edges) {
    ASSERT_GT(e.length, 0.0);
    ASSERT_NEAR(std::hypot(e.normal.x, e.normal.y), 1.0, 1e-14);
    if (e.kind == EdgeKind::Boundary) {
      ASSERT_EQ(e.tri[1], -1);
    } else {
      ASSERT_GE(e.tri[1], 0);
    }
    if (e.kind == EdgeKind::Fracture) {
      // One sub-triangle per side.
      ASSERT_NE(m.triangles[e.tri[0]].side, m.triangles[e.tri[1]].side);
    }
  }
  // Fracture conformity: fracture edges lie on the polyline and cover its length.
  for (std::size_t f = 0; f < m.domain.fractures.size(); ++f) {
    const Fracture& fr = m.domain.fractures[f];
    double covered = 0.0;
    for (const Edge& e : m.edges) {
      if (e.kind != EdgeKind::Fracture || e.fracture != static_cast<int>(f)) continue;
      covered += e.length;
      ASSERT_LE(distance_to_polyline(fr, m.points[e.pts[0]]), 1e-12);
      ASSERT_LE(distance_to_polyline(fr, m.points[e.pts[1]]), 1e-12);
    }
    EXPECT_NEAR(covered, fr.length(), 1e-12);
    // No element is cut: its centre is off the fracture and all its triangles are on one side.
  }
  for (const Element& el : m.elements) {
    for (std::size_t j = 0; j < el.vertices.size(); ++j) {
      ASSERT_EQ(m.triangles[el.first_triangle + j].side, el.side);
    }
  }
  EXPECT_LE(max_hanging_nodes_per_side(m), 1);
}

}  // namespace

TEST(InitialMesh, TwoSquaresWithFracture) {
  const PolygonalMesh m = build_initial_mesh(test::strip(true), 1.0);
  EXPECT_EQ(m.elements.size(), 2u);
  EXPECT_EQ(count_edges(m, EdgeKind::Interior), 0u);
  EXPECT_EQ(count_edges(m, EdgeKind::Fracture), 1u);
  EXPECT_EQ(count_edges(m, EdgeKind::Boundary), 6u);
  EXPECT_EQ(m.triangles.size(), 8u);
  EXPECT_EQ(count_edges(m, EdgeKind::Dual), 8u);
  check_invariants(m);
}

TEST(InitialMesh, TwoSquaresWithoutFracture) {
  const PolygonalMesh m = build_initial_mesh(test::strip(false), 1.0);
  EXPECT_EQ(m.elements.size(), 2u);
  EXPECT_EQ(count_edges(m, EdgeKind::Interior), 1u);
  check_invariants(m);
}

TEST(InitialMesh, LShapeHasTwelveCells) {
  const PolygonalMesh m = build_initial_mesh(lshape_domain(), 0.5);
  EXPECT_EQ(m.elements.size(), 12u);
  double area = 0.0;
  for (const Element& e : m.elements) area += e.area;
  EXPECT_NEAR(area, 3.0, 1e-12);
  check_invariants(m);
}

TEST(InitialMesh, EmptyOutlineRejected) {
  DomainSpec d;
  try {
    (void)build_initial_mesh(d, 0.5);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::EmptyDomain || e.code() == ErrorCode::InvalidDomain);
  }
}

TEST(InitialMesh, FractureOffGridRejected) {
  DomainSpec d = test::strip(true);
  d.fractures[0].vertices = {{1.1, 0.0}, {1.1, 1.0}};
  try {
    (void)build_initial_mesh(d, 1.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FractureNotAligned);
  }
}

TEST(Subdivide, UnitSquareAndPentagon) {
  const PolygonalMesh sq = build_initial_mesh(test::unit_square(), 1.0);
  EXPECT_EQ(sq.triangles.size(), 4u);
  EXPECT_EQ(count_edges(sq, EdgeKind::Dual), 4u);
  // Interior point is the vertex centroid.
  EXPECT_NEAR(sq.elements[0].center.x, 0.5, 1e-15);
  EXPECT_NEAR(sq.elements[0].center.y, 0.5, 1e-15);

  DomainSpec d;
  d.outline = {Box{{0.0, 0.0}, {2.0, 2.0}}};
  const PolygonalMesh pent =
      make_polygon_mesh(d, {{0, 0}, {2, 0}, {2, 1.2}, {1, 2}, {0, 1.2}}, {{0, 1, 2, 3, 4}});
  EXPECT_EQ(pent.triangles.size(), 5u);
  EXPECT_EQ(count_edges(pent, EdgeKind::Dual), 5u);
  EXPECT_EQ(count_edges(pent, EdgeKind::Boundary), 5u);
}

TEST(Subdivide, NonStarShapedRejected) {
  DomainSpec d;
  d.outline = {Box{{0.0, 0.0}, {4.0, 4.0}}};
  // Thin "V": the vertex centroid lies outside the polygon.
  try {
    (void)make_polygon_mesh(d, {{0, 0}, {4, 4}, {0, 0.2}, {-4, 4}}, {{0, 1, 2, 3}});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStarShaped);
  }
}

TEST(Regularity, UnitSquares) {
  const PolygonalMesh m = build_initial_mesh(test::strip(false), 1.0);
  const RegularityReport r = check_regularity(m);
  EXPECT_NEAR(r.rho_E, 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(r.rho_S, 1.0 / (2.0 * std::sqrt(2.0)), 1e-14);
  EXPECT_FALSE(r.below_floor);
}

TEST(Regularity, SliverFlagged) {
  DomainSpec d;
  d.outline = {Box{{0.0, 0.0}, {1.0, 0.02}}};
  const PolygonalMesh m = make_polygon_mesh(d, {{0, 0}, {1, 0}, {1, 0.02}, {0, 0.02}}, {{0, 1, 2, 3}});
  const RegularityReport r = check_regularity(m);
  EXPECT_LT(r.rho_S, 0.1);
  EXPECT_TRUE(r.below_floor);
  EXPECT_EQ(r.worst_rho_S_element, 0);
}

TEST(Refine, SingleSquareSplitsIntoFour) {
  const PolygonalMesh m = build_initial_mesh(test::unit_square(), 1.0);
  const PolygonalMesh r = refine(m, std::vector<int>{0});
  ASSERT_EQ(r.elements.size(), 4u);
  for (const Element& e : r.elements) {
    EXPECT_EQ(e.vertices.size(), 4u);
    EXPECT_NEAR(e.area, 0.25, 1e-14);
  }
  check_invariants(r);
}

TEST(Refine, LeftSquareMarkedMakesPentagonNeighbour) {
  const PolygonalMesh m = build_initial_mesh(test::strip(true), 1.0);
  // Element whose centre is left of the fracture.
  const int left = m.elements[0].center.x < 1.0 ? 0 : 1;
  const PolygonalMesh r = refine(m, std::vector<int>{left});
  ASSERT_EQ(r.elements.size(), 5u);
  int pentagons = 0;
  for (const Element& e : r.elements) {
    if (e.vertices.size() == 5) {
      ++pentagons;
      EXPECT_GT(e.center.x, 1.0);
      bool has_hanging = false;
      for (int v : e.vertices) {
        const Point p = r.vertices[v];
        has_hanging = has_hanging || (std::abs(p.x - 1.0) < 1e-14 && std::abs(p.y - 0.5) < 1e-14);
      }
      EXPECT_TRUE(has_hanging);
    }
  }
  EXPECT_EQ(pentagons, 1);
  ASSERT_EQ(r.fracture_meshes.size(), 1u);
  EXPECT_EQ(r.fracture_meshes[0].edges.size(), 2u);
  check_invariants(r);
}

TEST(Refine, ClosureRefinesNeighbourInsteadOfStackingHangingNodes) {
  DomainSpec d;
  d.outline = {Box{{0.0, 0.0}, {3.0, 1.0}}};
  PolygonalMesh m = build_initial_mesh(d, 1.0);
  ASSERT_EQ(m.elements.size(), 3u);
  auto find = [](const PolygonalMesh& mesh, double x0, double x1, double y0, double y1) {
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
      const Point c = mesh.elements[e].center;
      if (c.x > x0 && c.x < x1 && c.y > y0 && c.y < y1) return static_cast<int>(e);
    }
    return -1;
  };
  m = refine(m, std::vector<int>{find(m, 0.0, 1.0, 0.0, 1.0)});
  ASSERT_EQ(m.elements.size(), 6u);
  // Child of the first cell touching the middle cell.
  const int child = find(m, 0.5, 1.0, 0.0, 0.5);
  ASSERT_GE(child, 0);
  m = refine(m, std::vector<int>{child});
  // Without closure: 6 - 1 + 4 = 9 cells. The middle cell would carry two hanging nodes, so it is split too.
  EXPECT_EQ(m.elements.size(), 12u);
  EXPECT_LE(max_hanging_nodes_per_side(m), 1);
  // The far cell is untouched apart from at most one hanging node.
  const int far = find(m, 2.0, 3.0, 0.0, 1.0);
  ASSERT_GE(far, 0);
  EXPECT_NEAR(m.elements[far].area, 1.0, 1e-14);
  check_invariants(m);
}

TEST(Refine, OutOfRangeIdRejected) {
  const PolygonalMesh m = build_initial_mesh(test::unit_square(), 1.0);
  EXPECT_THROW((void)refine(m, std::vector<int>{3}), Error);
}

TEST(Refine, RandomSequencesKeepInvariants) {
  std::mt19937 rng(20240611);
  DomainSpec d = lshape_domain();
  Fracture f;
  f.vertices = {{0.5, 1.0}, {0.5, 0.5}, {1.5, 0.5}, {1.5, -1.0}};
  f.kappa_n = {1.0, 1.0, 1.0};
  f.kappa_t = {1.0, 1.0, 1.0};
  d.fractures.push_back(f);
  const PolygonalMesh base = build_initial_mesh(d, 0.5);
  for (int seq = 0; seq < 100; ++seq) {
    PolygonalMesh m = base;
    for (int step = 0; step < 3; ++step) {
      m = test::refine_randomly(m, 1, 0.25, rng);
      ASSERT_NO_FATAL_FAILURE(check_invariants(m)) << "sequence " << seq << " step " << step;
      double area = 0.0;
      for (const Element& e : m.elements) area += e.area;
      ASSERT_NEAR(area, 3.0, 1e-12);
      ASSERT_GE(check_regularity(m).rho_E, 0.2);
    }
  }
}

TEST(Refine, VertexLocatorIdentifiesSharedPoints) {
  // Uniform refinement of a strip twice: vertex count of a 8 x 4 grid of squares.
  const PolygonalMesh m = test::refine_uniformly(build_initial_mesh(test::strip(true), 1.0), 2);
  EXPECT_EQ(m.elements.size(), 32u);
  EXPECT_EQ(m.vertices.size(), 9u * 5u);
  EXPECT_EQ(m.fracture_meshes[0].edges.size(), 4u);
  // Fracture mesh ordered by increasing arclength.
  const auto& arc = m.fracture_meshes[0].arclength;
  for (std::size_t i = 1; i < arc.size(); ++i) EXPECT_GT(arc[i], arc[i - 1]);
}
