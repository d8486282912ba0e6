#include "sdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "sdg/error.hpp"
#include "vertex_locator.hpp"

namespace sdg {

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Boundary: return "boundary";
    case EdgeKind::Interior: return "interior";
    case EdgeKind::Dual: return "dual";
    case EdgeKind::Fracture: return "fracture";
  }
  return "unknown";
}

std::size_t PolygonalMesh::count(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [kind](const Edge& e) { return e.kind == kind; }));
}

std::vector<int> PolygonalMesh::dual_volume(int edge) const {
  std::vector<int> out;
  for (int t : edges[edge].tri) {
    if (t >= 0) out.push_back(t);
  }
  return out;
}

std::vector<int> PolygonalMesh::adjacent_elements(int edge) const {
  std::vector<int> out;
  for (int t : edges[edge].tri) {
    if (t < 0) continue;
    const int el = triangles[t].element;
    if (std::find(out.begin(), out.end(), el) == out.end()) out.push_back(el);
  }
  return out;
}

namespace {

bool on_grid(double value, double origin, double h, double tol) {
  const double r = (value - origin) / h;
  return std::abs(r - std::round(r)) * h <= tol;
}

// Fracture segment (f, s) containing the closed segment [a, b], or {-1, -1}.
std::pair<int, int> find_fracture_segment(const DomainSpec& domain, Point a, Point b, double tol) {
  for (std::size_t f = 0; f < domain.fractures.size(); ++f) {
    const Fracture& fr = domain.fractures[f];
    for (std::size_t s = 0; s < fr.segment_count(); ++s) {
      if (segment_distance(a, fr.vertices[s], fr.vertices[s + 1]) <= tol &&
          segment_distance(b, fr.vertices[s], fr.vertices[s + 1]) <= tol) {
        return {static_cast<int>(f), static_cast<int>(s)};
      }
    }
  }
  return {-1, -1};
}

Point centroid(const std::vector<Point>& pts, const std::vector<int>& ids) {
  Point c{0.0, 0.0};
  for (int id : ids) c = c + pts[id];
  return (1.0 / static_cast<double>(ids.size())) * c;
}

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

int element_side(const DomainSpec& domain, Point c) {
  if (domain.fractures.empty()) return 0;
  double best = std::numeric_limits<double>::infinity();
  int side = 1;
  for (const Fracture& fr : domain.fractures) {
    for (std::size_t s = 0; s < fr.segment_count(); ++s) {
      const double d = segment_distance(c, fr.vertices[s], fr.vertices[s + 1]);
      if (d < best) {
        best = d;
        side = dot(c - fr.vertices[s], fr.normal(s)) < 0.0 ? 1 : 2;
      }
    }
  }
  return side;
}

}  // namespace

PolygonalMesh build_initial_mesh(const DomainSpec& domain, double target_h) {
  domain.validate();
  if (!(target_h > 0.0)) throw Error(ErrorCode::InvalidArgument, "target_h must be positive");
  const Box bb = domain.bounding_box();
  const double tol = 1e-10 * domain.diameter();

  for (const Box& r : domain.outline) {
    if (!on_grid(r.lo.x, bb.lo.x, target_h, tol) || !on_grid(r.hi.x, bb.lo.x, target_h, tol) ||
        !on_grid(r.lo.y, bb.lo.y, target_h, tol) || !on_grid(r.hi.y, bb.lo.y, target_h, tol)) {
      throw Error(ErrorCode::InvalidDomain, "outline rectangle does not lie on the grid of spacing target_h");
    }
  }
  for (const Fracture& fr : domain.fractures) {
    for (std::size_t s = 0; s < fr.segment_count(); ++s) {
      const Point a = fr.vertices[s];
      const Point b = fr.vertices[s + 1];
      const bool axis = std::abs(a.x - b.x) <= tol || std::abs(a.y - b.y) <= tol;
      if (!axis || !on_grid(a.x, bb.lo.x, target_h, tol) || !on_grid(a.y, bb.lo.y, target_h, tol) ||
          !on_grid(b.x, bb.lo.x, target_h, tol) || !on_grid(b.y, bb.lo.y, target_h, tol)) {
        throw Error(ErrorCode::FractureNotAligned,
                    "segment " + std::to_string(s) + " of '" + fr.name + "' does not lie on grid lines");
      }
    }
  }

  const int nx = static_cast<int>(std::lround((bb.hi.x - bb.lo.x) / target_h));
  const int ny = static_cast<int>(std::lround((bb.hi.y - bb.lo.y) / target_h));

  PolygonalMesh mesh;
  mesh.domain = domain;
  mesh.tol = tol;
  detail::VertexLocator locator(tol);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x0 = bb.lo.x + i * target_h;
      const double y0 = bb.lo.y + j * target_h;
      const double x1 = bb.lo.x + (i + 1) * target_h;
      const double y1 = bb.lo.y + (j + 1) * target_h;
      const Point c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
      if (!domain.contains(c, -0.25 * target_h)) continue;
      Element el;
      el.corners = {locator.insert({x0, y0}, mesh.vertices), locator.insert({x1, y0}, mesh.vertices),
                    locator.insert({x1, y1}, mesh.vertices), locator.insert({x0, y1}, mesh.vertices)};
      el.vertices = el.corners;
      mesh.elements.push_back(std::move(el));
    }
  }
  if (mesh.elements.empty()) throw Error(ErrorCode::EmptyDomain, "no grid cell lies inside the outline");
  return subdivide(std::move(mesh));
}

PolygonalMesh make_polygon_mesh(const DomainSpec& domain, std::vector<Point> vertices,
                                std::vector<std::vector<int>> polygons) {
  if (polygons.empty()) throw Error(ErrorCode::EmptyDomain, "no polygons");
  PolygonalMesh mesh;
  mesh.domain = domain;
  mesh.tol = 1e-10 * (domain.outline.empty() ? 1.0 : domain.diameter());
  mesh.vertices = std::move(vertices);
  for (auto& poly : polygons) {
    if (poly.size() < 3) throw Error(ErrorCode::InvalidArgument, "polygon with fewer than 3 vertices");
    double area = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      area += 0.5 * cross(mesh.vertices[poly[i]], mesh.vertices[poly[(i + 1) % poly.size()]]);
    }
    if (area < 0.0) std::reverse(poly.begin(), poly.end());
    Element el;
    el.corners = poly;
    el.vertices = std::move(poly);
    mesh.elements.push_back(std::move(el));
  }
  return subdivide(std::move(mesh));
}

PolygonalMesh subdivide(PolygonalMesh mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  mesh.points = mesh.vertices;
  mesh.triangles.clear();
  mesh.edges.clear();
  mesh.fracture_meshes.clear();

  std::unordered_map<std::uint64_t, int> edge_ids;
  auto edge_for = [&](int a, int b, EdgeKind kind) {
    auto [it, inserted] = edge_ids.try_emplace(edge_key(a, b), static_cast<int>(mesh.edges.size()));
    if (inserted) {
      Edge e;
      e.pts = {a, b};
      e.kind = kind;
      e.length = distance(mesh.points[a], mesh.points[b]);
      mesh.edges.push_back(e);
    }
    return it->second;
  };
  auto attach = [&](int edge, int tri) {
    Edge& e = mesh.edges[edge];
    if (e.tri[0] < 0) {
      e.tri[0] = tri;
    } else if (e.tri[1] < 0) {
      e.tri[1] = tri;
    } else {
      throw Error(ErrorCode::NonConformingMesh, "edge shared by more than two sub-triangles");
    }
  };

  for (std::size_t ei = 0; ei < mesh.elements.size(); ++ei) {
    Element& el = mesh.elements[ei];
    el.center = centroid(mesh.vertices, el.vertices);
    mesh.points.push_back(el.center);
    el.diameter = 0.0;
    el.area = 0.0;
    for (std::size_t i = 0; i < el.vertices.size(); ++i) {
      for (std::size_t j = i + 1; j < el.vertices.size(); ++j) {
        el.diameter = std::max(el.diameter, distance(mesh.vertices[el.vertices[i]], mesh.vertices[el.vertices[j]]));
      }
    }
    el.side = element_side(mesh.domain, el.center);
  }

  for (std::size_t ei = 0; ei < mesh.elements.size(); ++ei) {
    Element& el = mesh.elements[ei];
    const int c = nv + static_cast<int>(ei);
    const std::size_t n = el.vertices.size();
    el.first_triangle = static_cast<int>(mesh.triangles.size());
    for (std::size_t i = 0; i < n; ++i) {
      const int a = el.vertices[i];
      const int b = el.vertices[(i + 1) % n];
      SubTriangle t;
      t.pts = {c, a, b};
      t.element = static_cast<int>(ei);
      t.side = el.side;
      t.area = signed_area(mesh.points[c], mesh.points[a], mesh.points[b]);
      if (!(t.area > 1e-12 * el.diameter * el.diameter)) {
        throw Error(ErrorCode::NotStarShaped,
                    "element " + std::to_string(ei) + " is not star-shaped with respect to its centroid");
      }
      el.area += t.area;
      t.diameter = std::max({distance(mesh.points[c], mesh.points[a]), distance(mesh.points[c], mesh.points[b]),
                             distance(mesh.points[a], mesh.points[b])});
      const int tid = static_cast<int>(mesh.triangles.size());
      t.primal_edge = edge_for(a, b, EdgeKind::Interior);
      t.dual_edges = {edge_for(c, a, EdgeKind::Dual), edge_for(c, b, EdgeKind::Dual)};
      attach(t.primal_edge, tid);
      attach(t.dual_edges[0], tid);
      attach(t.dual_edges[1], tid);
      mesh.triangles.push_back(t);
    }
  }

  auto tri_centroid = [&](int t) {
    const auto& p = mesh.triangles[t].pts;
    return (1.0 / 3.0) * (mesh.points[p[0]] + mesh.points[p[1]] + mesh.points[p[2]]);
  };

  for (Edge& e : mesh.edges) {
    const Point a = mesh.points[e.pts[0]];
    const Point b = mesh.points[e.pts[1]];
    const Point mid = midpoint(a, b);
    const Vec2 d = (1.0 / e.length) * (b - a);
    Vec2 n{d.y, -d.x};
    if (e.kind == EdgeKind::Dual) {
      if (e.tri[1] < 0) throw Error(ErrorCode::NonConformingMesh, "dual edge with a single sub-triangle");
      if (dot(tri_centroid(e.tri[1]) - mid, n) < 0.0) n = -1.0 * n;
      e.normal = n;
      continue;
    }
    if (e.tri[1] < 0) {
      e.kind = EdgeKind::Boundary;
      if (dot(tri_centroid(e.tri[0]) - mid, n) > 0.0) n = -1.0 * n;
      e.normal = n;
      continue;
    }
    const auto [f, s] = find_fracture_segment(mesh.domain, a, b, mesh.tol);
    if (f >= 0) {
      e.kind = EdgeKind::Fracture;
      e.fracture = f;
      e.segment = s;
      e.normal = mesh.domain.fractures[f].normal(s);
      const bool first_is_side1 = dot(tri_centroid(e.tri[0]) - mid, e.normal) < 0.0;
      const bool second_is_side1 = dot(tri_centroid(e.tri[1]) - mid, e.normal) < 0.0;
      if (first_is_side1 == second_is_side1) {
        throw Error(ErrorCode::NonConformingMesh, "fracture edge without one sub-triangle on each side");
      }
      if (!first_is_side1) std::swap(e.tri[0], e.tri[1]);
    } else {
      e.kind = EdgeKind::Interior;
      if (dot(tri_centroid(e.tri[1]) - mid, n) < 0.0) n = -1.0 * n;
      e.normal = n;
    }
  }

  for (std::size_t f = 0; f < mesh.domain.fractures.size(); ++f) {
    const Fracture& fr = mesh.domain.fractures[f];
    struct Item {
      double s0, s1;
      int edge, p0, p1;
    };
    std::vector<Item> items;
    for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
      const Edge& e = mesh.edges[ei];
      if (e.kind != EdgeKind::Fracture || e.fracture != static_cast<int>(f)) continue;
      const double start = fr.segment_start(static_cast<std::size_t>(e.segment));
      const Vec2 t = fr.tangent(static_cast<std::size_t>(e.segment));
      const Point origin = fr.vertices[static_cast<std::size_t>(e.segment)];
      double sa = start + dot(mesh.points[e.pts[0]] - origin, t);
      double sb = start + dot(mesh.points[e.pts[1]] - origin, t);
      int pa = e.pts[0];
      int pb = e.pts[1];
      if (sa > sb) {
        std::swap(sa, sb);
        std::swap(pa, pb);
      }
      items.push_back({sa, sb, static_cast<int>(ei), pa, pb});
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.s0 < y.s0; });
    const std::string name = fr.name.empty() ? "fracture " + std::to_string(f) : "'" + fr.name + "'";
    if (items.empty()) throw Error(ErrorCode::FractureNotAligned, name + " is not covered by mesh edges");
    FractureMesh fm;
    fm.fracture = static_cast<int>(f);
    double expect = 0.0;
    for (const Item& it : items) {
      if (std::abs(it.s0 - expect) > mesh.tol) {
        throw Error(ErrorCode::FractureNotAligned, name + " is not exactly covered by mesh edges");
      }
      if (fm.nodes.empty()) {
        fm.nodes.push_back(it.p0);
        fm.arclength.push_back(it.s0);
      }
      fm.edges.push_back(it.edge);
      fm.nodes.push_back(it.p1);
      fm.arclength.push_back(it.s1);
      expect = it.s1;
    }
    if (std::abs(expect - fr.length()) > mesh.tol) {
      throw Error(ErrorCode::FractureNotAligned, name + " is not exactly covered by mesh edges");
    }
    mesh.fracture_meshes.push_back(std::move(fm));
  }
  return mesh;
}

int max_hanging_nodes_per_side(const PolygonalMesh& mesh) {
  int worst = 0;
  for (const Element& el : mesh.elements) {
    const std::size_t nc = el.corners.size();
    // Hanging nodes sit between consecutive corners in the vertex cycle.
    std::size_t start = static_cast<std::size_t>(
        std::find(el.vertices.begin(), el.vertices.end(), el.corners[0]) - el.vertices.begin());
    std::size_t pos = start;
    for (std::size_t c = 0; c < nc; ++c) {
      const int next_corner = el.corners[(c + 1) % nc];
      int hanging = 0;
      pos = (pos + 1) % el.vertices.size();
      while (el.vertices[pos] != next_corner) {
        ++hanging;
        pos = (pos + 1) % el.vertices.size();
      }
      worst = std::max(worst, hanging);
    }
  }
  return worst;
}

}  // namespace sdg
