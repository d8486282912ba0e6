#include <string>
#include <vector>

#include "sdg/error.hpp"
#include "sdg/mesh.hpp"
#include "vertex_locator.hpp"

namespace sdg {

namespace {

Point corner_centroid(const PolygonalMesh& mesh, const Element& el) {
  Point c{0.0, 0.0};
  for (int id : el.corners) c = c + mesh.vertices[id];
  return (1.0 / static_cast<double>(el.corners.size())) * c;
}

}  // namespace

PolygonalMesh refine(const PolygonalMesh& mesh, std::span<const int> marked) {
  const std::size_t ne = mesh.elements.size();
  std::vector<char> mark(ne, 0);
  for (int id : marked) {
    if (id < 0 || static_cast<std::size_t>(id) >= ne) {
      throw Error(ErrorCode::InvalidArgument, "marked element id " + std::to_string(id) + " out of range");
    }
    mark[static_cast<std::size_t>(id)] = 1;
  }

  detail::VertexLocator existing(mesh.tol);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) existing.add(mesh.vertices[i], static_cast<int>(i));
  detail::VertexLocator pending(mesh.tol);
  std::vector<Point> scratch;

  auto side = [&](const Element& el, std::size_t c) {
    return std::pair{mesh.vertices[el.corners[c]], mesh.vertices[el.corners[(c + 1) % el.corners.size()]]};
  };
  auto schedule = [&](std::size_t e) {
    const Element& el = mesh.elements[e];
    for (std::size_t c = 0; c < el.corners.size(); ++c) {
      const auto [a, b] = side(el, c);
      pending.insert(midpoint(a, b), scratch);
    }
  };
  for (std::size_t e = 0; e < ne; ++e) {
    if (mark[e]) schedule(e);
  }

  // 1-irregular closure: an unrefined side may not receive a vertex at a quarter point.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < ne; ++e) {
      if (mark[e]) continue;
      const Element& el = mesh.elements[e];
      for (std::size_t c = 0; c < el.corners.size(); ++c) {
        const auto [a, b] = side(el, c);
        const Point q1 = a + 0.25 * (b - a);
        const Point q3 = a + 0.75 * (b - a);
        if (pending.contains(q1) || pending.contains(q3) || existing.contains(q1) || existing.contains(q3)) {
          mark[e] = 1;
          schedule(e);
          changed = true;
          break;
        }
      }
    }
  }

  PolygonalMesh out;
  out.domain = mesh.domain;
  out.tol = mesh.tol;
  out.vertices = mesh.vertices;
  detail::VertexLocator locator(mesh.tol);
  for (std::size_t i = 0; i < out.vertices.size(); ++i) locator.add(out.vertices[i], static_cast<int>(i));

  for (std::size_t e = 0; e < ne; ++e) {
    const Element& el = mesh.elements[e];
    if (!mark[e]) {
      Element copy;
      copy.corners = el.corners;
      copy.level = el.level;
      out.elements.push_back(std::move(copy));
      continue;
    }
    const std::size_t nc = el.corners.size();
    std::vector<int> mids(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      const auto [a, b] = side(el, c);
      mids[c] = locator.insert(midpoint(a, b), out.vertices);
    }
    const int center = locator.insert(corner_centroid(mesh, el), out.vertices);
    for (std::size_t c = 0; c < nc; ++c) {
      Element child;
      child.corners = {el.corners[c], mids[c], center, mids[(c + nc - 1) % nc]};
      child.level = el.level + 1;
      out.elements.push_back(std::move(child));
    }
  }

  for (Element& el : out.elements) {
    el.vertices.clear();
    const std::size_t nc = el.corners.size();
    for (std::size_t c = 0; c < nc; ++c) {
      const Point a = out.vertices[el.corners[c]];
      const Point b = out.vertices[el.corners[(c + 1) % nc]];
      el.vertices.push_back(el.corners[c]);
      const int mid = locator.find(midpoint(a, b));
      if (mid >= 0) el.vertices.push_back(mid);
    }
  }
  return subdivide(std::move(out));
}

}  // namespace sdg
