#pragma once

#include <string>
#include <vector>

#include "sdg/geometry.hpp"

namespace sdg {

/// Closed axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
struct Box {
  Point lo;
  Point hi;
  double area() const { return (hi.x - lo.x) * (hi.y - lo.y); }
  bool contains(Point p, double tol = 0.0) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol;
  }
};

/// A fracture is an open polyline carrying its own tangential Darcy flow.
///
/// The normal n_Gamma of a segment with unit tangent t (traversal direction) is
/// (t.y, -t.x), i.e. it points to the right of the direction of travel. Side 1 of
/// the fracture is the side n_Gamma points away from, so n_Gamma is the outward
/// normal of the side-1 subdomain.
struct Fracture {
  std::string name;
  std::vector<Point> vertices;      // polyline, at least two points
  std::vector<double> kappa_n;      // normal permeability, one per segment
  std::vector<double> kappa_t;      // tangential permeability, one per segment
  double thickness = 0.01;          // l_Gamma

  std::size_t segment_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  double segment_length(std::size_t s) const { return distance(vertices[s], vertices[s + 1]); }
  double length() const;
  Vec2 tangent(std::size_t s) const;
  Vec2 normal(std::size_t s) const;
  /// Arclength of the start of segment s.
  double segment_start(std::size_t s) const;
  /// Closest segment to p and the arclength coordinate of its projection.
  std::pair<std::size_t, double> locate(Point p) const;
  Point point_at(double arclength) const;
};

/// Bulk outline (union of rectangles) and the non-intersecting fractures it contains.
struct DomainSpec {
  std::vector<Box> outline;
  std::vector<Fracture> fractures;

  Box bounding_box() const;
  double diameter() const;
  double area() const;
  bool contains(Point p, double tol = 0.0) const;
  /// Throws sdg::Error(InvalidDomain/EmptyDomain) when an invariant fails.
  void validate() const;
};

}  // namespace sdg
