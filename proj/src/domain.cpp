#include "sdg/domain.hpp"

#include <algorithm>
#include <limits>

#include "sdg/error.hpp"

namespace sdg {

double Fracture::length() const {
  double total = 0.0;
  for (std::size_t s = 0; s < segment_count(); ++s) total += segment_length(s);
  return total;
}

Vec2 Fracture::tangent(std::size_t s) const {
  const Vec2 d = vertices[s + 1] - vertices[s];
  return (1.0 / norm(d)) * d;
}

Vec2 Fracture::normal(std::size_t s) const {
  const Vec2 t = tangent(s);
  return {t.y, -t.x};
}

double Fracture::segment_start(std::size_t s) const {
  double total = 0.0;
  for (std::size_t i = 0; i < s; ++i) total += segment_length(i);
  return total;
}

std::pair<std::size_t, double> Fracture::locate(Point p) const {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double start = 0.0;
  for (std::size_t s = 0; s < segment_count(); ++s) {
    const Vec2 d = vertices[s + 1] - vertices[s];
    const double len = norm(d);
    double t = dot(p - vertices[s], d) / (len * len);
    t = std::clamp(t, 0.0, 1.0);
    const double dist = distance(p, vertices[s] + t * d);
    if (dist < best_dist) {
      best_dist = dist;
      best = s;
      best_s = start + t * len;
    }
    start += len;
  }
  return {best, best_s};
}

Point Fracture::point_at(double arclength) const {
  double start = 0.0;
  for (std::size_t s = 0; s < segment_count(); ++s) {
    const double len = segment_length(s);
    if (arclength <= start + len || s + 1 == segment_count()) {
      const double t = (arclength - start) / len;
      return vertices[s] + t * (vertices[s + 1] - vertices[s]);
    }
    start += len;
  }
  return vertices.back();
}

Box DomainSpec::bounding_box() const {
  Box b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
        {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const auto& r : outline) {
    b.lo.x = std::min(b.lo.x, r.lo.x);
    b.lo.y = std::min(b.lo.y, r.lo.y);
    b.hi.x = std::max(b.hi.x, r.hi.x);
    b.hi.y = std::max(b.hi.y, r.hi.y);
  }
  return b;
}

double DomainSpec::diameter() const {
  const Box b = bounding_box();
  return distance(b.lo, b.hi);
}

double DomainSpec::area() const {
  // Rectangles of a valid outline overlap only along their boundaries.
  double a = 0.0;
  for (const auto& r : outline) a += r.area();
  return a;
}

bool DomainSpec::contains(Point p, double tol) const {
  return std::any_of(outline.begin(), outline.end(), [&](const Box& r) { return r.contains(p, tol); });
}

namespace {

bool segments_touch(Point a, Point b, Point c, Point d, double tol) {
  // Closed segments [a,b], [c,d] intersect (including collinear overlap).
  if (segment_distance(a, c, d) <= tol || segment_distance(b, c, d) <= tol ||
      segment_distance(c, a, b) <= tol || segment_distance(d, a, b) <= tol) {
    return true;
  }
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

void DomainSpec::validate() const {
  if (outline.empty()) throw Error(ErrorCode::EmptyDomain, "outline has no rectangles");
  for (const auto& r : outline) {
    if (!(r.hi.x > r.lo.x) || !(r.hi.y > r.lo.y)) {
      throw Error(ErrorCode::InvalidDomain, "outline rectangle with non-positive area");
    }
  }
  const double tol = 1e-10 * diameter();
  for (std::size_t f = 0; f < fractures.size(); ++f) {
    const Fracture& fr = fractures[f];
    const std::string name = fr.name.empty() ? "fracture " + std::to_string(f) : fr.name;
    if (fr.vertices.size() < 2) throw Error(ErrorCode::InvalidDomain, name + ": needs at least two vertices");
    const std::size_t ns = fr.segment_count();
    if (fr.kappa_n.size() != ns || fr.kappa_t.size() != ns) {
      throw Error(ErrorCode::InvalidDomain, name + ": one kappa_n/kappa_t value per segment required");
    }
    if (!(fr.thickness > 0.0)) throw Error(ErrorCode::InvalidDomain, name + ": thickness must be positive");
    for (std::size_t s = 0; s < ns; ++s) {
      if (!(fr.kappa_n[s] > 0.0) || !(fr.kappa_t[s] > 0.0)) {
        throw Error(ErrorCode::InvalidDomain, name + ": permeabilities must be positive");
      }
      if (!(fr.segment_length(s) > tol)) throw Error(ErrorCode::InvalidDomain, name + ": zero-length segment");
      if (!contains(fr.vertices[s], tol) || !contains(fr.vertices[s + 1], tol)) {
        throw Error(ErrorCode::InvalidDomain, name + ": leaves the outline");
      }
    }
    for (std::size_t g = f + 1; g < fractures.size(); ++g) {
      const Fracture& other = fractures[g];
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t t = 0; t < other.segment_count(); ++t) {
          if (segments_touch(fr.vertices[s], fr.vertices[s + 1], other.vertices[t], other.vertices[t + 1], tol)) {
            throw Error(ErrorCode::InvalidDomain, name + " intersects " + other.name);
          }
        }
      }
    }
  }
}

}  // namespace sdg
