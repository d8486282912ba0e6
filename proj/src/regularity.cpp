#include <algorithm>
#include <limits>

#include "sdg/mesh.hpp"

namespace sdg {

// rho_S uses the largest ball centred at the interior point nu; for the convex
// cells produced here this is the ball of Assumption (A) about nu.
RegularityReport check_regularity(const PolygonalMesh& mesh, RegularityFloors floors) {
  RegularityReport rep;
  rep.rho_S = std::numeric_limits<double>::infinity();
  rep.rho_E = std::numeric_limits<double>::infinity();
  rep.h_min = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const Element& el = mesh.elements[e];
    const std::size_t n = el.vertices.size();
    double inner = std::numeric_limits<double>::infinity();
    double shortest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = mesh.vertices[el.vertices[i]];
      const Point b = mesh.vertices[el.vertices[(i + 1) % n]];
      inner = std::min(inner, segment_distance(el.center, a, b));
      shortest = std::min(shortest, distance(a, b));
    }
    const double rs = inner / el.diameter;
    const double re = shortest / el.diameter;
    if (rs < rep.rho_S) {
      rep.rho_S = rs;
      rep.worst_rho_S_element = static_cast<int>(e);
    }
    if (re < rep.rho_E) {
      rep.rho_E = re;
      rep.worst_rho_E_element = static_cast<int>(e);
    }
    rep.h_max = std::max(rep.h_max, el.diameter);
    rep.h_min = std::min(rep.h_min, el.diameter);
  }
  rep.below_floor = rep.rho_S < floors.rho_S || rep.rho_E < floors.rho_E;
  return rep;
}

}  // namespace sdg
