#pragma once

#include <span>
#include <vector>

#include "sdg/assembly.hpp"
#include "sdg/basis.hpp"

namespace sdg {

/// Pointwise evaluation of a discrete solution on the sub-mesh.
class FieldEvaluator {
 public:
  FieldEvaluator(const PolygonalMesh& mesh, const DofMaps& dofs, const DiscreteSolution& sol);

  const LagrangeTriangle& basis() const { return basis_; }

  /// Local coefficients on sub-triangle tri: pressure (n_local), flux (2 n_local, x then y).
  std::span<const double> pressure_coeffs(std::size_t tri) const { return {p_.data() + tri * nl_, nl_}; }
  std::span<const double> flux_coeffs(std::size_t tri) const { return {u_.data() + tri * 2 * nl_, 2 * nl_}; }

  double pressure(std::size_t tri, Point x) const;
  Vec2 grad_pressure(std::size_t tri, Point x) const;
  Vec2 flux(std::size_t tri, Point x) const;
  double div_flux(std::size_t tri, Point x) const;

  /// Fracture pressure on slot `slot` at local coordinate t in [0, 1] (increasing arclength),
  /// and its first and second arclength derivatives.
  double fracture_pressure(std::size_t slot, double t) const;
  double fracture_slope(std::size_t slot, double t) const;
  double fracture_curvature(std::size_t slot, double t) const;
  /// End points of the slot in arclength order.
  std::pair<Point, Point> fracture_segment(std::size_t slot) const;

 private:
  const PolygonalMesh& mesh_;
  const DofMaps& dofs_;
  LagrangeTriangle basis_;
  LagrangeSegment seg_;
  std::size_t nl_;
  std::vector<double> p_;
  std::vector<double> u_;
  std::vector<double> w_;  // per slot, order + 1 values
};

}  // namespace sdg
