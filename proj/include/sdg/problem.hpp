#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdg/domain.hpp"
#include "sdg/geometry.hpp"

namespace sdg {

enum class BoundaryKind { Dirichlet, Neumann };

struct TipCondition {
  BoundaryKind kind = BoundaryKind::Neumann;
  double value = 0.0;
};

/// Bulk boundary data. Dirichlet data is imposed on S_h edge nodes; Neumann data
/// g_N is the prescribed value of (K grad p) . n and enters the right-hand side.
struct BulkBoundary {
  std::function<BoundaryKind(Point edge_midpoint)> kind;
  std::function<double(Point x, int side)> pressure;
  std::function<double(Point x)> flux;

  BoundaryKind kind_at(Point mid) const { return kind ? kind(mid) : BoundaryKind::Dirichlet; }
  double pressure_at(Point x, int side) const { return pressure ? pressure(x, side) : 0.0; }
  double flux_at(Point x) const { return flux ? flux(x) : 0.0; }
};

/// Coefficients, sources and boundary data of the coupled bulk-fracture problem.
struct ProblemSpec {
  std::string name;
  DomainSpec domain;
  std::function<Tensor2(Point centroid, int side)> permeability;  // K, piecewise constant
  double xi = 0.75;
  std::function<double(Point x, int side)> source;                // f
  std::function<double(Point x, int fracture)> fracture_source;   // f_Gamma
  BulkBoundary boundary;
  std::vector<std::array<TipCondition, 2>> tips;                  // per fracture: (start, end)

  Tensor2 permeability_at(Point c, int side) const { return permeability ? permeability(c, side) : Tensor2{}; }
  double source_at(Point x, int side) const { return source ? source(x, side) : 0.0; }
  double fracture_source_at(Point x, int f) const { return fracture_source ? fracture_source(x, f) : 0.0; }

  /// eta_Gamma = l_Gamma / kappa_n on segment s of fracture f.
  double eta_gamma(int f, int s) const;
  /// alpha_Gamma = eta_Gamma (xi / 2 - 1 / 4).
  double alpha_gamma(int f, int s) const;
  /// K_Gamma = kappa_t l_Gamma.
  double k_gamma(int f, int s) const;

  /// Throws sdg::Error(InvalidArgument) on xi outside (1/2, 1] or mismatched tip data.
  void validate() const;
};

/// Closed-form solution used for error measurement and interface checks.
struct ExactSolution {
  std::function<double(Point x, int side)> pressure;
  std::function<Vec2(Point x, int side)> grad_pressure;
  std::function<Vec2(Point x, int side)> flux;               // u = -K grad p
  std::function<double(Point x, int fracture)> fracture_pressure;
  std::function<Vec2(Point x, int fracture)> fracture_grad;  // gradient of the extension of p_Gamma
};

}  // namespace sdg
