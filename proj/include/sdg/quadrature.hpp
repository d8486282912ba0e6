#pragma once

#include <vector>

#include "sdg/geometry.hpp"

namespace sdg {

/// Rule on the unit interval [0, 1]; weights sum to 1.
struct EdgeQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
  std::size_t size() const { return points.size(); }
};

/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;
  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule mapped to [0, 1] (exact for degree 2n - 1).
EdgeQuadrature gauss_legendre(int n);

/// Gauss-Legendre rule with exactness >= degree.
EdgeQuadrature edge_quadrature(int degree);

/// Collapsed (Duffy) tensor Gauss rule; exact for polynomials of total degree <= degree,
/// all weights positive.
QuadratureRule triangle_quadrature(int degree);

}  // namespace sdg
