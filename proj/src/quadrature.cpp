#include "sdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "sdg/error.hpp"

namespace sdg {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

EdgeQuadrature gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre rule needs n >= 1");
  EdgeQuadrature rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    // Roots come out in descending order; store ascending on [0, 1].
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    rule.points[idx] = 0.5 * (x + 1.0);
    rule.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

EdgeQuadrature edge_quadrature(int degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "quadrature degree must be >= 0");
  return gauss_legendre(degree / 2 + 1);
}

QuadratureRule triangle_quadrature(int degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "quadrature degree must be >= 0");
  // x = s, y = t (1 - s); the Jacobian (1 - s) raises the degree in s by one.
  const int n = (degree + 2 + 1) / 2;
  const EdgeQuadrature g = gauss_legendre(n);
  QuadratureRule rule;
  rule.degree = degree;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double s = g.points[i];
      const double t = g.points[j];
      rule.points.push_back({s, t * (1.0 - s)});
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - s));
    }
  }
  return rule;
}

}  // namespace sdg
