#include "sdg/basis.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "sdg/error.hpp"

namespace sdg {

LagrangeTriangle::LagrangeTriangle(int order) : order_(order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "polynomial order must be >= 1");
  const double k = order;
  // Primal-edge nodes (i + j = k) from (1,0) to (0,1).
  for (int j = 0; j <= order; ++j) nodes_.push_back({(order - j) / k, j / k});
  for (int s = order - 1; s >= 0; --s) {
    for (int j = 0; j <= s; ++j) nodes_.push_back({(s - j) / k, j / k});
  }
  for (int deg = 0; deg <= order; ++deg) {
    for (int b = 0; b <= deg; ++b) monomials_.emplace_back(deg - b, b);
  }
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXd vander(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index m = 0; m < n; ++m) {
      const auto [px, py] = monomials_[static_cast<std::size_t>(m)];
      vander(r, m) = std::pow(nodes_[static_cast<std::size_t>(r)].x, px) *
                     std::pow(nodes_[static_cast<std::size_t>(r)].y, py);
    }
  }
  // Columns of V^{-1} hold monomial coefficients of each nodal function.
  const Eigen::MatrixXd inv = vander.fullPivLu().inverse();
  coeffs_.resize(static_cast<std::size_t>(n * n));
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index i = 0; i < n; ++i) coeffs_[static_cast<std::size_t>(m * n + i)] = inv(m, i);
  }
}

void LagrangeTriangle::eval(Point xi, std::span<double> values) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) values[i] = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const auto [px, py] = monomials_[m];
    const double mono = std::pow(xi.x, px) * std::pow(xi.y, py);
    for (std::size_t i = 0; i < n; ++i) values[i] += coeffs_[m * n + i] * mono;
  }
}

void LagrangeTriangle::eval_grad(Point xi, std::span<Vec2> grads) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) grads[i] = {0.0, 0.0};
  for (std::size_t m = 0; m < n; ++m) {
    const auto [px, py] = monomials_[m];
    const double dx = px > 0 ? px * std::pow(xi.x, px - 1) * std::pow(xi.y, py) : 0.0;
    const double dy = py > 0 ? py * std::pow(xi.x, px) * std::pow(xi.y, py - 1) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grads[i].x += coeffs_[m * n + i] * dx;
      grads[i].y += coeffs_[m * n + i] * dy;
    }
  }
}

LagrangeSegment::LagrangeSegment(int order) : order_(order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "polynomial order must be >= 1");
}

void LagrangeSegment::eval(double t, std::span<double> values) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) v *= (t - node(j)) / (node(i) - node(j));
    }
    values[i] = v;
  }
}

void LagrangeSegment::eval_deriv(double t, std::span<double> derivs) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == i) continue;
      double term = 1.0 / (node(i) - node(m));
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && j != m) term *= (t - node(j)) / (node(i) - node(j));
      }
      sum += term;
    }
    derivs[i] = sum;
  }
}

void LagrangeSegment::eval_second(double t, std::span<double> second) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == i) continue;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i || l == m) continue;
        double term = 1.0 / ((node(i) - node(m)) * (node(i) - node(l)));
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i && j != m && j != l) term *= (t - node(j)) / (node(i) - node(j));
        }
        sum += term;
      }
    }
    second[i] = sum;
  }
}

}  // namespace sdg
