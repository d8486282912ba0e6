#include "sdg/benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "sdg/error.hpp"

namespace sdg {

namespace {

constexpr double kThickness = 0.01;
constexpr double kXi = 0.75;
constexpr double kTol = 1e-12;

Fracture straight_fracture(std::string name, std::vector<Point> pts, std::vector<double> kappa) {
  Fracture f;
  f.name = std::move(name);
  f.vertices = std::move(pts);
  f.kappa_n = kappa;
  f.kappa_t = std::move(kappa);
  f.thickness = kThickness;
  return f;
}

DomainSpec unit_strip_with_fracture(std::vector<Point> pts, std::vector<double> kappa) {
  DomainSpec d;
  d.outline = {Box{{0.0, 0.0}, {2.0, 1.0}}};
  d.fractures = {straight_fracture("gamma", std::move(pts), std::move(kappa))};
  return d;
}

DomainSpec l_outline() {
  DomainSpec d;
  d.outline = {Box{{0.0, 0.0}, {2.0, 1.0}}, Box{{1.0, -1.0}, {2.0, 0.0}}};
  return d;
}

double sech2(double s) {
  const double c = std::cosh(s);
  return 1.0 / (c * c);
}

}  // namespace

Benchmark case1(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "case1 needs alpha > 0");
  Benchmark b;
  b.name = "case1";
  b.description = "single fracture, smooth tanh layer of width " + std::to_string(alpha);
  b.initial_h = 1.0;
  ProblemSpec& p = b.problem;
  p.name = b.name;
  p.xi = kXi;
  p.domain = unit_strip_with_fracture({{1.0, 0.0}, {1.0, 1.0}}, {100.0});
  const double eta = p.eta_gamma(0, 0);
  const double ag = p.alpha_gamma(0, 0);
  const double jump = 3.0 * eta / (8.0 * alpha);

  ExactSolution ex;
  ex.pressure = [=](Point x, int side) {
    return side == 2 ? x.y + 0.5 * std::tanh((x.x - 1.0) / (2.0 * alpha)) + 0.5 + jump
                     : x.y + 0.5 * std::tanh((x.x - 1.0) / alpha) + 0.5;
  };
  ex.grad_pressure = [=](Point x, int side) {
    return side == 2 ? Vec2{sech2((x.x - 1.0) / (2.0 * alpha)) / (4.0 * alpha), 1.0}
                     : Vec2{sech2((x.x - 1.0) / alpha) / (2.0 * alpha), 1.0};
  };
  ex.flux = [g = ex.grad_pressure](Point x, int side) { return -1.0 * g(x, side); };
  const double pg0 = 0.5 + 3.0 * eta / (16.0 * alpha) + ag / (4.0 * alpha);
  ex.fracture_pressure = [=](Point x, int) { return x.y + pg0; };
  ex.fracture_grad = [](Point, int) { return Vec2{0.0, 1.0}; };

  // f = div u = -laplace p.
  p.source = [=](Point x, int side) {
    if (side == 2) {
      const double s = (x.x - 1.0) / (2.0 * alpha);
      return std::tanh(s) * sech2(s) / (4.0 * alpha * alpha);
    }
    const double s = (x.x - 1.0) / alpha;
    return std::tanh(s) * sech2(s) / (alpha * alpha);
  };
  // p_G is linear, so l f_G = -[u.n] = 1 / (4 alpha).
  p.fracture_source = [=](Point, int) { return 1.0 / (4.0 * alpha * kThickness); };
  p.boundary.kind = [](Point) { return BoundaryKind::Dirichlet; };
  p.boundary.pressure = ex.pressure;
  p.tips = {{TipCondition{BoundaryKind::Dirichlet, pg0}, TipCondition{BoundaryKind::Dirichlet, 1.0 + pg0}}};
  b.exact = std::move(ex);
  return b;
}

Benchmark case2() {
  Benchmark b;
  b.name = "case2";
  b.description = "single fracture with a low-permeability barrier in its middle part";
  b.initial_h = 0.25;
  ProblemSpec& p = b.problem;
  p.name = b.name;
  p.xi = kXi;
  p.domain = unit_strip_with_fracture({{1.0, 0.0}, {1.0, 0.25}, {1.0, 0.75}, {1.0, 1.0}}, {200.0, 0.002, 200.0});
  p.boundary.kind = [](Point m) {
    return (std::abs(m.x) < kTol || std::abs(m.x - 2.0) < kTol) ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
  };
  p.boundary.pressure = [](Point x, int) { return x.x > 1.0 ? 1.0 : 0.0; };
  p.tips = {{TipCondition{}, TipCondition{}}};
  return b;
}

Benchmark lshape() {
  Benchmark b;
  b.name = "lshape";
  b.description = "L-shaped domain, fracture polyline with a barrier segment";
  b.initial_h = 0.5;
  ProblemSpec& p = b.problem;
  p.name = b.name;
  p.xi = kXi;
  p.domain = l_outline();
  p.domain.fractures = {straight_fracture(
      "gamma", {{0.5, 1.0}, {0.5, 0.5}, {1.0, 0.5}, {1.5, 0.5}, {1.5, 0.0}, {1.5, -1.0}},
      {100.0, 100.0, 0.001, 0.001, 100.0})};
  p.boundary.kind = [](Point m) {
    const bool top = std::abs(m.y - 1.0) < kTol;
    const bool bottom = std::abs(m.y + 1.0) < kTol && m.x > 1.0 - kTol;
    return top || bottom ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
  };
  p.boundary.pressure = [](Point x, int) { return x.y > 0.0 ? 1.0 : 0.0; };
  p.tips = {{TipCondition{BoundaryKind::Dirichlet, 1.0}, TipCondition{BoundaryKind::Dirichlet, 0.0}}};
  return b;
}

Benchmark multifrac() {
  Benchmark b;
  b.name = "multifrac";
  b.description = "L-shaped domain with four disjoint fractures";
  b.initial_h = 0.5;
  ProblemSpec& p = b.problem;
  p.name = b.name;
  p.xi = kXi;
  p.domain = l_outline();
  p.domain.fractures = {
      straight_fracture("gamma1", {{0.5, 0.5}, {1.0, 0.5}}, {100.0}),
      straight_fracture("gamma2", {{1.5, 0.5}, {1.5, 1.0}}, {0.001}),
      straight_fracture("gamma3", {{1.5, 0.0}, {2.0, 0.0}}, {0.01}),
      straight_fracture("gamma4", {{1.5, -0.5}, {1.5, -1.0}}, {100.0}),
  };
  p.boundary.kind = [](Point m) {
    const bool left = std::abs(m.x) < kTol;
    const bool bottom = std::abs(m.y + 1.0) < kTol && m.x > 1.0 - kTol;
    return left || bottom ? BoundaryKind::Dirichlet : BoundaryKind::Neumann;
  };
  p.boundary.pressure = [](Point x, int) { return std::abs(x.x) < kTol ? 1.0 : 0.0; };
  p.tips = {{TipCondition{}, TipCondition{}},
            {TipCondition{}, TipCondition{}},
            {TipCondition{}, TipCondition{}},
            {TipCondition{}, TipCondition{BoundaryKind::Dirichlet, 0.0}}};
  return b;
}

Benchmark linear_patch() {
  Benchmark b;
  b.name = "patch";
  b.description = "linear pressure p = y, exactly representable";
  b.initial_h = 1.0;
  ProblemSpec& p = b.problem;
  p.name = b.name;
  p.xi = kXi;
  p.domain = unit_strip_with_fracture({{1.0, 0.0}, {1.0, 1.0}}, {100.0});
  ExactSolution ex;
  ex.pressure = [](Point x, int) { return x.y; };
  ex.grad_pressure = [](Point, int) { return Vec2{0.0, 1.0}; };
  ex.flux = [](Point, int) { return Vec2{0.0, -1.0}; };
  ex.fracture_pressure = [](Point x, int) { return x.y; };
  ex.fracture_grad = [](Point, int) { return Vec2{0.0, 1.0}; };
  p.boundary.kind = [](Point) { return BoundaryKind::Dirichlet; };
  p.boundary.pressure = ex.pressure;
  p.tips = {{TipCondition{BoundaryKind::Dirichlet, 0.0}, TipCondition{BoundaryKind::Dirichlet, 1.0}}};
  b.exact = std::move(ex);
  return b;
}

std::vector<std::string> benchmark_names() {
  return {"case1-a0.1", "case1-a0.01", "case2", "lshape", "multifrac", "patch"};
}

Benchmark make_benchmark(const std::string& name) {
  if (name == "case1-a0.1") {
    Benchmark b = case1(0.1);
    b.name = name;
    return b;
  }
  if (name == "case1-a0.01") {
    Benchmark b = case1(0.01);
    b.name = name;
    return b;
  }
  if (name == "case2") return case2();
  if (name == "lshape") return lshape();
  if (name == "multifrac") return multifrac();
  if (name == "patch") return linear_patch();
  throw Error(ErrorCode::InvalidArgument, "unknown benchmark '" + name + "'");
}

double verify_interface(const ExactSolution& exact, const ProblemSpec& problem, int samples) {
  if (!exact.pressure || !exact.flux || !exact.fracture_pressure) {
    throw Error(ErrorCode::NoExactSolution, "interface check needs bulk and fracture exact fields");
  }
  double worst = 0.0;
  for (std::size_t f = 0; f < problem.domain.fractures.size(); ++f) {
    const Fracture& fr = problem.domain.fractures[f];
    const double len = fr.length();
    for (int i = 0; i < samples; ++i) {
      const double s = (i + 0.5) / samples * len;
      const Point x = fr.point_at(s);
      const auto [seg, unused] = fr.locate(x);
      (void)unused;
      const Vec2 n = fr.normal(seg);
      const int fi = static_cast<int>(f);
      const int si = static_cast<int>(seg);
      const double p1 = exact.pressure(x, 1);
      const double p2 = exact.pressure(x, 2);
      const double un1 = dot(exact.flux(x, 1), n);
      const double un2 = dot(exact.flux(x, 2), n);
      const double c1 = problem.eta_gamma(fi, si) * 0.5 * (un1 + un2) - (p1 - p2);
      const double c2 = problem.alpha_gamma(fi, si) * (un1 - un2) - (0.5 * (p1 + p2) - exact.fracture_pressure(x, fi));
      worst = std::max({worst, std::abs(c1), std::abs(c2)});
    }
  }
  return worst;
}

}  // namespace sdg
