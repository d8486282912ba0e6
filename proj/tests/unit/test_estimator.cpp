#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "sdg/error.hpp"
#include "sdg/estimator.hpp"
#include "sdg/fields.hpp"
#include "test_support.hpp"

using namespace sdg;

namespace {

constexpr double kPi = std::numbers::pi;

struct Estimated {
  test::Solved s;
  EstimatorBreakdown est;
};

Estimated estimate_on(const PolygonalMesh& mesh, const ProblemSpec& problem, int order = 1) {
  Estimated e{test::solve_on(mesh, problem, order), {}};
  e.est = compute_estimator(e.s.mesh, problem, e.s.dofs, e.s.solution);
  return e;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double sum_squared(const EstimatorBreakdown& b) {
  double s = 0.0;
  for (double x : b.squared) s += x;
  return s;
}

// Gauss-Legendre on [0, 1] by Newton iteration on P_n.
void gauss01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

// h_T^2 ||f - P1 f||^2_T on one triangle, projection in the monomial basis {1, x, y},
// integrals by a collapsed tensor Gauss rule.
double p1_oscillation_squared(Point a, Point b, Point c, const std::function<double(Point)>& f) {
  std::vector<double> x, w;
  gauss01(30, x, w);
  const double det = std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  std::vector<Point> pts;
  std::vector<double> wts;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double s = x[i], t = x[j] * (1.0 - x[i]);
      pts.push_back(a + s * (b - a) + t * (c - a));
      wts.push_back(w[i] * w[j] * (1.0 - x[i]) * det);
    }
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d r = Eigen::Vector3d::Zero();
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const Eigen::Vector3d phi(1.0, pts[q].x, pts[q].y);
    m += wts[q] * phi * phi.transpose();
    r += wts[q] * f(pts[q]) * phi;
  }
  const Eigen::Vector3d coef = m.ldlt().solve(r);
  double e2 = 0.0;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const double d = f(pts[q]) - coef.dot(Eigen::Vector3d(1.0, pts[q].x, pts[q].y));
    e2 += wts[q] * d * d;
  }
  const double h = std::max({norm(b - a), norm(c - b), norm(a - c)});
  return h * h * e2;
}

std::vector<Benchmark> all_benchmarks() {
  std::vector<Benchmark> out;
  for (const std::string& n : benchmark_names()) out.push_back(make_benchmark(n));
  return out;
}

}  // namespace

TEST(Estimator, ConstantSolutionHasZeroEstimate) {
  for (bool refined : {false, true}) {
    PolygonalMesh m = build_initial_mesh(test::strip(true), 0.5);
    if (refined) m = refine(m, std::vector<int>{0, 3});
    for (int k : {1, 2}) {
      const Estimated e = estimate_on(m, test::constant_problem(m.domain, -1.25), k);
      EXPECT_LE(e.est.eta, 1e-10) << "k=" << k << " refined=" << refined;
      for (double t : e.est.terms) EXPECT_GE(t, 0.0);
    }
  }
}

TEST(Estimator, LinearPatchHasZeroEstimate) {
  const Benchmark b = linear_patch();
  PolygonalMesh m = build_initial_mesh(b.problem.domain, b.initial_h);
  for (int level = 0; level < 3; ++level) {
    const Estimated e = estimate_on(m, b.problem, 1);
    EXPECT_LE(e.est.eta, 1e-9) << "level " << level;
    m = refine(m, std::vector<int>{0});
  }
}

TEST(Estimator, ScalesWithData) {
  for (const Benchmark& b : all_benchmarks()) {
    const PolygonalMesh m = test::refine_uniformly(build_initial_mesh(b.problem.domain, b.initial_h), 1);
    const Estimated e1 = estimate_on(m, b.problem);
    const Estimated e2 = estimate_on(m, test::scaled(b.problem, -2.0));
    const double scale = std::max(e1.est.eta, 1e-300);
    for (std::size_t i = 0; i < 8; ++i)
      EXPECT_NEAR(e2.est.terms[i], 2.0 * e1.est.terms[i], 1e-9 * scale) << b.name << " term " << i + 1;
    EXPECT_NEAR(e2.est.osc, 2.0 * e1.est.osc, 1e-12 * std::max(1.0, e1.est.osc)) << b.name;
    EXPECT_LE((e2.s.solution.p + 2.0 * e1.s.solution.p).cwiseAbs().maxCoeff(),
              1e-9 * std::max(1.0, e1.s.solution.p.cwiseAbs().maxCoeff()))
        << b.name;
  }
}

TEST(Estimator, LocalizationIsAPartition) {
  std::mt19937 rng(3);
  for (const Benchmark& b : all_benchmarks()) {
    const PolygonalMesh m = test::refine_randomly(build_initial_mesh(b.problem.domain, b.initial_h), 2, 0.3, rng);
    const Estimated e = estimate_on(m, b.problem);
    const double total = sum_squared(e.est);
    EXPECT_NEAR(sum(e.est.element_indicators), total, 1e-12 * std::max(1.0, total)) << b.name;
    double eta = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      EXPECT_NEAR(e.est.terms[i], std::sqrt(e.est.squared[i]), 1e-15 * (1.0 + e.est.terms[i]));
      eta += e.est.terms[i];
    }
    EXPECT_NEAR(e.est.eta, eta, 1e-14 * (1.0 + eta));
    for (double v : e.est.element_indicators) EXPECT_GE(v, 0.0);
  }
}

TEST(Estimator, SingleElementLocalizationIsGlobal) {
  const DomainSpec d = test::unit_square();
  ProblemSpec p = test::constant_problem(d, 0.0);
  p.source = [](Point x, int) { return std::sin(3.0 * x.x) + x.y * x.y; };
  const Estimated e = estimate_on(build_initial_mesh(d, 1.0), p);
  ASSERT_EQ(e.est.element_indicators.size(), 1u);
  EXPECT_NEAR(e.est.element_indicators[0], sum_squared(e.est), 1e-14 * sum_squared(e.est));
  EXPECT_GT(e.est.eta, 0.0);
}

TEST(Estimator, MirroredSquaresHaveEqualIndicators) {
  const DomainSpec d = test::strip(true);
  ProblemSpec p = test::constant_problem(d, 1.0);
  p.source = [](Point x, int) { return 1.0 + (x.x - 1.0) * (x.x - 1.0) + x.y; };
  p.fracture_source = [](Point x, int) { return std::cos(x.y); };
  for (int k : {1, 2}) {
    const Estimated e = estimate_on(build_initial_mesh(d, 1.0), p, k);
    ASSERT_EQ(e.est.element_indicators.size(), 2u);
    EXPECT_GT(e.est.element_indicators[0], 1e-6);
    EXPECT_NEAR(e.est.element_indicators[0], e.est.element_indicators[1], 1e-12 * e.est.element_indicators[0]);
  }
}

TEST(Estimator, FractureResidualOnOneEdge) {
  const DomainSpec d = test::strip(true);
  ProblemSpec p = test::constant_problem(d, 0.0);
  p.source = [](Point x, int side) { return side == 0 ? 1.0 + x.y : 2.0 - x.x; };
  // Linear f_G keeps the integrand within the residual quadrature degree.
  p.fracture_source = [](Point x, int) { return 1.0 + 3.0 * x.y; };
  p.tips[0][1].value = 0.5;  // p_G linear in y, clamped at both tips
  const Estimated e = estimate_on(build_initial_mesh(d, 1.0), p, 1);
  ASSERT_EQ(e.s.dofs.W.n_free, 0u);
  const PolygonalMesh& m = e.s.mesh;
  int fe = -1;
  for (std::size_t i = 0; i < m.edges.size(); ++i)
    if (m.edges[i].kind == EdgeKind::Fracture) fe = static_cast<int>(i);
  const Edge& edge = m.edges[static_cast<std::size_t>(fe)];
  const FieldEvaluator fields(m, e.s.dofs, e.s.solution);
  const double ell = d.fractures[0].thickness;
  const Point a = m.points[edge.pts[0]], b = m.points[edge.pts[1]];
  // Composite Simpson on 400 panels.
  const int n = 400;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const Point x = a + t * (b - a);
    const double jump = dot(fields.flux(static_cast<std::size_t>(edge.tri[0]), x), edge.normal) -
                        dot(fields.flux(static_cast<std::size_t>(edge.tri[1]), x), edge.normal);
    const double r = ell * (1.0 + 3.0 * x.y) + jump;
    const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += wt * r * r;
  }
  s *= edge.length / (3.0 * n);
  const double expected = edge.length * edge.length * s;
  EXPECT_NEAR(e.est.squared[4], expected, 1e-9 * expected);
}

TEST(Oscillation, VanishesForPolynomialData) {
  const PolygonalMesh m = build_initial_mesh(test::strip(true), 0.5);
  for (int k : {1, 2, 3}) {
    ProblemSpec p = test::constant_problem(m.domain, 0.0);
    p.source = [k](Point x, int) { return std::pow(x.x, k) - 2.0 * std::pow(x.y, k - 1) * x.x + 0.5; };
    p.fracture_source = [k](Point x, int) { return std::pow(x.y, k); };
    EXPECT_LE(data_oscillation(m, p, k), 1e-12) << "k=" << k;
  }
}

TEST(Oscillation, MatchesIndependentProjection) {
  const DomainSpec d = test::unit_square();
  ProblemSpec p = test::constant_problem(d, 0.0);
  const auto f = [](Point x) { return std::sin(kPi * x.x); };
  p.source = [f](Point x, int) { return f(x); };
  const PolygonalMesh m = build_initial_mesh(d, 1.0);
  ASSERT_EQ(m.triangles.size(), 4u);
  double expected = 0.0;
  for (const SubTriangle& t : m.triangles)
    expected += p1_oscillation_squared(m.points[t.pts[0]], m.points[t.pts[1]], m.points[t.pts[2]], f);
  EXPECT_NEAR(data_oscillation(m, p, 1), std::sqrt(expected), 1e-8);
}

TEST(Oscillation, DecaysUnderUniformRefinement) {
  const DomainSpec d = test::strip(true);
  ProblemSpec p = test::constant_problem(d, 0.0);
  p.source = [](Point x, int) { return std::sin(kPi * x.x) * std::cos(2.0 * x.y); };
  p.fracture_source = [](Point x, int) { return std::exp(2.0 * x.y); };
  PolygonalMesh m = build_initial_mesh(d, 0.5);
  double prev = data_oscillation(m, p, 1);
  for (int level = 0; level < 3; ++level) {
    m = test::refine_uniformly(m, 1);
    const double cur = data_oscillation(m, p, 1);
    EXPECT_GE(std::log2(prev / cur), 1.0) << "level " << level;
    prev = cur;
  }
}

TEST(TrueError, VanishesOnRepresentableSolution) {
  const Benchmark b = linear_patch();
  const Estimated e = estimate_on(build_initial_mesh(b.problem.domain, b.initial_h), b.problem);
  const ErrorReport r = true_error(e.s.mesh, b.problem, e.s.dofs, e.s.solution, *b.exact, e.est.eta);
  for (double v : {r.flux_q, r.interface_avg, r.interface_jump, r.grad, r.fracture_grad, r.flux_jump, r.flux_avg,
                   r.total})
    EXPECT_LE(v, 1e-9);
  EXPECT_TRUE(std::isnan(r.effectivity));
}

TEST(TrueError, NormIsSumOfSquaredParts) {
  const Benchmark b = case1(0.1);
  const Estimated e = estimate_on(build_initial_mesh(b.problem.domain, b.initial_h), b.problem);
  const ErrorReport r = true_error(e.s.mesh, b.problem, e.s.dofs, e.s.solution, *b.exact, e.est.eta);
  const double parts = r.flux_q * r.flux_q + r.v_norm * r.v_norm + r.flux_jump * r.flux_jump + r.flux_avg * r.flux_avg;
  EXPECT_NEAR(r.total * r.total, parts, 1e-12 * parts);
  const double v = r.interface_avg * r.interface_avg + r.interface_jump * r.interface_jump + r.grad * r.grad +
                   r.fracture_grad * r.fracture_grad;
  EXPECT_NEAR(r.v_norm * r.v_norm, v, 1e-12 * v);
  EXPECT_NEAR(r.effectivity, e.est.eta / r.total, 1e-14);
}

TEST(TrueError, RequiresExactSolution) {
  const Benchmark b = case2();
  const Estimated e = estimate_on(build_initial_mesh(b.problem.domain, b.initial_h), b.problem);
  ExactSolution none;
  try {
    true_error(e.s.mesh, b.problem, e.s.dofs, e.s.solution, none);
    FAIL() << "no exception";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NoExactSolution);
  }
}

TEST(TrueError, UniformRefinementOnSmoothProblem) {
  const Benchmark b = case1(0.1);
  PolygonalMesh m = build_initial_mesh(b.problem.domain, b.initial_h);
  std::vector<double> eta, err;
  for (int level = 0; level < 4; ++level) {
    const Estimated e = estimate_on(m, b.problem);
    const ErrorReport r = true_error(e.s.mesh, b.problem, e.s.dofs, e.s.solution, *b.exact, e.est.eta);
    EXPECT_GE(r.effectivity, 1.0) << "level " << level;
    EXPECT_LE(r.effectivity, 5.0) << "level " << level;
    eta.push_back(e.est.eta);
    err.push_back(r.total);
    m = test::refine_uniformly(m, 1);
  }
  for (std::size_t i = 2; i < eta.size(); ++i) {
    EXPECT_LT(eta[i], eta[i - 1]);
    EXPECT_LT(err[i], err[i - 1]);
  }
}

TEST(MassBalance, DualVolumesAreConservative) {
  for (const std::string& name : {"case1-a0.1", "case2", "multifrac"}) {
    const Benchmark b = make_benchmark(name);
    std::mt19937 rng(11);
    const PolygonalMesh m = test::refine_randomly(build_initial_mesh(b.problem.domain, b.initial_h), 2, 0.4, rng);
    for (int k : {1, 2}) {
      const test::Solved s = test::solve_on(m, b.problem, k);
      const std::vector<double> bal = mass_balances(s.mesh, b.problem, s.dofs, s.solution);
      ASSERT_EQ(bal.size(), s.mesh.edges.size());
      int checked = 0;
      for (std::size_t i = 0; i < bal.size(); ++i) {
        if (s.mesh.edges[i].kind != EdgeKind::Interior) {
          EXPECT_TRUE(std::isnan(bal[i]));
          continue;
        }
        EXPECT_LE(std::abs(bal[i]), 1e-10) << name << " edge " << i;
        EXPECT_NEAR(bal[i], mass_balance(s.mesh, b.problem, s.dofs, s.solution, static_cast<int>(i)), 1e-14);
        ++checked;
      }
      EXPECT_GT(checked, 0);
    }
  }
}
