#include <gtest/gtest.h>

#include <random>

#include "sdg/error.hpp"
#include "test_support.hpp"

using namespace sdg;

namespace {

// Smallest subset size reaching theta * total, by enumeration.
std::size_t minimal_cardinality(const std::vector<double>& v, double theta) {
  double total = 0.0;
  for (double x : v) total += x;
  const double target = theta * total - 1e-12 * total;
  std::size_t best = v.size();
  for (unsigned mask = 0; mask < (1u << v.size()); ++mask) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (mask & (1u << i)) {
        s += v[i];
        ++n;
      }
    if (s >= target) best = std::min(best, n);
  }
  return best;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

bool same_records(const ConvergenceHistory& a, const ConvergenceHistory& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const IterationRecord& x = a.records[i];
    const IterationRecord& y = b.records[i];
    if (x.n_dofs != y.n_dofs || x.n_elements != y.n_elements || x.n_marked != y.n_marked || x.eta != y.eta ||
        x.osc != y.osc || x.terms != y.terms)
      return false;
  }
  return true;
}

}  // namespace

TEST(Dorfler, LargestFirst) {
  const std::vector<double> v{16, 9, 4, 1};
  EXPECT_EQ(dorfler_mark(v, 0.5), std::vector<int>{0});
  const std::vector<double> shuffled{1, 4, 16, 9};
  EXPECT_EQ(dorfler_mark(shuffled, 0.5), std::vector<int>{2});
}

TEST(Dorfler, ThetaOneMarksAllNonzero) {
  const std::vector<double> v{3, 0, 1, 0, 2};
  EXPECT_EQ(dorfler_mark(v, 1.0), (std::vector<int>{0, 2, 4}));
}

TEST(Dorfler, TiesGoToLowerIds) {
  const std::vector<double> v{1, 1, 1, 1};
  EXPECT_EQ(dorfler_mark(v, 0.5), (std::vector<int>{0, 1}));
}

TEST(Dorfler, MatchesExhaustiveSearch) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<double> v(n);
    for (double& x : v) x = std::pow(u(rng), 3.0);
    const double theta = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    const std::vector<int> marked = dorfler_mark(v, theta);
    EXPECT_EQ(marked.size(), minimal_cardinality(v, theta)) << "trial " << trial;
    double total = 0.0, s = 0.0;
    for (double x : v) total += x;
    for (int i : marked) s += v[static_cast<std::size_t>(i)];
    EXPECT_GE(s, theta * total - 1e-12 * total);
    EXPECT_TRUE(std::is_sorted(marked.begin(), marked.end()));
  }
}

TEST(Dorfler, RejectsBadInput) {
  const std::vector<double> zero{0, 0, 0};
  EXPECT_EQ(code_of([&] { dorfler_mark(zero, 0.5); }), ErrorCode::AllZeroIndicators);
  const std::vector<double> v{1, 2};
  EXPECT_EQ(code_of([&] { dorfler_mark(v, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { dorfler_mark(v, 1.5); }), ErrorCode::InvalidArgument);
  const std::vector<double> neg{1, -2};
  EXPECT_EQ(code_of([&] { dorfler_mark(neg, 0.5); }), ErrorCode::InvalidArgument);
}

TEST(AmrConfig, Validation) {
  AmrConfig c;
  EXPECT_NO_THROW(c.validate());
  c.theta = 0.0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::InvalidArgument);
  c = {};
  c.order = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::InvalidArgument);
}

TEST(AmrLoop, UniformQuadruplesElements) {
  const ProblemSpec p = test::constant_problem(test::strip(true), 1.0);
  AmrConfig c;
  c.mode = RefinementMode::Uniform;
  c.max_iterations = 2;
  const ConvergenceHistory h = amr_loop(build_initial_mesh(p.domain, 1.0), p, nullptr, c);
  ASSERT_EQ(h.records.size(), 3u);
  EXPECT_EQ(h.records[0].n_elements, 2u);
  EXPECT_EQ(h.records[1].n_elements, 8u);
  EXPECT_EQ(h.records[2].n_elements, 32u);
  EXPECT_FALSE(h.halted);
}

TEST(AmrLoop, ThetaOneEqualsUniform) {
  const Benchmark b = case1(0.1);
  const PolygonalMesh m = build_initial_mesh(b.problem.domain, b.initial_h);
  AmrConfig uni;
  uni.mode = RefinementMode::Uniform;
  uni.max_iterations = 3;
  AmrConfig all = uni;
  all.mode = RefinementMode::Adaptive;
  all.theta = 1.0;
  const ConvergenceHistory a = amr_loop(m, b.problem, &*b.exact, uni);
  const ConvergenceHistory c = amr_loop(m, b.problem, &*b.exact, all);
  EXPECT_TRUE(same_records(a, c));
}

TEST(AmrLoop, DeterministicAndMonotone) {
  const Benchmark b = case2();
  const PolygonalMesh m = build_initial_mesh(b.problem.domain, b.initial_h);
  AmrConfig c;
  c.max_iterations = 6;
  const ConvergenceHistory a = amr_loop(m, b.problem, nullptr, c);
  const ConvergenceHistory d = amr_loop(m, b.problem, nullptr, c);
  EXPECT_TRUE(same_records(a, d));
  for (std::size_t i = 1; i < a.records.size(); ++i) {
    EXPECT_GT(a.records[i].n_dofs, a.records[i - 1].n_dofs);
    EXPECT_EQ(a.records[i].iteration, static_cast<int>(i));
  }
}

TEST(AmrLoop, StopsBeforeExceedingDofBudget) {
  const Benchmark b = lshape();
  AmrConfig c;
  c.max_dofs = 3000;
  const ConvergenceHistory h = amr_loop(build_initial_mesh(b.problem.domain, b.initial_h), b.problem, nullptr, c);
  ASSERT_FALSE(h.records.empty());
  for (const IterationRecord& r : h.records) EXPECT_LE(r.n_dofs, c.max_dofs);
  EXPECT_LT(h.records.size(), static_cast<std::size_t>(c.max_iterations + 1));
}

TEST(AmrLoop, MeshInvariantsHoldEveryIteration) {
  const Benchmark b = multifrac();
  AmrConfig c;
  c.max_iterations = 5;
  int seen = 0;
  amr_loop(build_initial_mesh(b.problem.domain, b.initial_h), b.problem, nullptr, c, [&](const IterationState& s) {
    EXPECT_LE(max_hanging_nodes_per_side(s.mesh), 1);
    double area = 0.0;
    for (const SubTriangle& t : s.mesh.triangles) area += t.area;
    EXPECT_NEAR(area, 3.0, 1e-12);
    ++seen;
  });
  EXPECT_EQ(seen, 6);
}

TEST(AmrLoop, RefinementConcentratesAtThinLayer) {
  const Benchmark b = case1(0.01);
  AmrConfig c;
  c.max_iterations = 6;
  double fraction = -1.0;
  amr_loop(build_initial_mesh(b.problem.domain, b.initial_h), b.problem, nullptr, c, [&](const IterationState& s) {
    if (s.iteration != 5) return;
    int near = 0;
    for (int el : s.marked) {
      for (int v : s.mesh.elements[static_cast<std::size_t>(el)].corners) {
        if (std::abs(s.mesh.points[static_cast<std::size_t>(v)].x - 1.0) <= 0.1) {
          ++near;
          break;
        }
      }
    }
    fraction = static_cast<double>(near) / static_cast<double>(s.marked.size());
  });
  EXPECT_GE(fraction, 0.6);
}
