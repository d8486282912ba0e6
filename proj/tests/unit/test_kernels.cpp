#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sdg/kernels.hpp"

using namespace sdg;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double scale(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

TEST(Kernels, ScalarReferenceIsPlainLoop) {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6}, w{0.5, 1, 2};
  EXPECT_DOUBLE_EQ(kernels::scalar::weighted_dot(a.data(), b.data(), w.data(), 3), 0.5 * 4 + 10 + 36);
  // F: two functions at three points.
  const std::vector<double> F{1, 2, 3, 10, 20, 30}, c{2, -1};
  std::vector<double> out(3);
  kernels::scalar::combine(c.data(), F.data(), 2, 3, out.data());
  EXPECT_DOUBLE_EQ(out[0], -8);
  EXPECT_DOUBLE_EQ(out[2], -24);
  std::vector<double> g(4);
  kernels::scalar::weighted_gram(F.data(), 2, F.data(), 2, w.data(), 3, g.data());
  EXPECT_DOUBLE_EQ(g[1], 10 * (0.5 * 1 + 2 * 2 + 2 * 9));
  EXPECT_DOUBLE_EQ(g[1], g[2]);
}

TEST(Kernels, Avx2MatchesScalar) {
  if (!kernels::available(kernels::Isa::Avx2)) GTEST_SKIP() << "AVX2 not available on this host";
  std::mt19937 rng(42);
  for (std::size_t nq : {1u, 3u, 4u, 5u, 7u, 8u, 13u, 16u, 31u, 64u, 100u}) {
    for (std::size_t na : {1u, 3u, 6u, 10u}) {
      const auto w = random_vector(nq, rng);
      const auto A = random_vector(na * nq, rng);
      const auto B = random_vector(3 * nq, rng);
      const double d_s = kernels::scalar::weighted_dot(A.data(), B.data(), w.data(), nq);
      const double d_v = kernels::avx2::weighted_dot(A.data(), B.data(), w.data(), nq);
      EXPECT_NEAR(d_s, d_v, 1e-14 * static_cast<double>(nq));

      std::vector<double> gs(na * 3), gv(na * 3);
      kernels::scalar::weighted_gram(A.data(), na, B.data(), 3, w.data(), nq, gs.data());
      kernels::avx2::weighted_gram(A.data(), na, B.data(), 3, w.data(), nq, gv.data());
      for (std::size_t i = 0; i < gs.size(); ++i) EXPECT_NEAR(gs[i], gv[i], 1e-14 * static_cast<double>(nq));

      const auto c = random_vector(na, rng);
      std::vector<double> cs(nq), cv(nq);
      kernels::scalar::combine(c.data(), A.data(), na, nq, cs.data());
      kernels::avx2::combine(c.data(), A.data(), na, nq, cv.data());
      for (std::size_t q = 0; q < nq; ++q) EXPECT_NEAR(cs[q], cv[q], 1e-14 * (1.0 + scale(cs)) * static_cast<double>(na));
    }
  }
}

TEST(Kernels, DispatchCanBeForced) {
  const kernels::Isa before = kernels::active();
  kernels::set_active(kernels::Isa::Scalar);
  EXPECT_EQ(kernels::active(), kernels::Isa::Scalar);
  const std::vector<double> a{1, 2}, w{1, 1};
  EXPECT_DOUBLE_EQ(kernels::weighted_dot(a, a, w), 5.0);
  if (kernels::available(kernels::Isa::Avx2)) {
    kernels::set_active(kernels::Isa::Avx2);
    EXPECT_EQ(kernels::active(), kernels::Isa::Avx2);
    EXPECT_DOUBLE_EQ(kernels::weighted_dot(a, a, w), 5.0);
  } else {
    EXPECT_ANY_THROW(kernels::set_active(kernels::Isa::Avx2));
  }
  kernels::set_active(before);
  EXPECT_STREQ(kernels::to_string(kernels::Isa::Scalar), "scalar");
}
