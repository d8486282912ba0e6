#include <immintrin.h>

#include "sdg/kernels.hpp"

namespace sdg::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t q = 0;
  for (; q + 8 <= n; q += 8) {
    const __m256d wa0 = _mm256_mul_pd(_mm256_loadu_pd(w + q), _mm256_loadu_pd(a + q));
    const __m256d wa1 = _mm256_mul_pd(_mm256_loadu_pd(w + q + 4), _mm256_loadu_pd(a + q + 4));
    acc0 = _mm256_fmadd_pd(wa0, _mm256_loadu_pd(b + q), acc0);
    acc1 = _mm256_fmadd_pd(wa1, _mm256_loadu_pd(b + q + 4), acc1);
  }
  for (; q + 4 <= n; q += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + q), _mm256_loadu_pd(a + q));
    acc0 = _mm256_fmadd_pd(wa, _mm256_loadu_pd(b + q), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; q < n; ++q) s += w[q] * a[q] * b[q];
  return s;
}

void weighted_gram(const double* A, std::size_t na, const double* B, std::size_t nb, const double* w,
                   std::size_t nq, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const double* ai = A + i * nq;
    for (std::size_t j = 0; j < nb; ++j) {
      out[i * nb + j] = weighted_dot(ai, B + j * nq, w, nq);
    }
  }
}

void combine(const double* c, const double* F, std::size_t nf, std::size_t nq, double* out) {
  std::size_t q = 0;
  for (; q + 4 <= nq; q += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < nf; ++i) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(c[i]), _mm256_loadu_pd(F + i * nq + q), acc);
    }
    _mm256_storeu_pd(out + q, acc);
  }
  for (; q < nq; ++q) {
    double s = 0.0;
    for (std::size_t i = 0; i < nf; ++i) s += c[i] * F[i * nq + q];
    out[q] = s;
  }
}

}  // namespace sdg::kernels::avx2
