#include "sdg/kernels.hpp"

namespace sdg::kernels::scalar {

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t q = 0; q < n; ++q) s += w[q] * a[q] * b[q];
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
  for (std::size_t q = 0; q < nq; ++q) out[q] = 0.0;
  for (std::size_t i = 0; i < nf; ++i) {
    const double ci = c[i];
    const double* fi = F + i * nq;
    for (std::size_t q = 0; q < nq; ++q) out[q] += ci * fi[q];
  }
}

}  // namespace sdg::kernels::scalar
