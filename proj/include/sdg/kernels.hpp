#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops over quadrature points. Every kernel has a scalar
// reference and (on x86-64) an AVX2+FMA variant; the variant is chosen once at
// start-up from the CPU features, or forced with SDG_SIMD=scalar|avx2.
//
// Layout convention: a family of functions sampled at nq points is stored
// function-major, f_i(x_q) at index i * nq + q.

namespace sdg::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

struct KernelTable {
  // sum_q w[q] a[q] b[q]
  double (*weighted_dot)(const double* a, const double* b, const double* w, std::size_t n);
  // out[i * nb + j] = sum_q w[q] A[i * nq + q] B[j * nq + q]
  void (*weighted_gram)(const double* A, std::size_t na, const double* B, std::size_t nb, const double* w,
                        std::size_t nq, double* out);
  // out[q] = sum_i c[i] F[i * nq + q]
  void (*combine)(const double* c, const double* F, std::size_t nf, std::size_t nq, double* out);
};

bool available(Isa isa);
const KernelTable& table(Isa isa);
Isa active();
/// Overrides the dispatch decision; throws if the ISA is unavailable.
void set_active(Isa isa);

inline double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
  return table(active()).weighted_dot(a.data(), b.data(), w.data(), w.size());
}

inline void weighted_gram(std::span<const double> A, std::size_t na, std::span<const double> B, std::size_t nb,
                          std::span<const double> w, std::span<double> out) {
  table(active()).weighted_gram(A.data(), na, B.data(), nb, w.data(), w.size(), out.data());
}

inline void combine(std::span<const double> c, std::span<const double> F, std::size_t nq, std::span<double> out) {
  table(active()).combine(c.data(), F.data(), c.size(), nq, out.data());
}

namespace scalar {
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
void weighted_gram(const double* A, std::size_t na, const double* B, std::size_t nb, const double* w,
                   std::size_t nq, double* out);
void combine(const double* c, const double* F, std::size_t nf, std::size_t nq, double* out);
}  // namespace scalar

namespace avx2 {
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
void weighted_gram(const double* A, std::size_t na, const double* B, std::size_t nb, const double* w,
                   std::size_t nq, double* out);
void combine(const double* c, const double* F, std::size_t nf, std::size_t nq, double* out);
}  // namespace avx2

}  // namespace sdg::kernels
