#include <atomic>
#include <cstdlib>
#include <string>

#include "sdg/error.hpp"
#include "sdg/kernels.hpp"

namespace sdg::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::weighted_dot, &scalar::weighted_gram, &scalar::combine};
#if defined(SDG_HAVE_AVX2)
constexpr KernelTable kAvx2{&avx2::weighted_dot, &avx2::weighted_gram, &avx2::combine};
#endif

Isa detect() {
  const char* env = std::getenv("SDG_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return Isa::Scalar;
  if (choice == "avx2" && available(Isa::Avx2)) return Isa::Avx2;
  return available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(SDG_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
#if defined(SDG_HAVE_AVX2)
  if (isa == Isa::Avx2) return kAvx2;
#endif
  (void)isa;
  return kScalar;
}

Isa active() { return current().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (!available(isa)) throw Error(ErrorCode::InvalidArgument, std::string("ISA unavailable: ") + to_string(isa));
  current().store(isa, std::memory_order_relaxed);
}

}  // namespace sdg::kernels
