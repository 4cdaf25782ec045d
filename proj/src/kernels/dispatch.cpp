#include <atomic>
#include <cstdlib>
#include <cstring>

#include "vaxgame/kernels/outcome_kernels.hpp"

namespace vaxgame::kernels {

namespace {

Backend detect() {
  if (const char* env = std::getenv("VAXGAME_KERNEL"); env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> b{static_cast<int>(detect())};
  return b;
}

}  // namespace

bool avx2_available() {
#if defined(VAXGAME_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return static_cast<Backend>(selected().load()); }

bool force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) return false;
  selected().store(static_cast<int>(b));
  return true;
}

void reset_backend() { selected().store(static_cast<int>(detect())); }

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

OutcomeSums outcome_sums(const double* gamma, std::size_t n, const OutcomeParams& prm) {
#if defined(VAXGAME_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return outcome_sums_avx2(gamma, n, prm);
#endif
  return outcome_sums_scalar(gamma, n, prm);
}

void binom_cdf_batch(int l, int m, const double* p, double* out, std::size_t n) {
#if defined(VAXGAME_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    binom_cdf_batch_avx2(l, m, p, out, n);
    return;
  }
#endif
  binom_cdf_batch_scalar(l, m, p, out, n);
}

}  // namespace vaxgame::kernels
