#pragma once

#include <cstddef>

namespace vaxgame::kernels {

enum class Backend { scalar, avx2 };

struct OutcomeParams {
  int M = 1;
  int z_bar = 1;
  double C_v = 0.0;
  double C_i = 1.0;
  double g = 0.0;
};

// sums over a batch of Gamma_{T-1} draws of p(g, .) and of F_M(z_bar-1; p(g, .))
struct OutcomeSums {
  double sum_p = 0.0;
  double sum_np = 0.0;
};

// per-sample root of F_{M-1}(z_bar-1; p) = x: safeguarded Newton inside a shrinking bracket
inline constexpr int kRootMaxIter = 200;
inline constexpr double kRootStepTol = 1e-14;

OutcomeSums outcome_sums_scalar(const double* gamma, std::size_t n, const OutcomeParams& prm);
void binom_cdf_batch_scalar(int l, int m, const double* p, double* out, std::size_t n);

#if defined(VAXGAME_HAVE_AVX2)
OutcomeSums outcome_sums_avx2(const double* gamma, std::size_t n, const OutcomeParams& prm);
void binom_cdf_batch_avx2(int l, int m, const double* p, double* out, std::size_t n);
#endif

bool avx2_available();
Backend active_backend();
// pins the backend; avx2 is refused when unavailable
bool force_backend(Backend b);
void reset_backend();
const char* backend_name(Backend b);

OutcomeSums outcome_sums(const double* gamma, std::size_t n, const OutcomeParams& prm);
void binom_cdf_batch(int l, int m, const double* p, double* out, std::size_t n);

}  // namespace vaxgame::kernels
