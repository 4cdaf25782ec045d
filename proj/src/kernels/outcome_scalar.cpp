#include <array>

#include "lane_common.hpp"
#include "vaxgame/kernels/outcome_kernels.hpp"

namespace vaxgame::kernels {

using detail::cdf_lane;

OutcomeSums outcome_sums_scalar(const double* gamma, std::size_t n, const OutcomeParams& prm) {
  std::array<double, 4> sp{}, snp{};
  const int M = prm.M;
  if (prm.z_bar >= M) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = prm.C_v + gamma[i] - prm.g;
      const bool vacc = a < prm.C_i;
      sp[i % 4] = sp[i % 4] + (vacc ? 1.0 : 0.0);
      snp[i % 4] = snp[i % 4] + (vacc ? 0.0 : 1.0);
    }
  } else {
    const int l = M - 1, m = prm.z_bar - 1;
    const auto coef_l = detail::ratio_coefficients(l);
    const auto coef_M = detail::ratio_coefficients(M);
    const auto table = detail::root_table(l, m, coef_l.data());
    for (std::size_t i = 0; i < n; ++i) {
      const double a = prm.C_v + gamma[i] - prm.g;
      const double x = a / prm.C_i;
      double p;
      if (a <= 0.0) {
        p = 1.0;
      } else if (a >= prm.C_i) {
        p = 0.0;
      } else {
        p = detail::solve_lane(l, m, coef_l.data(), table, x, kRootMaxIter, kRootStepTol);
      }
      sp[i % 4] = sp[i % 4] + p;
      snp[i % 4] = snp[i % 4] + cdf_lane(M, m, coef_M.data(), p);
    }
  }
  return {(sp[0] + sp[1]) + (sp[2] + sp[3]), (snp[0] + snp[1]) + (snp[2] + snp[3])};
}

void binom_cdf_batch_scalar(int l, int m, const double* p, double* out, std::size_t n) {
  if (m >= l || m < 0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = m < 0 ? 0.0 : 1.0;
    return;
  }
  const auto coef = detail::ratio_coefficients(l);
  for (std::size_t i = 0; i < n; ++i) out[i] = cdf_lane(l, m, coef.data(), p[i]);
}

}  // namespace vaxgame::kernels
