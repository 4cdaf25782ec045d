#include <immintrin.h>

#include <array>

#include "lane_common.hpp"
#include "vaxgame/kernels/outcome_kernels.hpp"

namespace vaxgame::kernels {

namespace {

inline __m256d pow_int_v(__m256d base, int n) {
  __m256d r = _mm256_set1_pd(1.0), b = base;
  while (n > 0) {
    if (n & 1) r = _mm256_mul_pd(r, b);
    b = _mm256_mul_pd(b, b);
    n >>= 1;
  }
  return r;
}

inline __m256d cdf_v(int l, int m, const double* coef, __m256d p) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lower = _mm256_cmp_pd(p, _mm256_set1_pd(0.5), _CMP_LE_OQ);
  const __m256d s = _mm256_blendv_pd(_mm256_sub_pd(one, p), p, lower);
  const __m256d kmax = _mm256_blendv_pd(_mm256_set1_pd(static_cast<double>(l - m - 1)),
                                        _mm256_set1_pd(static_cast<double>(m)), lower);
  const int kall = m > l - m - 1 ? m : l - m - 1;
  const __m256d q = _mm256_sub_pd(one, s);
  const __m256d ratio = _mm256_div_pd(s, q);
  __m256d term = pow_int_v(q, l);
  __m256d sum = term;
  for (int k = 0; k < kall; ++k) {
    term = _mm256_mul_pd(term, _mm256_mul_pd(ratio, _mm256_set1_pd(coef[k])));
    const __m256d take = _mm256_cmp_pd(_mm256_set1_pd(static_cast<double>(k)), kmax, _CMP_LT_OQ);
    sum = _mm256_blendv_pd(sum, _mm256_add_pd(sum, term), take);
  }
  sum = _mm256_min_pd(sum, one);
  return _mm256_blendv_pd(_mm256_sub_pd(one, sum), sum, lower);
}

inline void cdf_pmf_v(int l, int m, const double* coef, __m256d p, __m256d& F, __m256d& pm) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lower = _mm256_cmp_pd(p, _mm256_set1_pd(0.5), _CMP_LE_OQ);
  const __m256d s = _mm256_blendv_pd(_mm256_sub_pd(one, p), p, lower);
  const __m256d kmax = _mm256_blendv_pd(_mm256_set1_pd(static_cast<double>(l - m - 1)),
                                        _mm256_set1_pd(static_cast<double>(m)), lower);
  const __m256d cap = _mm256_blendv_pd(_mm256_set1_pd(static_cast<double>(l - m - 1)),
                                       _mm256_set1_pd(static_cast<double>(m - 1)), lower);
  const int kall = m > l - m ? m : l - m;
  const __m256d q = _mm256_sub_pd(one, s);
  const __m256d ratio = _mm256_div_pd(s, q);
  __m256d term = pow_int_v(q, l);
  __m256d sum = term;
  pm = _mm256_blendv_pd(_mm256_setzero_pd(), term, _mm256_cmp_pd(cap, _mm256_setzero_pd(), _CMP_LT_OQ));
  for (int k = 0; k < kall; ++k) {
    term = _mm256_mul_pd(term, _mm256_mul_pd(ratio, _mm256_set1_pd(coef[k])));
    const __m256d kk = _mm256_set1_pd(static_cast<double>(k));
    sum = _mm256_blendv_pd(sum, _mm256_add_pd(sum, term), _mm256_cmp_pd(kk, kmax, _CMP_LT_OQ));
    pm = _mm256_blendv_pd(pm, term, _mm256_cmp_pd(kk, cap, _CMP_EQ_OQ));
  }
  sum = _mm256_min_pd(sum, one);
  F = _mm256_blendv_pd(_mm256_sub_pd(one, sum), sum, lower);
}

__m256d solve_v(int l, int m, const double* coef, const double* table, __m256d x, __m256d active) {
  const __m256d one = _mm256_set1_pd(1.0), half = _mm256_set1_pd(0.5);
  const __m256d slope = _mm256_set1_pd(-static_cast<double>(l - m));
  const __m256d tol = _mm256_set1_pd(kRootStepTol);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d nint = _mm256_set1_pd(static_cast<double>(detail::kTableIntervals));
  __m256d cnt = _mm256_setzero_pd();
  for (int k = 1; k < detail::kTableIntervals; ++k)
    cnt = _mm256_add_pd(cnt, _mm256_and_pd(_mm256_cmp_pd(_mm256_set1_pd(table[k]), x, _CMP_GT_OQ), one));
  const __m128i idx = _mm256_cvtpd_epi32(cnt);
  const __m256d t_lo = _mm256_i32gather_pd(table, idx, 8);
  const __m256d t_hi = _mm256_i32gather_pd(table + 1, idx, 8);
  __m256d lo = _mm256_div_pd(cnt, nint), hi = _mm256_div_pd(_mm256_add_pd(cnt, one), nint);
  __m256d p = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_div_pd(_mm256_sub_pd(t_lo, x), _mm256_sub_pd(t_lo, t_hi)),
                                              _mm256_sub_pd(hi, lo)));
  const __m256d start_ok = _mm256_and_pd(_mm256_cmp_pd(p, lo, _CMP_GT_OQ), _mm256_cmp_pd(p, hi, _CMP_LT_OQ));
  p = _mm256_blendv_pd(_mm256_mul_pd(half, _mm256_add_pd(lo, hi)), p, start_ok);
  for (int it = 0; it < kRootMaxIter && _mm256_movemask_pd(active) != 0; ++it) {
    __m256d F, pm;
    cdf_pmf_v(l, m, coef, p, F, pm);
    const __m256d f = _mm256_sub_pd(F, x);
    const __m256d gt = _mm256_cmp_pd(f, _mm256_setzero_pd(), _CMP_GT_OQ);
    const __m256d lo2 = _mm256_blendv_pd(lo, p, gt);
    const __m256d hi2 = _mm256_blendv_pd(p, hi, gt);
    const __m256d dF = _mm256_div_pd(_mm256_mul_pd(slope, pm), _mm256_sub_pd(one, p));
    const __m256d newton = _mm256_sub_pd(p, _mm256_div_pd(f, dF));
    const __m256d small = _mm256_cmp_pd(_mm256_andnot_pd(sign, _mm256_sub_pd(newton, p)), tol, _CMP_LE_OQ);
    const __m256d inside =
        _mm256_and_pd(_mm256_cmp_pd(newton, lo2, _CMP_GT_OQ), _mm256_cmp_pd(newton, hi2, _CMP_LT_OQ));
    const __m256d cand = _mm256_blendv_pd(_mm256_mul_pd(half, _mm256_add_pd(lo2, hi2)), newton, inside);
    const __m256d step_small =
        _mm256_cmp_pd(_mm256_andnot_pd(sign, _mm256_sub_pd(cand, p)), tol, _CMP_LE_OQ);
    const __m256d next = _mm256_blendv_pd(cand, newton, small);
    lo = _mm256_blendv_pd(lo, lo2, active);
    hi = _mm256_blendv_pd(hi, hi2, active);
    p = _mm256_blendv_pd(p, next, active);
    active = _mm256_andnot_pd(_mm256_or_pd(small, step_small), active);
  }
  return p;
}

}  // namespace

OutcomeSums outcome_sums_avx2(const double* gamma, std::size_t n, const OutcomeParams& prm) {
  const int M = prm.M;
  const __m256d one = _mm256_set1_pd(1.0), zero = _mm256_setzero_pd();
  const __m256d cv = _mm256_set1_pd(prm.C_v), ci = _mm256_set1_pd(prm.C_i), g = _mm256_set1_pd(prm.g);
  __m256d sp = zero, snp = zero;
  const std::size_t nv = n - n % 4;
  std::array<double, 4> tp{}, tnp{};

  if (prm.z_bar >= M) {
    for (std::size_t i = 0; i < nv; i += 4) {
      const __m256d a = _mm256_sub_pd(_mm256_add_pd(cv, _mm256_loadu_pd(gamma + i)), g);
      const __m256d vacc = _mm256_cmp_pd(a, ci, _CMP_LT_OQ);
      sp = _mm256_add_pd(sp, _mm256_blendv_pd(zero, one, vacc));
      snp = _mm256_add_pd(snp, _mm256_blendv_pd(one, zero, vacc));
    }
    _mm256_storeu_pd(tp.data(), sp);
    _mm256_storeu_pd(tnp.data(), snp);
    for (std::size_t i = nv; i < n; ++i) {
      const bool vacc = prm.C_v + gamma[i] - prm.g < prm.C_i;
      tp[i % 4] = tp[i % 4] + (vacc ? 1.0 : 0.0);
      tnp[i % 4] = tnp[i % 4] + (vacc ? 0.0 : 1.0);
    }
  } else {
    const int l = M - 1, m = prm.z_bar - 1;
    const auto coef_l = detail::ratio_coefficients(l);
    const auto coef_M = detail::ratio_coefficients(M);
    const auto table = detail::root_table(l, m, coef_l.data());
    for (std::size_t i = 0; i < nv; i += 4) {
      const __m256d a = _mm256_sub_pd(_mm256_add_pd(cv, _mm256_loadu_pd(gamma + i)), g);
      const __m256d x = _mm256_div_pd(a, ci);
      const __m256d live = _mm256_and_pd(_mm256_cmp_pd(a, zero, _CMP_GT_OQ), _mm256_cmp_pd(a, ci, _CMP_LT_OQ));
      __m256d p = solve_v(l, m, coef_l.data(), table.data(), x, live);
      p = _mm256_blendv_pd(p, zero, _mm256_cmp_pd(a, ci, _CMP_GE_OQ));
      p = _mm256_blendv_pd(p, one, _mm256_cmp_pd(a, zero, _CMP_LE_OQ));
      sp = _mm256_add_pd(sp, p);
      snp = _mm256_add_pd(snp, cdf_v(M, m, coef_M.data(), p));
    }
    _mm256_storeu_pd(tp.data(), sp);
    _mm256_storeu_pd(tnp.data(), snp);
    for (std::size_t i = nv; i < n; ++i) {
      const OutcomeSums one_elem = outcome_sums_scalar(gamma + i, 1, prm);
      tp[i % 4] = tp[i % 4] + one_elem.sum_p;
      tnp[i % 4] = tnp[i % 4] + one_elem.sum_np;
    }
  }
  return {(tp[0] + tp[1]) + (tp[2] + tp[3]), (tnp[0] + tnp[1]) + (tnp[2] + tnp[3])};
}

void binom_cdf_batch_avx2(int l, int m, const double* p, double* out, std::size_t n) {
  if (m >= l || m < 0) {
    binom_cdf_batch_scalar(l, m, p, out, n);
    return;
  }
  const auto coef = detail::ratio_coefficients(l);
  const std::size_t nv = n - n % 4;
  for (std::size_t i = 0; i < nv; i += 4) _mm256_storeu_pd(out + i, cdf_v(l, m, coef.data(), _mm256_loadu_pd(p + i)));
  for (std::size_t i = nv; i < n; ++i) out[i] = detail::cdf_lane(l, m, coef.data(), p[i]);
}

}  // namespace vaxgame::kernels
