#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace vaxgame::kernels::detail {

inline std::vector<double> ratio_coefficients(int l) {
  std::vector<double> c(static_cast<std::size_t>(std::max(l, 1)));
  for (int k = 0; k < l; ++k) c[k] = static_cast<double>(l - k) / static_cast<double>(k + 1);
  return c;
}

inline double pow_int(double base, int n) {
  double r = 1.0, b = base;
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

// F_l(m; p) for 0 <= m < l, summing the side with ratio <= 1; every vector variant follows this order
inline double cdf_lane(int l, int m, const double* coef, double p) {
  const bool lower = p <= 0.5;
  const double s = lower ? p : 1.0 - p;
  const int kmax = lower ? m : l - m - 1;
  const int kall = std::max(m, l - m - 1);
  const double ratio = s / (1.0 - s);
  double term = pow_int(1.0 - s, l);
  double sum = term;
  for (int k = 0; k < kall; ++k) {
    term = term * (ratio * coef[k]);
    if (k < kmax) sum = sum + term;
  }
  sum = std::min(sum, 1.0);
  return lower ? sum : 1.0 - sum;
}

struct CdfPmf {
  double F = 0.0;
  double pm = 0.0;  // b_l(m; p)
};

// F_l(m; p) and the point mass at m from the same recurrence, 0 <= m < l
inline CdfPmf cdf_pmf_lane(int l, int m, const double* coef, double p) {
  const bool lower = p <= 0.5;
  const double s = lower ? p : 1.0 - p;
  const int kmax = lower ? m : l - m - 1;
  const int cap = lower ? m - 1 : l - m - 1;
  const int kall = std::max(m, l - m);
  const double ratio = s / (1.0 - s);
  double term = pow_int(1.0 - s, l);
  double sum = term;
  double pm = cap < 0 ? term : 0.0;
  for (int k = 0; k < kall; ++k) {
    term = term * (ratio * coef[k]);
    if (k < kmax) sum = sum + term;
    if (k == cap) pm = term;
  }
  sum = std::min(sum, 1.0);
  return {lower ? sum : 1.0 - sum, pm};
}

inline constexpr int kTableIntervals = 64;

// F_l(m; k/64) for k = 0..64, used to bracket each root before Newton
inline std::array<double, kTableIntervals + 1> root_table(int l, int m, const double* coef) {
  std::array<double, kTableIntervals + 1> t{};
  t[0] = 1.0;
  for (int k = 1; k < kTableIntervals; ++k) t[k] = cdf_lane(l, m, coef, static_cast<double>(k) / kTableIntervals);
  t[kTableIntervals] = 0.0;
  return t;
}

// p in (0,1) with F_l(m; p) = x for 0 < x < 1
inline double solve_lane(int l, int m, const double* coef, const std::array<double, kTableIntervals + 1>& table,
                         double x, int max_iter, double step_tol) {
  int j = 0;
  for (int k = 1; k < kTableIntervals; ++k) j += table[k] > x ? 1 : 0;
  double lo = static_cast<double>(j) / kTableIntervals, hi = static_cast<double>(j + 1) / kTableIntervals;
  double p = lo + ((table[j] - x) / (table[j] - table[j + 1])) * (hi - lo);
  if (!(p > lo && p < hi)) p = 0.5 * (lo + hi);
  const double slope = -static_cast<double>(l - m);
  for (int it = 0; it < max_iter; ++it) {
    const CdfPmf e = cdf_pmf_lane(l, m, coef, p);
    const double f = e.F - x;
    if (f > 0.0) lo = p;
    else hi = p;
    const double dF = slope * e.pm / (1.0 - p);
    double cand = p - f / dF;
    if (std::abs(cand - p) <= step_tol) {
      p = cand;
      break;
    }
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    const double step = std::abs(cand - p);
    p = cand;
    if (step <= step_tol) break;
  }
  return p;
}

}  // namespace vaxgame::kernels::detail
