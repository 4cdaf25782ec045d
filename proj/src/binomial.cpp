#include "vaxgame/binomial.hpp"

#include <algorithm>
#include <cmath>

#include "vaxgame/errors.hpp"

namespace vaxgame {

double binom_cdf(int l, int m, double p) {
  if (m < 0) return 0.0;
  if (m >= l) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  // sum the shorter-tailed side with ratio <= 1 so the first term never underflows
  const bool lower = p <= 0.5;
  const double s = lower ? p : 1.0 - p;
  const int kmax = lower ? m : l - m - 1;
  const double ratio = s / (1.0 - s);
  double term = std::pow(1.0 - s, l);
  double sum = term;
  for (int k = 0; k < kmax; ++k) {
    term *= ratio * static_cast<double>(l - k) / static_cast<double>(k + 1);
    sum += term;
  }
  sum = std::min(sum, 1.0);
  return lower ? sum : 1.0 - sum;
}

std::vector<double> binom_pmf(int l, double p) {
  std::vector<double> out(static_cast<std::size_t>(l) + 1, 0.0);
  if (p <= 0.0) {
    out.front() = 1.0;
    return out;
  }
  if (p >= 1.0) {
    out.back() = 1.0;
    return out;
  }
  if (p <= 0.5) {
    const double ratio = p / (1.0 - p);
    out[0] = std::pow(1.0 - p, l);
    for (int k = 0; k < l; ++k)
      out[k + 1] = out[k] * ratio * static_cast<double>(l - k) / static_cast<double>(k + 1);
  } else {
    const double ratio = (1.0 - p) / p;
    out[l] = std::pow(p, l);
    for (int k = l; k > 0; --k)
      out[k - 1] = out[k] * ratio * static_cast<double>(k) / static_cast<double>(l - k + 1);
  }
  return out;
}

double solve_binom_cdf(int l, int m, double target, int max_iter) {
  if (!(m >= 0 && m < l)) throw DomainError("solve_binom_cdf needs 0 <= m < l");
  if (!(target > 0.0 && target < 1.0)) throw NotMixedRegime("cdf target must lie in (0,1)");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = binom_cdf(l, m, mid);
    if (f == target) return mid;
    if (f > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> binom_coefficients(int l) {
  std::vector<double> c(static_cast<std::size_t>(l) + 1, 1.0);
  for (int k = 1; k <= l; ++k) c[k] = c[k - 1] * static_cast<double>(l - k + 1) / static_cast<double>(k);
  return c;
}

}  // namespace vaxgame
