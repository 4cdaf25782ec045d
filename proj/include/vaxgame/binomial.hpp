#pragma once

#include <vector>

namespace vaxgame {

// P(Bin(l, p) <= m); 1 for m >= l, 0 for m < 0
double binom_cdf(int l, int m, double p);

// all probabilities P(Bin(l, p) = k), k = 0..l
std::vector<double> binom_pmf(int l, double p);

// the unique p in (0,1) with binom_cdf(l, m, p) = target, for 0 <= m < l and 0 < target < 1
double solve_binom_cdf(int l, int m, double target, int max_iter = 200);

// binomial coefficients C(l, k) as doubles
std::vector<double> binom_coefficients(int l);

}  // namespace vaxgame
