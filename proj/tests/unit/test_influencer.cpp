#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vaxgame/errors.hpp"
#include "vaxgame/influencer_game.hpp"

using namespace vaxgame;

namespace {

InfluencerGameConfig small_cfg() {
  InfluencerGameConfig c;
  c.M = 3;
  c.T = 2;
  c.C_v = 1.0;
  c.C_i = 4.0;
  c.c_se_1 = 2.0;
  c.xi_mean = 2.0;
  c.xi_sigma2 = 0.0;
  c.z_bar = 2;
  c.incentives = {0.0};
  return c;
}

// E[max(0, N(mu, s2))] by the trapezoid rule on a wide grid
double rectified_mean_numeric(double mu, double s2) {
  const double s = std::sqrt(s2);
  const double lo = mu - 12 * s, hi = mu + 12 * s;
  const int n = 200000;
  const double h = (hi - lo) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double f = std::max(x, 0.0) * std::exp(-0.5 * (x - mu) * (x - mu) / s2) / (s * std::sqrt(2 * M_PI));
    acc += (i == 0 || i == n ? 0.5 : 1.0) * f;
  }
  return acc * h;
}

}  // namespace

TEST_SUITE("influencer_game") {
  TEST_CASE("gamma interpolates between the estimate and the mean") {
    CHECK(gamma_with_mean(5, 1.2, 10, 5.0) == doctest::Approx(3.1).epsilon(1e-15));
    InfluencerGameConfig c;
    c.T = 10;
    c.xi_mean = 5.0;
    c.xi_sigma2 = 0.0;
    CHECK(gamma(5, 1.2, c) == doctest::Approx(3.1).epsilon(1e-15));
    CHECK(gamma(10, 1.2, c) == doctest::Approx(1.2));
    CHECK_THROWS_AS(gamma(0, 1.0, c), DomainError);
    CHECK_THROWS_AS(gamma(11, 1.0, c), DomainError);
  }

  TEST_CASE("mixed root where F_2(1; p) = 3/4") {
    const auto c = small_cfg();
    // a = 1 + 2 - 0 = 3, so 1 - p^2 = 3/4
    CHECK(solve_mixed_probability(0, 2.0, 0.0, c) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ne_outcome_probability(0.0, 2.0, 2, c) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(solve_mixed_probability(2, 2.0, 0.0, c), NotMixedRegime);
    CHECK_THROWS_AS(solve_mixed_probability(0, 2.0, 3.5, c), NotMixedRegime);
  }

  TEST_CASE("mixed root at general z satisfies its indifference condition") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
      InfluencerGameConfig c;
      c.M = 3 + static_cast<int>(u(rng) * 30);
      c.z_bar = 1 + static_cast<int>(u(rng) * (c.M - 1));
      c.T = 5;
      c.C_v = 1.0;
      c.C_i = 5.0;
      const int z = static_cast<int>(u(rng) * c.z_bar);
      const double cc = 5.0 * u(rng);
      const double a = c.C_v + gamma(c.T - 1, cc, c);
      const double g = a - c.C_i * (0.02 + 0.96 * u(rng));
      const double p = solve_mixed_probability(z, cc, g, c);
      const double lhs = c.C_i * static_cast<double>(oracle::cdf(c.M - z - 1, c.z_bar - z - 1, p));
      CHECK(std::abs(lhs - (a - g)) < 1e-9);
    }
  }

  TEST_CASE("outcome probability regimes") {
    auto c = small_cfg();
    CHECK(ne_outcome_probability(3.0, 2.0, 2, c) == 1.0);   // a = 0
    CHECK(ne_outcome_probability(-1.0, 2.0, 2, c) == 0.0);  // a = 4 = C_i
    c.z_bar = 3;
    CHECK(ne_outcome_probability(0.0, 2.0, 3, c) == 1.0);   // a = 3 < C_i
    CHECK(ne_outcome_probability(-1.0, 2.0, 3, c) == 0.0);  // tie goes to 0
    CHECK(ne_outcome_probability(-2.0, 2.0, 3, c) == 0.0);
  }

  TEST_CASE("outcome probability is monotone in g and c") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    InfluencerGameConfig c;
    c.M = 40;
    c.T = 20;
    for (int zb : {1, 7, 20, 39, 40}) {
      for (int i = 0; i < 200; ++i) {
        const double g = 6.0 * u(rng), cc = 8.0 * u(rng), dg = 0.3 * u(rng), dc = 0.3 * u(rng);
        CHECK(ne_outcome_probability(g + dg, cc, zb, c) >= ne_outcome_probability(g, cc, zb, c));
        CHECK(ne_outcome_probability(g, cc + dc, zb, c) <= ne_outcome_probability(g, cc, zb, c));
      }
    }
  }

  TEST_CASE("cost path is the running average") {
    InfluencerGameConfig c;
    c.T = 12;
    c.c_se_1 = 3.0;
    const CostPath path = sample_cost_path(c, 99);
    REQUIRE(path.C.size() == 11);
    REQUIRE(path.xi.size() == 10);
    double sum = c.c_se_1;
    for (int t = 2; t <= 11; ++t) {
      sum += path.xi[t - 2];
      CHECK(path.C[t - 1] == doctest::Approx(sum / t).epsilon(1e-13));
    }
    for (double x : path.xi) CHECK(x >= 0.0);
  }

  TEST_CASE("rectified mean against numerical integration") {
    for (double mu : {-1.0, 0.0, 0.7, 5.0})
      for (double s2 : {0.1, 2.0, 9.0}) {
        const XiLaw law{mu, s2, 0.0};
        CHECK(law.mean() == doctest::Approx(rectified_mean_numeric(mu, s2)).epsilon(1e-9));
        const XiLaw with_atom{mu, s2, 0.3};
        CHECK(with_atom.mean() == doctest::Approx(0.7 * law.mean()).epsilon(1e-14));
      }
    CHECK(XiLaw{5.0, 0.0, 0.0}.mean() == 5.0);
  }

  TEST_CASE("quadrature preserves the mean and total mass") {
    for (double mu : {-0.5, 1.0, 5.0})
      for (double s2 : {0.01, 2.0, 6.0})
        for (double p0 : {0.0, 0.2})
          for (int k : {1, 4, 33, 512}) {
            const XiLaw law{mu, s2, p0};
            const auto nodes = law.quadrature(k);
            double w = 0.0;
            for (const auto& n : nodes) {
              w += n.weight;
              CHECK(n.value >= 0.0);
            }
            CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(quadrature_mean(nodes) - law.mean()) < 1e-10 * (1.0 + law.mean()));
          }
  }

  TEST_CASE("sample mean of draws matches the analytic mean") {
    const XiLaw law{1.0, 4.0, 0.1};
    std::mt19937_64 rng(6);
    double s = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) s += law.draw(rng);
    CHECK(std::abs(s / n - law.mean()) < 0.01);
  }

  TEST_CASE("Gamma is a martingale along the cost recursion") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const XiLaw law{5.0 * u(rng) - 1.0, 3.0 * u(rng) + 0.01, 0.3 * u(rng)};
      const auto nodes = law.quadrature(64);
      const double m = quadrature_mean(nodes);
      const int T = 3 + static_cast<int>(u(rng) * 30);
      const int t = 1 + static_cast<int>(u(rng) * (T - 2));
      const double c = 10.0 * u(rng);
      double next = 0.0;
      for (const auto& n : nodes) next += n.weight * gamma_with_mean(t + 1, c + (n.value - c) / (t + 1), T, m);
      CHECK(next == doctest::Approx(gamma_with_mean(t, c, T, m)).epsilon(1e-12));
    }
  }

  TEST_CASE("sampling is reproducible per seed") {
    InfluencerGameConfig c;
    c.z_bar = 10;
    for (std::uint64_t s : {1u, 2u, 99u}) CHECK(sample_Z_T(3.0, c, s) == sample_Z_T(3.0, c, s));
    std::mt19937_64 rng(4);
    const auto d = sample_outcome(3.0, c, rng);
    CHECK(d.Z_T >= 0);
    CHECK(d.Z_T <= c.M);
    CHECK(d.p == doctest::Approx(ne_outcome_probability(3.0, d.c_last, 10, c)));
  }

  TEST_CASE("config validation") {
    InfluencerGameConfig c;
    c.z_bar = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.z_bar = 41;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.z_bar = 3;
    c.T = 1;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.T = 20;
    c.p0 = 1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.p0 = 0.0;
    c.xi_mean = -50.0;
    c.xi_sigma2 = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
  }

  TEST_CASE("incentive table lookup") {
    InfluencerGameConfig c;
    c.z_bar = 4;
    c.incentives = {2.0, 1.5};
    CHECK(c.incentive(0) == 2.0);
    CHECK(c.incentive(1) == 1.5);
    CHECK(c.incentive(3) == 1.5);
    CHECK(c.incentive(4) == 0.0);
  }
}
