#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vaxgame {

struct XiNode {
  double value = 0.0;
  double weight = 0.0;
};

// p0 * delta_0 + (1 - p0) * max(0, N(location, sigma2))
struct XiLaw {
  double location = 5.0;
  double sigma2 = 0.0;
  double p0 = 0.0;

  double mean() const;
  double draw(std::mt19937_64& rng) const;
  // k equal-probability strata of the normal part, each node the conditional mean of its stratum,
  // plus the atom at zero; the node mean equals mean()
  std::vector<XiNode> quadrature(int k) const;
};

double quadrature_mean(const std::vector<XiNode>& nodes);

struct InfluencerGameConfig {
  int M = 40;
  int T = 20;
  double C_v = 1.0;
  double C_i = 5.0;
  double c_se_1 = 3.0;
  double xi_mean = 5.0;  // location of the normal before rectification
  double xi_sigma2 = 2.0;
  double p0 = 0.0;
  int z_bar = 1;
  // g_0..g_{z_bar-1}; entries past the end repeat the last one
  std::vector<double> incentives;

  void validate() const;
  XiLaw xi_law() const { return {xi_mean, xi_sigma2, p0}; }
  double xi_expectation() const { return xi_law().mean(); }
  double incentive(int z) const;
};

InfluencerGameConfig with_incentive(InfluencerGameConfig cfg, double g0);

double gamma(int t, double c, const InfluencerGameConfig& cfg);
double gamma_with_mean(int t, double c, int T, double xi_mean);

// root of C_i * F_{M-z-1}(z_bar-z-1; p) = C_v + Gamma_{T-1}(c) - g_z; NotMixedRegime outside the interior
double solve_mixed_probability(int z, double c, double g_z, const InfluencerGameConfig& cfg);

// wait-and-watch equilibrium vaccination probability at the last epoch
double ne_outcome_probability(double g, double c, int z_bar, const InfluencerGameConfig& cfg);
// same, given Gamma_{T-1}(c) directly
double ne_outcome_probability_at(double g, double gamma_last, int z_bar, const InfluencerGameConfig& cfg);

struct CostPath {
  std::vector<double> C;   // C_1..C_{T-1}
  std::vector<double> xi;  // xi_2..xi_{T-1}
};

CostPath sample_cost_path(const InfluencerGameConfig& cfg, std::uint64_t seed);
CostPath sample_cost_path(const InfluencerGameConfig& cfg, std::mt19937_64& rng);

struct OutcomeDraw {
  double c_last = 0.0;  // C_{T-1}
  double p = 0.0;
  int Z_T = 0;
};

OutcomeDraw sample_outcome(double g, const InfluencerGameConfig& cfg, std::mt19937_64& rng);
int sample_Z_T(double g, const InfluencerGameConfig& cfg, std::uint64_t seed);

}  // namespace vaxgame
