#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vaxgame/ess_analysis.hpp"
#include "vaxgame/influencer_game.hpp"

namespace vaxgame {

enum class SamplerMode { perfect_info, monte_carlo };

const char* to_string(SamplerMode m);

struct ExpectationSampler {
  SamplerMode mode = SamplerMode::monte_carlo;
  std::size_t n_samples = 100000;
  std::uint64_t seed = 1;
  // Gamma_{T-1}(C_{T-1}) draws, shared by every g evaluated against this sampler
  std::shared_ptr<const std::vector<double>> gamma_draws;

  std::size_t size() const { return gamma_draws ? gamma_draws->size() : 0; }
};

inline constexpr std::size_t kSamplerStream = 4096;

ExpectationSampler make_sampler(const InfluencerGameConfig& cfg, SamplerMode mode, std::size_t n_samples,
                                std::uint64_t seed);

// (c_se_1 + (T-1) E[xi]) / T: Gamma_{T-1} along the cost path with every xi at its mean
double limiting_gamma(const InfluencerGameConfig& cfg);

struct LeaderProblem {
  double delta = 0.05;
  InfluencerGameConfig cfg;
  ExpectationSampler sampler;
};

LeaderProblem make_leader_problem(double delta, const InfluencerGameConfig& cfg, SamplerMode mode,
                                  std::size_t n_samples, std::uint64_t seed);

struct LeaderEval {
  double NP = 0.0;
  double p_mean = 0.0;
  double U = 0.0;
};

LeaderEval evaluate_leader(double g, int z_bar, const LeaderProblem& problem);
double non_eradication_probability(double g, int z_bar, const LeaderProblem& problem);
double expected_incentive_cost(double g, int z_bar, const LeaderProblem& problem);

// below this incentive nobody vaccinates on any cost path
double g_tilde(const InfluencerGameConfig& cfg);

struct LeaderSolution {
  double g_star = 0.0;
  double U_star = 0.0;
  double U_star_raw = 0.0;
  int z_bar = 1;
  bool binding = false;
  double p_expectation = 0.0;
  double NP_at_g = 0.0;
  int iterations = 0;
  double sampler_ci = 0.0;
  SamplerMode mode = SamplerMode::monte_carlo;
};

LeaderSolution solve_optimal_incentive(int z_bar, const LeaderProblem& problem);
LeaderSolution perfect_info_solution(int z_bar, const LeaderProblem& problem, double eps = 1e-9);

// root of F_M(k-1; p) = delta
double p_star(int k, int M, double delta);

struct ZbarOneClosedForm {
  double g_star = 0.0;
  double U_star = 0.0;
};
ZbarOneClosedForm perfect_info_zbar1(int M, double delta, double C_v, double Gamma, double C_i);

struct ComparisonRow {
  int z_bar = 1;
  double delta = 0.0;
  LeaderSolution solution;
  bool argmin_U = false;
};

std::vector<ComparisonRow> compare_across_zbar(const LeaderProblem& problem, const std::vector<int>& zbars,
                                               const std::vector<double>& deltas);

// joint design
struct KStarResult {
  int k_star = 0;
  std::vector<double> L_table;
  bool capped_case = false;  // c_v2_bar > c_v2 / theta_star
};

std::vector<double> L_table(const PublicCostModel& costs, const DiseaseParams& disease, int M);
KStarResult vaccine_optimal_k(const PublicCostModel& costs, const DiseaseParams& disease, int M);

struct JointDesign {
  int k_star = 0;
  VaRatePolicy nu_eps;
  double psi_e_achieved = 0.0;
  double eps = 0.0;
  bool incentive_optimal_exists = false;
  std::vector<double> L_table;
  int iterations = 0;
};

JointDesign construct_eps_vaccine_optimal_nu(int k_star, double eps, const PublicCostModel& costs,
                                             const DiseaseParams& disease, int M);

bool incentive_optimal_exists(const PublicCostModel& costs, const DiseaseParams& disease, int M);

// admissible policy with z_bar(nu) = M and the smallest psi_e found, if any
std::optional<VaRatePolicy> incentive_optimal_nu(const PublicCostModel& costs, const DiseaseParams& disease, int M,
                                                 double eps = 1e-6);

}  // namespace vaxgame
