#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vaxgame {

struct DiseaseParams {
  double lambda = 0.0;
  double r = 0.0;
  double b = 0.0;
  double d = 0.0;

  double rho() const { return lambda / (r + b); }
  // 1 - 1/rho; throws DomainError when rho <= 1
  double theta_star() const;
  void validate() const;
};

struct VaRatePolicy {
  double nu_b = 0.0;
  double nu_e = 0.0;
};

struct ResponseParams {
  double beta = 0.0;

  double response(double psi) const;
};

struct OdeState {
  double theta = 0.0;
  double psi = 0.0;
  double eta = 1.0;
};

double varrho(const OdeState& s, const DiseaseParams& disease, const VaRatePolicy& nu);

OdeState ode_rhs(const OdeState& s, const DiseaseParams& disease, const VaRatePolicy& nu,
                 const ResponseParams& beta);

double max_norm(const OdeState& s);

// positive root of nu_e*x^2 + (b + nu_b - nu_e)*x - nu_b = 0, nu_b/(b+nu_b) at nu_e = 0
double psi_e(double nu_b, double nu_e, double b);
// nu_b/(b*rho - nu_e); DomainError when b*rho - nu_e <= 0
double psi_o(double nu_b, double nu_e, const DiseaseParams& disease);

// fixed point with eta = (b-d)/varrho evaluated at (theta, psi)
OdeState equilibrium_point(double theta, double psi, const DiseaseParams& disease,
                           const VaRatePolicy& nu);

struct AttractorCandidate {
  OdeState point;
  bool defined = false;
  bool active = false;
  bool degenerate = false;
};

struct AttractorSet {
  AttractorCandidate non_vaccinating;
  AttractorCandidate eradicating;
  AttractorCandidate co_occurring;
  AttractorCandidate self_eradicating;

  std::vector<const AttractorCandidate*> active() const;
};

inline constexpr double kDegenerateBand = 1e-9;

AttractorSet candidate_attractors(const DiseaseParams& disease, const VaRatePolicy& nu,
                                  const ResponseParams& beta);

struct TrajectoryPoint {
  double t = 0.0;
  OdeState state;
};

struct IntegrationOptions {
  double horizon = 1e5;
  double tol = 1e-8;
  double rtol = 1e-11;
  double atol = 1e-13;
  int settle_steps = 100;
  // keep every n-th accepted step in the trajectory, 0 keeps only endpoints
  int record_every = 1;
  std::vector<double> sample_times;  // if non-empty, record exactly at these times instead
};

struct IntegrationResult {
  std::vector<TrajectoryPoint> trajectory;
  OdeState limit;
  double t_end = 0.0;
  bool converged = false;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

IntegrationResult integrate_to_equilibrium(const OdeState& init, const DiseaseParams& disease,
                                           const VaRatePolicy& nu, const ResponseParams& beta,
                                           const IntegrationOptions& opts = {});

struct PopulationCounts {
  std::int64_t S = 0;
  std::int64_t V = 0;
  std::int64_t I = 0;

  std::int64_t N() const { return S + V + I; }
};

struct JumpOptions {
  std::uint64_t n_events = 1000000;
  // embedded-chain index of the first event, so that eta = N/index
  std::uint64_t start_index = 0;
  std::uint64_t record_every = 1000;
};

struct JumpSample {
  double t = 0.0;  // sum of 1/(1+i) over elapsed steps
  std::uint64_t index = 0;
  PopulationCounts counts;
  OdeState state;
};

struct JumpResult {
  std::vector<JumpSample> samples;
  bool extinct = false;
  std::uint64_t events = 0;
};

JumpResult simulate_jump_process(const PopulationCounts& initial, const DiseaseParams& disease,
                                 const VaRatePolicy& nu, const ResponseParams& beta,
                                 std::uint64_t seed, const JumpOptions& opts = {});

std::string trajectory_csv_header();
void append_trajectory_csv(std::string& out, const std::vector<TrajectoryPoint>& traj,
                           const std::string& source);
void append_trajectory_csv(std::string& out, const std::vector<JumpSample>& traj);

}  // namespace vaxgame
