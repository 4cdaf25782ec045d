#include "vaxgame/leader_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "vaxgame/binomial.hpp"
#include "vaxgame/errors.hpp"
#include "vaxgame/kernels/outcome_kernels.hpp"
#include "vaxgame/parallel.hpp"

namespace vaxgame {

const char* to_string(SamplerMode m) { return m == SamplerMode::perfect_info ? "perfect" : "mc"; }

double limiting_gamma(const InfluencerGameConfig& cfg) {
  const double T = cfg.T;
  return (cfg.c_se_1 + (T - 1.0) * cfg.xi_expectation()) / T;
}

ExpectationSampler make_sampler(const InfluencerGameConfig& cfg, SamplerMode mode, std::size_t n_samples,
                                std::uint64_t seed) {
  cfg.validate();
  ExpectationSampler s;
  s.mode = mode;
  s.seed = seed;
  if (mode == SamplerMode::perfect_info) {
    s.n_samples = 1;
    s.gamma_draws = std::make_shared<const std::vector<double>>(1, limiting_gamma(cfg));
    return s;
  }
  if (n_samples == 0) throw DomainError("sampler needs at least one draw");
  s.n_samples = n_samples;
  auto draws = std::make_shared<std::vector<double>>(n_samples);
  const XiLaw law = cfg.xi_law();
  const double mean = law.mean();
  const double T = cfg.T;
  const std::size_t streams = (n_samples + kSamplerStream - 1) / kSamplerStream;
  parallel_for(streams, [&](std::size_t st) {
    std::mt19937_64 rng(derive_seed(seed, st));
    const std::size_t lo = st * kSamplerStream, hi = std::min(n_samples, lo + kSamplerStream);
    for (std::size_t i = lo; i < hi; ++i) {
      double sum = 0.0;
      for (int t = 2; t <= cfg.T - 1; ++t) sum += law.draw(rng);
      (*draws)[i] = (cfg.c_se_1 + sum + mean) / T;
    }
  });
  s.gamma_draws = std::move(draws);
  return s;
}

LeaderProblem make_leader_problem(double delta, const InfluencerGameConfig& cfg, SamplerMode mode,
                                  std::size_t n_samples, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  LeaderProblem p;
  p.delta = delta;
  p.cfg = cfg;
  p.sampler = make_sampler(cfg, mode, n_samples, seed);
  return p;
}

LeaderEval evaluate_leader(double g, int z_bar, const LeaderProblem& problem) {
  const auto& draws = *problem.sampler.gamma_draws;
  const auto& cfg = problem.cfg;
  kernels::OutcomeParams prm{cfg.M, z_bar, cfg.C_v, cfg.C_i, g};
  const auto sums = kernels::outcome_sums(draws.data(), draws.size(), prm);
  const double n = static_cast<double>(draws.size());
  LeaderEval e;
  e.NP = sums.sum_np / n;
  e.p_mean = sums.sum_p / n;
  e.U = cfg.M * g * e.p_mean;
  return e;
}

double non_eradication_probability(double g, int z_bar, const LeaderProblem& problem) {
  return evaluate_leader(g, z_bar, problem).NP;
}

double expected_incentive_cost(double g, int z_bar, const LeaderProblem& problem) {
  return evaluate_leader(g, z_bar, problem).U;
}

double g_tilde(const InfluencerGameConfig& cfg) {
  return std::max(cfg.C_v - cfg.C_i + (cfg.c_se_1 + cfg.xi_expectation()) / cfg.T, 0.0);
}

namespace {

LeaderSolution finish(double g, int z_bar, bool binding, int iterations, const LeaderProblem& problem) {
  const LeaderEval e = evaluate_leader(g, z_bar, problem);
  LeaderSolution s;
  s.g_star = g;
  s.z_bar = z_bar;
  s.binding = binding;
  s.iterations = iterations;
  s.NP_at_g = e.NP;
  s.p_expectation = e.p_mean;
  s.U_star = e.U;
  s.U_star_raw = e.U;
  s.mode = problem.sampler.mode;
  const double n = static_cast<double>(problem.sampler.size());
  s.sampler_ci = problem.sampler.mode == SamplerMode::monte_carlo
                     ? std::sqrt(std::max(problem.delta * (1.0 - problem.delta), 0.0) / n)
                     : 0.0;
  return s;
}

void check_zbar(int z_bar, const InfluencerGameConfig& cfg) {
  if (z_bar < 1 || z_bar > cfg.M) throw DomainError("z_bar must lie in 1..M");
}

}  // namespace

LeaderSolution solve_optimal_incentive(int z_bar, const LeaderProblem& problem) {
  const auto& cfg = problem.cfg;
  check_zbar(z_bar, cfg);
  if (problem.sampler.mode == SamplerMode::perfect_info || cfg.xi_sigma2 <= 0.0)
    return perfect_info_solution(z_bar, problem);

  const double delta = problem.delta;
  if (non_eradication_probability(0.0, z_bar, problem) <= delta) return finish(0.0, z_bar, false, 0, problem);

  if (z_bar == cfg.M) {
    // N_P(g) is the empirical tail P(Gamma >= g - C_v + C_i); take the smallest g meeting the bound
    std::vector<double> sorted(*problem.sampler.gamma_draws);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const std::size_t n = sorted.size();
    const auto allowed = static_cast<std::size_t>(std::floor(delta * static_cast<double>(n)));
    const double tau = sorted[std::min(allowed, n - 1)];
    double g = tau + cfg.C_v - cfg.C_i;
    int bumps = 0;
    while (!(cfg.C_v + tau - g < cfg.C_i)) {
      g = std::nextafter(g, std::numeric_limits<double>::infinity());
      ++bumps;
    }
    return finish(std::max(g, 0.0), z_bar, true, bumps, problem);
  }

  const double lo = g_tilde(cfg);
  auto f = [&](double g) { return non_eradication_probability(g, z_bar, problem) - delta; };
  double f_lo = f(lo);
  if (f_lo <= 0.0) return finish(lo, z_bar, true, 0, problem);
  double step = std::max(1.0, lo);
  double hi = lo + step, f_hi = f(hi);
  int doublings = 0;
  while (f_hi > 0.0) {
    if (++doublings > 60) throw BracketError("could not bracket N_P(g) = delta");
    step *= 2.0;
    hi = lo + step;
    f_hi = f(hi);
  }
  if (f_hi == 0.0) return finish(hi, z_bar, true, doublings, problem);

  std::uintmax_t iters = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(48);
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iters);
  // the upper end of the final bracket is the feasible side
  const double g_star = f(a) <= 0.0 ? a : b;
  return finish(g_star, z_bar, true, static_cast<int>(iters) + doublings, problem);
}

LeaderSolution perfect_info_solution(int z_bar, const LeaderProblem& problem, double eps) {
  const auto& cfg = problem.cfg;
  check_zbar(z_bar, cfg);
  const double Gam = limiting_gamma(cfg);
  const int M = cfg.M;
  const double delta = problem.delta;
  LeaderSolution s;
  s.z_bar = z_bar;
  s.mode = SamplerMode::perfect_info;
  const double p0 = ne_outcome_probability_at(0.0, Gam, z_bar, cfg);
  const double np0 = z_bar >= M ? (p0 >= 1.0 ? 0.0 : 1.0) : binom_cdf(M, z_bar - 1, p0);
  const double raw_M = M * (cfg.C_v + Gam - cfg.C_i);

  if (np0 <= delta) {
    s.g_star = 0.0;
    s.U_star = 0.0;
    s.U_star_raw = z_bar == M ? raw_M : 0.0;
    s.p_expectation = p0;
    s.NP_at_g = np0;
    return s;
  }
  s.binding = true;
  if (z_bar == M) {
    s.g_star = std::max(cfg.C_v + Gam - cfg.C_i + eps, 0.0);
    s.p_expectation = 1.0;
    s.NP_at_g = 0.0;
    s.U_star = M * s.g_star;
    s.U_star_raw = raw_M;
    return s;
  }
  const double p = p_star(z_bar, M, delta);
  s.g_star = cfg.C_v + Gam - cfg.C_i * binom_cdf(M - 1, z_bar - 1, p);
  s.p_expectation = p;
  s.NP_at_g = binom_cdf(M, z_bar - 1, p);
  s.U_star = M * s.g_star * p;
  s.U_star_raw = s.U_star;
  return s;
}

double p_star(int k, int M, double delta) {
  if (k < 1 || k > M) throw DomainError("p_star needs 1 <= k <= M");
  return solve_binom_cdf(M, k - 1, delta);
}

ZbarOneClosedForm perfect_info_zbar1(int M, double delta, double C_v, double Gamma, double C_i) {
  ZbarOneClosedForm r;
  r.g_star = C_v + Gamma - C_i * std::pow(delta, static_cast<double>(M - 1) / M);
  r.U_star = M * r.g_star * (1.0 - std::pow(delta, 1.0 / M));
  return r;
}

std::vector<ComparisonRow> compare_across_zbar(const LeaderProblem& problem, const std::vector<int>& zbars,
                                               const std::vector<double>& deltas) {
  std::vector<ComparisonRow> rows(zbars.size() * deltas.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const std::size_t di = i / zbars.size(), zi = i % zbars.size();
    LeaderProblem p = problem;
    p.delta = deltas[di];
    rows[i].z_bar = zbars[zi];
    rows[i].delta = deltas[di];
    rows[i].solution = solve_optimal_incentive(zbars[zi], p);
  });
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    std::size_t best = di * zbars.size();
    for (std::size_t zi = 0; zi < zbars.size(); ++zi) {
      const std::size_t i = di * zbars.size() + zi;
      if (rows[i].solution.U_star < rows[best].solution.U_star) best = i;
    }
    if (!zbars.empty()) rows[best].argmin_U = true;
  }
  return rows;
}

}  // namespace vaxgame
