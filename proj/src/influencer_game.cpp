#include "vaxgame/influencer_game.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "vaxgame/binomial.hpp"
#include "vaxgame/errors.hpp"

namespace vaxgame {

namespace {

double std_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double std_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// integral of max(0, mu + sigma z) phi(z) over [a, b]
double rectified_partial(double mu, double sigma, double a, double b) {
  const double cut = -mu / sigma;
  const double lo = std::max(a, cut);
  if (!(b > lo)) return 0.0;
  const double pa = std::isinf(lo) ? 0.0 : std_pdf(lo);
  const double pb = std::isinf(b) ? 0.0 : std_pdf(b);
  return mu * (std_cdf(b) - std_cdf(lo)) + sigma * (pa - pb);
}

}  // namespace

double XiLaw::mean() const {
  const double mu = location;
  if (sigma2 <= 0.0) return (1.0 - p0) * std::max(mu, 0.0);
  const double s = std::sqrt(sigma2);
  return (1.0 - p0) * (mu * std_cdf(mu / s) + s * std_pdf(mu / s));
}

double XiLaw::draw(std::mt19937_64& rng) const {
  if (p0 > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < p0) return 0.0;
  }
  if (sigma2 <= 0.0) return std::max(location, 0.0);
  std::normal_distribution<double> n(location, std::sqrt(sigma2));
  return std::max(n(rng), 0.0);
}

std::vector<XiNode> XiLaw::quadrature(int k) const {
  std::vector<XiNode> out;
  if (p0 > 0.0) out.push_back({0.0, p0});
  const double w = 1.0 - p0;
  if (sigma2 <= 0.0 || k <= 1) {
    if (sigma2 <= 0.0) {
      out.push_back({std::max(location, 0.0), w});
    } else {
      out.push_back({mean() / w, w});
    }
    return out;
  }
  const double s = std::sqrt(sigma2);
  const boost::math::normal_distribution<double> z01;
  double a = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    const double b = j + 1 == k ? std::numeric_limits<double>::infinity()
                                : boost::math::quantile(z01, static_cast<double>(j + 1) / k);
    const double mass = std_cdf(b) - std_cdf(a);
    const double v = mass > 0.0 ? rectified_partial(location, s, a, b) / mass : std::max(location + s * a, 0.0);
    out.push_back({v, w / k});
    a = b;
  }
  return out;
}

double quadrature_mean(const std::vector<XiNode>& nodes) {
  double m = 0.0;
  for (const auto& n : nodes) m += n.weight * n.value;
  return m;
}

void InfluencerGameConfig::validate() const {
  if (M < 1) throw DomainError("M must be at least 1");
  if (T < 2) throw DomainError("T must be at least 2");
  if (!(C_i > 0.0)) throw DomainError("C_i must be positive");
  if (!(c_se_1 >= 0.0)) throw DomainError("initial side-effect estimate must be nonnegative");
  if (!(xi_sigma2 >= 0.0)) throw DomainError("xi variance must be nonnegative");
  if (!(p0 >= 0.0 && p0 < 1.0)) throw DomainError("p0 must lie in [0,1)");
  if (!(xi_expectation() > 0.0)) throw DomainError("side-effect mean must be positive");
  if (z_bar < 1 || z_bar > M) throw DomainError("z_bar must lie in 1..M");
  for (double g : incentives)
    if (!std::isfinite(g)) throw DomainError("incentives must be finite");
}

double InfluencerGameConfig::incentive(int z) const {
  if (z >= z_bar || incentives.empty()) return 0.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(z), incentives.size() - 1);
  return incentives[i];
}

InfluencerGameConfig with_incentive(InfluencerGameConfig cfg, double g0) {
  cfg.incentives.assign(1, g0);
  return cfg;
}

double gamma_with_mean(int t, double c, int T, double xi_mean) {
  const double tt = static_cast<double>(t), TT = static_cast<double>(T);
  return (tt / TT) * c + ((TT - tt) / TT) * xi_mean;
}

double gamma(int t, double c, const InfluencerGameConfig& cfg) {
  if (t < 1 || t > cfg.T) throw DomainError("gamma needs 1 <= t <= T");
  return gamma_with_mean(t, c, cfg.T, cfg.xi_expectation());
}

double solve_mixed_probability(int z, double c, double g_z, const InfluencerGameConfig& cfg) {
  if (z < 0 || z >= cfg.z_bar || cfg.z_bar >= cfg.M)
    throw NotMixedRegime("mixed root needs z < z_bar < M");
  const double a = cfg.C_v + gamma(cfg.T - 1, c, cfg) - g_z;
  if (!(a > 0.0 && a < cfg.C_i)) throw NotMixedRegime("C_v + Gamma - g outside (0, C_i)");
  return solve_binom_cdf(cfg.M - z - 1, cfg.z_bar - z - 1, a / cfg.C_i);
}

double ne_outcome_probability_at(double g, double gamma_last, int z_bar, const InfluencerGameConfig& cfg) {
  const double a = cfg.C_v + gamma_last - g;
  if (z_bar >= cfg.M) return a < cfg.C_i ? 1.0 : 0.0;
  if (a <= 0.0) return 1.0;
  if (a >= cfg.C_i) return 0.0;
  return solve_binom_cdf(cfg.M - 1, z_bar - 1, a / cfg.C_i);
}

double ne_outcome_probability(double g, double c, int z_bar, const InfluencerGameConfig& cfg) {
  return ne_outcome_probability_at(g, gamma(cfg.T - 1, c, cfg), z_bar, cfg);
}

CostPath sample_cost_path(const InfluencerGameConfig& cfg, std::mt19937_64& rng) {
  const XiLaw law = cfg.xi_law();
  CostPath path;
  path.C.reserve(static_cast<std::size_t>(cfg.T - 1));
  path.C.push_back(cfg.c_se_1);
  for (int t = 2; t <= cfg.T - 1; ++t) {
    const double xi = law.draw(rng);
    path.xi.push_back(xi);
    const double prev = path.C.back();
    path.C.push_back(prev + (xi - prev) / static_cast<double>(t));
  }
  return path;
}

CostPath sample_cost_path(const InfluencerGameConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_cost_path(cfg, rng);
}

OutcomeDraw sample_outcome(double g, const InfluencerGameConfig& cfg, std::mt19937_64& rng) {
  const CostPath path = sample_cost_path(cfg, rng);
  OutcomeDraw d;
  d.c_last = path.C.back();
  d.p = ne_outcome_probability(g, d.c_last, cfg.z_bar, cfg);
  std::binomial_distribution<int> bin(cfg.M, d.p);
  d.Z_T = bin(rng);
  return d;
}

int sample_Z_T(double g, const InfluencerGameConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_outcome(g, cfg, rng).Z_T;
}

}  // namespace vaxgame
