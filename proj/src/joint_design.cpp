#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vaxgame/errors.hpp"
#include "vaxgame/leader_optimizer.hpp"

namespace vaxgame {

namespace {

bool capped(const PublicCostModel& costs, double th) { return costs.c_v2_bar > costs.c_v2 / th; }

}  // namespace

std::vector<double> L_table(const PublicCostModel& costs, const DiseaseParams& disease, int M) {
  const double th = disease.theta_star();
  const double side = std::min(costs.c_v2_bar, costs.c_v2 / th);
  const double share_i = (disease.r + disease.b) / (disease.r + 2.0 * disease.b) * costs.c_i;
  std::vector<double> L(static_cast<std::size_t>(M) + 1);
  for (int k = 0; k <= M; ++k) {
    const double rest = static_cast<double>(M - k) / M;
    L[k] = std::min(-side * rest, share_i - costs.c_v2_bar * rest);
  }
  return L;
}

KStarResult vaccine_optimal_k(const PublicCostModel& costs, const DiseaseParams& disease, int M) {
  costs.validate();
  if (costs.M() != M) throw DomainError("insecurity table size must be M+1");
  if (!costs.influence_sufficient()) throw InsufficientInfluence("c_v1 - c_f(M) >= 0");
  KStarResult r;
  r.L_table = L_table(costs, disease, M);
  r.capped_case = capped(costs, disease.theta_star());
  const auto& L = r.L_table;
  int found = 0;
  for (int k = 1; k <= M; ++k) {
    const double here = costs.c_v1 - costs.c_f[k];
    const double before = costs.c_v1 - costs.c_f[k - 1];
    const bool ok = r.capped_case ? (here <= L[k] && before > L[k - 1]) : (here < L[k] && before >= L[k - 1]);
    if (ok) {
      ++found;
      r.k_star = k;
    }
  }
  if (found != 1) {
    std::ostringstream os;
    os << "expected exactly one vaccine-optimal k, found " << found;
    throw InternalConsistencyError(os.str());
  }
  return r;
}

JointDesign construct_eps_vaccine_optimal_nu(int k_star, double eps, const PublicCostModel& costs,
                                             const DiseaseParams& disease, int M) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double th = disease.theta_star();
  const double brho = disease.b * disease.rho();
  JointDesign jd;
  jd.k_star = k_star;
  jd.eps = eps;
  jd.L_table = L_table(costs, disease, M);
  jd.incentive_optimal_exists = incentive_optimal_exists(costs, disease, M);

  double e1 = 0.5 * eps, e2 = 0.5 * eps;
  std::ostringstream diag;
  for (int it = 1; it <= 200; ++it) {
    VaRatePolicy nu{brho * th - e1, 0.0};
    nu.nu_e = brho - nu.nu_b / th + e2;
    const double pe = psi_e(nu.nu_b, nu.nu_e, disease.b);
    int zb = -1;
    if (pe > th && pe < th + eps) {
      try {
        zb = eradication_threshold(nu, costs, disease, M);
      } catch (const NotAdmissible&) {
        zb = -1;
      }
      if (zb == k_star) {
        jd.nu_eps = nu;
        jd.psi_e_achieved = pe;
        jd.iterations = it;
        return jd;
      }
    }
    if (it <= 3 || it % 50 == 0) diag << " [it " << it << " psi_e-theta*=" << pe - th << " zbar=" << zb << "]";
    e1 *= 0.5;
    e2 *= 0.5;
  }
  throw ConstructionError("eps-vaccine-optimal construction hit the iteration cap:" + diag.str());
}

bool incentive_optimal_exists(const PublicCostModel& costs, const DiseaseParams& disease, int M) {
  const double lhs = costs.c_v1 - costs.c_f.at(static_cast<std::size_t>(M - 1));
  const double rhs = -costs.c_v2_bar / M;
  return capped(costs, disease.theta_star()) ? lhs > rhs : lhs >= rhs;
}

std::optional<VaRatePolicy> incentive_optimal_nu(const PublicCostModel& costs, const DiseaseParams& disease, int M,
                                                 double eps) {
  if (!incentive_optimal_exists(costs, disease, M)) return std::nullopt;
  const double th = disease.theta_star();
  const double brho = disease.b * disease.rho();
  const double lam_th = disease.lambda * th;
  auto zbar_is_M = [&](const VaRatePolicy& nu) {
    try {
      return eradication_threshold(nu, costs, disease, M) == M;
    } catch (const Error&) {
      return false;
    }
  };

  std::vector<VaRatePolicy> candidates;
  // hugging the admissibility boundary keeps psi_e just above theta*
  for (double nb : {brho * th - eps, brho * th * 0.5, brho * th * 0.1})
    if (nb > 0.0) candidates.push_back({nb, brho - nb / th + eps});
  // otherwise h_i(M-1) > 0 needs nu_b past lam*theta*c_i / (c_v1 + c_v2_bar/M - c_f(M-1)) - lam*theta*
  const double room = costs.c_v1 + costs.c_v2_bar / M - costs.c_f[M - 1];
  if (room > 0.0) {
    const double nb = std::max(lam_th * costs.c_i / room - lam_th, 0.0) * (1.0 + eps) + eps;
    candidates.push_back({nb, std::max(0.0, brho - nb / th) + eps});
  }
  std::optional<VaRatePolicy> best;
  double best_psi = std::numeric_limits<double>::infinity();
  for (const auto& nu : candidates) {
    if (!zbar_is_M(nu)) continue;
    const double pe = psi_e(nu.nu_b, nu.nu_e, disease.b);
    if (pe < best_psi) {
      best_psi = pe;
      best = nu;
    }
  }
  return best;
}

}  // namespace vaxgame
