#include "vaxgame/ess_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vaxgame/errors.hpp"

namespace vaxgame {

namespace {

constexpr double kTieBand = 1e-12;

void check_z(int z, int M, const PublicCostModel& costs) {
  if (z < 0 || z > M) throw DomainError("z must lie in 0..M");
  if (costs.M() != M) throw DomainError("insecurity table size must be M+1");
}

double capped_side_effect(const PublicCostModel& costs, double psi) {
  if (!(psi > 0.0)) return costs.c_v2_bar;
  return std::min(costs.c_v2_bar, costs.c_v2 / psi);
}

}  // namespace

void PublicCostModel::validate() const {
  if (c_f.empty()) throw DomainError("insecurity table is empty");
  if (c_f.front() != 0.0) throw DomainError("c_f(0) must be 0");
  for (std::size_t z = 1; z < c_f.size(); ++z)
    if (c_f[z] < c_f[z - 1]) throw DomainError("c_f must be nondecreasing");
  for (double v : {c_v1, c_v2, c_v2_bar, c_i})
    if (!std::isfinite(v)) throw DomainError("cost constants must be finite");
}

bool PublicCostModel::influence_sufficient() const { return c_v1 - c_f.back() < 0.0; }

std::vector<double> linear_insecurity(double s, int M) {
  std::vector<double> c(static_cast<std::size_t>(M) + 1);
  for (int z = 0; z <= M; ++z) c[z] = s * z;
  return c;
}

PublicCostModel with_sensitivity(PublicCostModel costs, double s, int M) {
  costs.c_f = linear_insecurity(s, M);
  return costs;
}

HValues h_values(int z, const VaRatePolicy& nu, const PublicCostModel& costs, const DiseaseParams& disease, int M) {
  check_z(z, M, costs);
  const double th = disease.theta_star();
  const double lam = disease.lambda;
  const double share = 1.0 - static_cast<double>(z) / M;
  const double cf = costs.c_f[z];
  HValues h;
  h.h_i = costs.c_v1 + share * costs.c_v2_bar - lam * th * costs.c_i / (lam * th + nu.nu_b) - cf;
  h.h_v = costs.c_v1 + share * capped_side_effect(costs, psi_e(nu.nu_b, nu.nu_e, disease.b)) - cf;
  if (disease.b * disease.rho() - nu.nu_e > 0.0) h.h_v_o = h_cooccurring(z, nu, costs, disease, M);
  return h;
}

double h_cooccurring(int z, const VaRatePolicy& nu, const PublicCostModel& costs, const DiseaseParams& disease, int M) {
  check_z(z, M, costs);
  const double th = disease.theta_star();
  const double po = psi_o(nu.nu_b, nu.nu_e, disease);
  const double to = th - po;
  const double lam = disease.lambda;
  const double share = 1.0 - static_cast<double>(z) / M;
  return costs.c_v1 + share * capped_side_effect(costs, po) -
         lam * to * costs.c_i / (lam * to + nu.nu_b + nu.nu_e * po) - costs.c_f[z];
}

Admissibility is_admissible(const VaRatePolicy& nu, const DiseaseParams& disease) {
  if (disease.rho() <= 1.0) return Admissibility::no_intervention_needed;
  const double cut = disease.b * disease.rho() - nu.nu_b / disease.theta_star();
  return (nu.nu_e > cut && nu.nu_e >= 0.0) ? Admissibility::admissible : Admissibility::not_admissible;
}

const char* to_string(Admissibility a) {
  switch (a) {
    case Admissibility::admissible: return "admissible";
    case Admissibility::not_admissible: return "not-admissible";
    case Admissibility::no_intervention_needed: return "no-intervention-needed";
  }
  return "?";
}

std::vector<std::string> EssReport::esss_set() const {
  std::vector<std::string> out;
  if (self_eradicating) out.emplace_back("self_eradicating");
  if (non_vaccinating) out.emplace_back("non_vaccinating");
  if (eradicating) out.emplace_back("eradicating");
  if (co_occurring) out.emplace_back("co_occurring");
  if (out.empty()) out.emplace_back("none");
  return out;
}

EssReport classify_esss(int z, const VaRatePolicy& nu, const PublicCostModel& costs, const DiseaseParams& disease,
                        int M) {
  EssReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  rep.admissibility = is_admissible(nu, disease);
  const double b = disease.b;
  if (disease.rho() <= 1.0) {
    rep.self_eradicating = true;
    rep.witnesses.push_back({"self_eradicating", 0.0, nu.nu_b > 0.0 ? b / nu.nu_b : inf});
    return rep;
  }
  const HValues h = h_values(z, nu, costs, disease, M);
  rep.h_i = h.h_i;
  rep.h_v = h.h_v;
  rep.h_v_o = h.h_v_o;
  for (auto [name, val] : {std::pair<const char*, std::optional<double>>{"h_i", h.h_i}, {"h_v", h.h_v}, {"h_v_o", h.h_v_o}})
    if (val && std::abs(*val) < kTieBand) rep.warnings.push_back(std::string(name) + " within 1e-12 of zero");

  const double rho = disease.rho();
  const double th = disease.theta_star();
  const double cut = b * rho - nu.nu_b / th;
  rep.non_vaccinating = h.h_i > 0.0;
  if (rep.non_vaccinating) rep.witnesses.push_back({"non_vaccinating", 0.0, nu.nu_b > 0.0 ? b * rho / nu.nu_b : inf});
  rep.eradicating = h.h_v < 0.0 && rep.admissibility == Admissibility::admissible;
  if (rep.eradicating) {
    const double pe = psi_e(nu.nu_b, nu.nu_e, b);
    rep.witnesses.push_back({"eradicating", pe > 0.0 ? 1.0 / pe : inf, inf});
  }
  rep.co_occurring = h.h_v_o && *h.h_v_o < 0.0 && nu.nu_e >= 0.0 && nu.nu_e < cut;
  if (rep.co_occurring) rep.witnesses.push_back({"co_occurring", 1.0 / psi_o(nu.nu_b, nu.nu_e, disease), inf});
  rep.eradication_conditional =
      (h.h_i <= 0.0 && h.h_v < 0.0 && rep.admissibility == Admissibility::admissible) ? 1 : 0;
  return rep;
}

int eradication_probability(int z, const VaRatePolicy& nu, const PublicCostModel& costs,
                            const DiseaseParams& disease, int M) {
  if (is_admissible(nu, disease) != Admissibility::admissible) return 0;
  const HValues h = h_values(z, nu, costs, disease, M);
  return (h.h_i <= 0.0 && h.h_v < 0.0) ? 1 : 0;
}

int eradication_threshold(const VaRatePolicy& nu, const PublicCostModel& costs, const DiseaseParams& disease, int M) {
  costs.validate();
  if (costs.M() != M) throw DomainError("insecurity table size must be M+1");
  if (!costs.influence_sufficient()) throw InsufficientInfluence("c_v1 - c_f(M) >= 0: eradication impossible for every z");
  if (is_admissible(nu, disease) != Admissibility::admissible) throw NotAdmissible("VA policy is not admissible");
  for (int z = 0; z <= M; ++z) {
    const HValues h = h_values(z, nu, costs, disease, M);
    if (h.h_v < 0.0 && h.h_i <= 0.0) return z;
  }
  throw InternalConsistencyError("no z satisfies the eradication conditions despite A.1");
}

}  // namespace vaxgame
