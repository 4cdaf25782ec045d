#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vaxgame/epidemic_core.hpp"

namespace vaxgame {

struct PublicCostModel {
  double c_v1 = 0.0;
  double c_v2 = 0.0;
  double c_v2_bar = 0.0;
  double c_i = 0.0;
  std::vector<double> c_f;  // insecurity cost for z = 0..M

  int M() const { return static_cast<int>(c_f.size()) - 1; }
  void validate() const;
  bool influence_sufficient() const;  // c_v1 - c_f(M) < 0
};

std::vector<double> linear_insecurity(double s, int M);
PublicCostModel with_sensitivity(PublicCostModel costs, double s, int M);

struct HValues {
  double h_i = 0.0;
  double h_v = 0.0;
  std::optional<double> h_v_o;
};

HValues h_values(int z, const VaRatePolicy& nu, const PublicCostModel& costs, const DiseaseParams& disease, int M);
// throws DomainError when psi_o is undefined
double h_cooccurring(int z, const VaRatePolicy& nu, const PublicCostModel& costs, const DiseaseParams& disease, int M);

enum class Admissibility { admissible, not_admissible, no_intervention_needed };

Admissibility is_admissible(const VaRatePolicy& nu, const DiseaseParams& disease);
const char* to_string(Admissibility a);

struct BetaWitness {
  std::string esss;
  double lower = 0.0;
  double upper = 0.0;  // may be +inf
};

struct EssReport {
  std::optional<double> h_i, h_v, h_v_o;
  bool self_eradicating = false;
  bool non_vaccinating = false;
  bool eradicating = false;
  bool co_occurring = false;
  int eradication_conditional = 0;
  Admissibility admissibility = Admissibility::not_admissible;
  std::vector<BetaWitness> witnesses;
  std::vector<std::string> warnings;

  std::vector<std::string> esss_set() const;  // "none" when empty
};

EssReport classify_esss(int z, const VaRatePolicy& nu, const PublicCostModel& costs, const DiseaseParams& disease,
                        int M);

// P(E | Z = z), exactly 0 or 1
int eradication_probability(int z, const VaRatePolicy& nu, const PublicCostModel& costs,
                            const DiseaseParams& disease, int M);

int eradication_threshold(const VaRatePolicy& nu, const PublicCostModel& costs, const DiseaseParams& disease, int M);

}  // namespace vaxgame
