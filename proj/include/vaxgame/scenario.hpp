#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vaxgame/epidemic_core.hpp"
#include "vaxgame/ess_analysis.hpp"
#include "vaxgame/influencer_game.hpp"
#include "vaxgame/leader_optimizer.hpp"
#include "vaxgame/report.hpp"

namespace vaxgame {

enum class SweepVar { zbar, delta, sigma2, theta_star, s };

const char* to_string(SweepVar v);
SweepVar parse_sweep_var(const std::string& s);

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  DiseaseParams disease{15.0, 2.0, 2.0, 0.5};
  std::optional<VaRatePolicy> nu;
  bool joint_design = false;
  double joint_eps = 1e-3;
  bool has_costs = false;
  PublicCostModel costs;
  std::optional<double> sensitivity;  // c_f(z) = s z when set
  InfluencerGameConfig game;
  std::vector<double> deltas;
  std::vector<int> zbars;
  bool zbar_auto = false;
  SamplerMode mode = SamplerMode::monte_carlo;
  std::size_t samples = 100000;
  SweepVar sweep = SweepVar::delta;
  std::vector<double> values;
  std::string outdir = ".";
  bool plot = false;
  std::string note;

  void validate() const;
};

ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);
std::string describe_scenario_schema();

ScenarioConfig figure_preset(int id);

struct ScenarioResult {
  CsvTable table;
  CsvTable timing;
  CsvTable crossover;  // filled for delta sweeps with both z_bar = 1 and z_bar = M
  std::vector<std::string> files;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, bool write_files = true);

ScenarioResult reproduce_figure(int id, const std::string& outdir, std::uint64_t seed,
                                std::optional<std::size_t> samples = std::nullopt, bool plot = false);

}  // namespace vaxgame
