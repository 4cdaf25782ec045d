#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vaxgame/influencer_game.hpp"

namespace vaxgame {

enum class Status { S, V };

struct AgentState {
  Status status = Status::S;
  int z = 0;
  double c = 0.0;
};

struct ActionSet {
  bool has_zero = false;
  bool has_one = false;
  bool full_interval = false;
  std::vector<double> mixed;  // interior points, ascending

  bool contains(double p, double tol = 1e-12) const;
  double smallest() const;
  double largest() const;
  bool is_singleton_zero() const { return has_zero && !has_one && !full_interval && mixed.empty(); }
  std::string describe() const;
};

using Selector = std::function<double(int t, const AgentState& x, const ActionSet& set)>;

Selector wait_and_watch_selector();
Selector eager_selector();

// side-effect estimates reachable from c_se_1 on a fixed xi grid: one node per (stage, history)
struct CostTree {
  int T = 2;
  std::vector<XiNode> xi;
  double xi_mean = 0.0;
  // stages[t-1] holds the c values at stage t, t = 1..T-1
  std::vector<std::vector<double>> stages;
  std::vector<std::map<double, std::size_t>> index;

  std::size_t child(int t, std::size_t node, std::size_t k) const { return node * xi.size() + k; }
  double next_c(int t, double c, std::size_t k) const;
  std::size_t find(int t, double c) const;
};

struct TreeOptions {
  int xi_nodes = 512;
  std::size_t max_nodes = 4'000'000;
};

CostTree build_cost_tree(const InfluencerGameConfig& cfg, const TreeOptions& opts = {});

// d_t(z, node) for a susceptible agent, t = 1..T-1
struct DecisionProfile {
  int M = 1;
  std::vector<std::vector<double>> d;  // d[t-1][node*(M+1)+z]

  double get(int t, std::size_t node, int z) const { return d[t - 1][node * (M + 1) + z]; }
  void set(int t, std::size_t node, int z, double p) { d[t - 1][node * (M + 1) + z] = p; }
};

// the continuation v_{t+1}(S, z', c') given z' and the child index of the xi grid
using NextValue = std::function<double(int z_next, std::size_t k)>;

struct RootScan {
  int grid = 64;
  int bisect_iter = 200;
};

ActionSet stage_action_set(int t, const AgentState& x, const NextValue& value_next,
                           const std::vector<XiNode>& xi, double xi_mean,
                           const InfluencerGameConfig& cfg, const RootScan& scan = {});

struct SpecialStrategy {
  InfluencerGameConfig cfg;
  CostTree tree;
  DecisionProfile profile;
  std::vector<std::vector<double>> v;          // v[t-1][node*(M+1)+z]
  std::vector<std::vector<ActionSet>> sets;    // same layout

  double decision(int t, const AgentState& x) const;
  double value(int t, const AgentState& x) const;
  const ActionSet& action_set(int t, const AgentState& x) const;
};

struct StrategyOptions {
  TreeOptions tree;
  RootScan scan;
};

SpecialStrategy build_special_strategy(const InfluencerGameConfig& cfg, const Selector& selector,
                                       const StrategyOptions& opts = {});

struct NeVerification {
  bool pass = false;
  double worst_gain = 0.0;          // best-response value improvement over the profile
  double worst_one_shot_gain = 0.0;
  int worst_t = 0;
  int worst_z = 0;
  double worst_c = 0.0;
  double vaccinated_value_error = 0.0;  // max |u_t(V, c) - Gamma_t(c)|
};

NeVerification verify_symmetric_ne(const DecisionProfile& profile, const CostTree& tree,
                                   const InfluencerGameConfig& cfg, double tol);
NeVerification verify_symmetric_ne(const SpecialStrategy& strategy, double tol);

}  // namespace vaxgame
