#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "vaxgame/epidemic_core.hpp"
#include "vaxgame/errors.hpp"
#include "vaxgame/ess_analysis.hpp"
#include "vaxgame/influencer_game.hpp"
#include "vaxgame/kernels/outcome_kernels.hpp"
#include "vaxgame/leader_optimizer.hpp"
#include "vaxgame/report.hpp"
#include "vaxgame/scenario.hpp"
#include "vaxgame/special_strategy.hpp"

using json = nlohmann::ordered_json;
using namespace vaxgame;

namespace {

struct ModelFlags {
  DiseaseParams disease{15.0, 2.0, 2.0, -1.0};
  VaRatePolicy nu{1.0, 1.0};
  double beta = 2.0;
  InfluencerGameConfig game;
  double c_v1 = 0.2, c_v2 = 0.05, c_v2_bar = 100.0, c_i_public = 0.5, s = 0.2;
  std::string cf_table;
  std::uint64_t seed = 1;
};

void add_disease(CLI::App* app, ModelFlags& f) {
  app->add_option("--lambda", f.disease.lambda, "infection rate");
  app->add_option("--r", f.disease.r, "recovery rate");
  app->add_option("--b", f.disease.b, "birth rate");
  app->add_option("--d", f.disease.d, "death rate (default b/4)");
}

void add_policy(CLI::App* app, ModelFlags& f) {
  app->add_option("--nu-b", f.nu.nu_b, "baseline VA epoch rate");
  app->add_option("--nu-e", f.nu.nu_e, "VA epoch rate per unit vaccinated share");
}

void add_costs(CLI::App* app, ModelFlags& f) {
  app->add_option("--cv1", f.c_v1, "public cost c_v1");
  app->add_option("--cv2", f.c_v2, "public cost c_v2");
  app->add_option("--cv2-bar", f.c_v2_bar, "public cost cap c_v2_bar");
  app->add_option("--ci-public", f.c_i_public, "public infection cost c_i");
  app->add_option("--s", f.s, "insecurity slope, c_f(k) = s k");
  app->add_option("--cf-table", f.cf_table, "file with c_f(0..M), whitespace or comma separated");
}

void add_game(CLI::App* app, ModelFlags& f) {
  app->add_option("--m", f.game.M, "number of influencers");
  app->add_option("--t", f.game.T, "horizon in days");
  app->add_option("--cv", f.game.C_v, "influencer vaccination cost");
  app->add_option("--ci", f.game.C_i, "influencer infection cost");
  app->add_option("--cse1", f.game.c_se_1, "initial side-effect estimate");
  app->add_option("--xi-mean", f.game.xi_mean, "location of the side-effect noise");
  app->add_option("--xi-var", f.game.xi_sigma2, "variance of the side-effect noise");
  app->add_option("--p0", f.game.p0, "mass of the side-effect noise at zero");
}

DiseaseParams disease_of(const ModelFlags& f) {
  DiseaseParams d = f.disease;
  if (d.d < 0.0) d.d = d.b / 4.0;
  return d;
}

PublicCostModel costs_of(const ModelFlags& f, int M) {
  PublicCostModel c{f.c_v1, f.c_v2, f.c_v2_bar, f.c_i_public, {}};
  if (!f.cf_table.empty()) {
    std::ifstream in(f.cf_table);
    if (!in) throw ConfigError("cannot open " + f.cf_table);
    std::string tok;
    while (in >> tok) {
      std::stringstream ss(tok);
      std::string part;
      while (std::getline(ss, part, ','))
        if (!part.empty()) c.c_f.push_back(std::stod(part));
    }
    if (c.M() != M) throw ConfigError("cf table needs M+1 entries");
  } else {
    c.c_f = linear_insecurity(f.s, M);
  }
  return c;
}

std::string yaml_scalar_text(const YAML::Node& n) {
  if (n.IsScalar()) return n.Scalar();
  if (n.IsSequence()) {
    std::string out;
    for (const auto& e : n) out += (out.empty() ? "" : ",") + e.Scalar();
    return out;
  }
  throw ConfigError("config values must be scalars or lists");
}

// flat key/value config: each key names a long flag of the subcommand and wins over the command line
std::vector<std::string> config_args(const std::string& path, const CLI::App* sub) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw ConfigError("cannot read config " + path + ": " + e.what());
  }
  std::vector<std::string> out;
  if (root.IsNull()) return out;
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const std::string flag = "--" + key;
    const CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option(flag);
    } catch (const CLI::OptionNotFound&) {
      throw ConfigError("unknown config key '" + key + "' for " + sub->get_name());
    }
    if (opt->get_type_size() == 0) {
      if (kv.second.as<bool>()) out.push_back(flag);
    } else {
      out.push_back(flag);
      out.push_back(yaml_scalar_text(kv.second));
    }
  }
  return out;
}

json solution_json(const LeaderSolution& s) {
  return json{{"z_bar", s.z_bar},
              {"g_star", s.g_star},
              {"U_star", s.U_star},
              {"U_star_raw", s.U_star_raw},
              {"binding", s.binding},
              {"p_expectation", s.p_expectation},
              {"NP_at_g", s.NP_at_g},
              {"iterations", s.iterations},
              {"sampler_ci", s.sampler_ci},
              {"mode", to_string(s.mode)}};
}

json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

int cmd_analyze_ess(const ModelFlags& f, std::optional<int> z_only) {
  const DiseaseParams disease = disease_of(f);
  disease.validate();
  const int M = f.game.M;
  const PublicCostModel costs = costs_of(f, M);
  costs.validate();

  json out;
  out["rho"] = disease.rho();
  out["admissibility"] = to_string(is_admissible(f.nu, disease));
  out["psi_e"] = psi_e(f.nu.nu_b, f.nu.nu_e, disease.b);
  try {
    out["z_bar"] = eradication_threshold(f.nu, costs, disease, M);
  } catch (const NotAdmissible& e) {
    out["z_bar"] = nullptr;
    out["z_bar_error"] = e.what();
  }
  json reports = json::array();
  std::string table = "z,h_i,h_v,h_v_o,P_E,esss\n";
  for (int z = 0; z <= M; ++z) {
    if (z_only && z != *z_only) continue;
    const EssReport r = classify_esss(z, f.nu, costs, disease, M);
    json j{{"z", z},
           {"h_i", opt_num(r.h_i)},
           {"h_v", opt_num(r.h_v)},
           {"h_v_o", opt_num(r.h_v_o)},
           {"self_eradicating", r.self_eradicating},
           {"non_vaccinating", r.non_vaccinating},
           {"eradicating", r.eradicating},
           {"co_occurring", r.co_occurring},
           {"eradication_conditional", r.eradication_conditional},
           {"admissibility", to_string(r.admissibility)},
           {"esss", r.esss_set()}};
    json w = json::array();
    for (const auto& b : r.witnesses) w.push_back({{"esss", b.esss}, {"beta_lower", b.lower}, {"beta_upper", std::isinf(b.upper) ? json("inf") : json(b.upper)}});
    j["beta_witnesses"] = w;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    reports.push_back(j);
    std::string set;
    for (const auto& s : r.esss_set()) set += (set.empty() ? "" : "+") + s;
    table += std::to_string(z) + "," + fmt_num(r.h_i.value_or(NAN)) + "," + fmt_num(r.h_v.value_or(NAN)) + "," +
             fmt_num(r.h_v_o.value_or(NAN)) + "," + std::to_string(r.eradication_conditional) + "," + set + "\n";
  }
  out["reports"] = reports;
  std::cout << out.dump(2) << "\n\n" << table;
  return 0;
}

int cmd_solve_game(ModelFlags f, int zbar, double g0, std::size_t samples, bool verify, int xi_nodes,
                   const std::string& hist_out) {
  InfluencerGameConfig cfg = f.game;
  cfg.z_bar = zbar;
  cfg = with_incentive(cfg, g0);
  cfg.validate();

  std::mt19937_64 rng(f.seed);
  const CostPath path = sample_cost_path(cfg, rng);
  const double c_last = path.C.back();
  const double p = ne_outcome_probability(g0, c_last, zbar, cfg);
  json out{{"z_bar", zbar},
           {"g0", g0},
           {"gamma_last", gamma(cfg.T - 1, c_last, cfg)},
           {"c_path", path.C},
           {"p", p},
           {"seed", f.seed}};

  std::vector<std::size_t> hist(static_cast<std::size_t>(cfg.M) + 1, 0);
  double p_sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const OutcomeDraw d = sample_outcome(g0, cfg, rng);
    ++hist[static_cast<std::size_t>(d.Z_T)];
    p_sum += d.p;
  }
  out["samples"] = samples;
  if (samples > 0) {
    out["p_mean"] = p_sum / static_cast<double>(samples);
    std::size_t below = 0;
    for (int z = 0; z < zbar; ++z) below += hist[static_cast<std::size_t>(z)];
    out["non_eradication_frequency"] = static_cast<double>(below) / static_cast<double>(samples);
  }
  if (verify) {
    StrategyOptions so;
    so.tree.xi_nodes = xi_nodes;
    const SpecialStrategy st = build_special_strategy(cfg, wait_and_watch_selector(), so);
    const NeVerification v = verify_symmetric_ne(st, 1e-9);
    out["ne_verification"] = {{"pass", v.pass},
                              {"worst_gain", v.worst_gain},
                              {"worst_one_shot_gain", v.worst_one_shot_gain},
                              {"vaccinated_value_error", v.vaccinated_value_error}};
  }
  std::cout << out.dump(2) << "\n";

  CsvTable t;
  t.columns = {"Z_T", "count", "frequency"};
  for (int z = 0; z <= cfg.M; ++z) {
    const auto c = hist[static_cast<std::size_t>(z)];
    t.add_row({std::to_string(z), std::to_string(c),
               fmt_num(samples ? static_cast<double>(c) / static_cast<double>(samples) : 0.0)});
  }
  if (hist_out.empty()) std::cout << "\n" << t.to_csv();
  else write_text_file(hist_out, t.to_csv());
  return 0;
}

int cmd_optimize_leader(const ModelFlags& f, double delta, std::optional<int> zbar, bool auto_zbar,
                        const std::string& mode, std::size_t samples, const std::string& csv) {
  InfluencerGameConfig cfg = f.game;
  cfg.validate();
  if (mode != "mc" && mode != "perfect") throw ConfigError("--mode must be mc or perfect");
  int zb = 0;
  json out;
  if (auto_zbar) {
    const DiseaseParams disease = disease_of(f);
    disease.validate();
    const PublicCostModel costs = costs_of(f, cfg.M);
    zb = eradication_threshold(f.nu, costs, disease, cfg.M);
    out["z_bar_source"] = "policy";
  } else if (zbar) {
    zb = *zbar;
  } else {
    throw ConfigError("give --zbar or --auto-zbar");
  }
  const LeaderProblem prob = make_leader_problem(
      delta, cfg, mode == "mc" ? SamplerMode::monte_carlo : SamplerMode::perfect_info, samples, f.seed);
  const LeaderSolution s = solve_optimal_incentive(zb, prob);
  out["delta"] = delta;
  out["sigma2"] = cfg.xi_sigma2;
  out["seed"] = f.seed;
  out["kernel"] = kernels::backend_name(kernels::active_backend());
  out["solution"] = solution_json(s);
  std::cout << out.dump(2) << "\n";
  if (!csv.empty()) {
    std::ifstream probe(csv);
    const bool fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    std::string text = fresh ? "zbar,delta,sigma2,g_star,U_star,NP_at_g\n" : "";
    text += std::to_string(zb) + "," + fmt_num(delta) + "," + fmt_num(cfg.xi_sigma2) + "," + fmt_num(s.g_star) + "," +
            fmt_num(s.U_star) + "," + fmt_num(s.NP_at_g) + "\n";
    append_text_file(csv, text);
  }
  return 0;
}

int cmd_simulate(const ModelFlags& f, const OdeState& init, double horizon, std::int64_t n0,
                 std::uint64_t events, std::uint64_t record_every, const std::string& out_path) {
  const DiseaseParams disease = disease_of(f);
  disease.validate();
  const ResponseParams beta{f.beta};

  std::string csv = trajectory_csv_header();
  JumpResult jump;
  if (n0 > 0) {
    PopulationCounts pc;
    pc.I = std::llround(init.theta * n0);
    pc.V = std::llround(init.psi * n0);
    pc.S = n0 - pc.I - pc.V;
    if (pc.S < 0) throw ConfigError("theta0 + psi0 must not exceed 1");
    JumpOptions jo;
    jo.n_events = events;
    jo.start_index = static_cast<std::uint64_t>(std::llround(n0 / init.eta));
    jo.record_every = record_every;
    jump = simulate_jump_process(pc, disease, f.nu, beta, f.seed, jo);
  }
  IntegrationOptions io;
  io.horizon = horizon;
  if (n0 > 0) {
    for (const auto& s : jump.samples) io.sample_times.push_back(s.t);
  } else {
    io.record_every = static_cast<int>(std::max<std::uint64_t>(record_every, 1));
  }
  const IntegrationResult ode = integrate_to_equilibrium(init, disease, f.nu, beta, io);
  append_trajectory_csv(csv, ode.trajectory, "ode");
  if (n0 > 0) append_trajectory_csv(csv, jump.samples);
  write_text_file(out_path, csv);

  const AttractorSet att = candidate_attractors(disease, f.nu, beta);
  json active = json::array();
  for (const auto* a : att.active()) active.push_back({a->point.theta, a->point.psi, a->point.eta});
  json j{{"ode_limit", {ode.limit.theta, ode.limit.psi, ode.limit.eta}},
         {"ode_converged", ode.converged},
         {"t_end", ode.t_end},
         {"active_attractors", active},
         {"output", out_path}};
  if (n0 > 0) j["jump"] = {{"events", jump.events}, {"extinct", jump.extinct}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vaxgame: vaccination incentive game solver"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  ModelFlags f;
  std::string config;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "YAML file whose keys override flags of the same name");
    sub->add_option("--seed", f.seed, "master seed");
  };

  auto* ess = app.add_subcommand("analyze-ess", "classify the evolutionarily stable states");
  common(ess);
  add_disease(ess, f);
  add_policy(ess, f);
  add_costs(ess, f);
  ess->add_option("--m", f.game.M, "number of influencers");
  std::optional<int> ess_z;
  ess->add_option("--z", ess_z, "report only this vaccinated-influencer count");

  auto* game = app.add_subcommand("solve-influencer-game", "wait-and-watch equilibrium and outcome histogram");
  common(game);
  add_game(game, f);
  int g_zbar = 1;
  double g0 = 0.0;
  std::size_t g_samples = 10000;
  bool g_verify = false;
  int g_nodes = 8;
  std::string g_hist;
  game->add_option("--zbar", g_zbar, "eradication threshold");
  game->add_option("--g0", g0, "incentive while no influencer has vaccinated");
  game->add_option("--samples", g_samples, "Monte Carlo games for the Z_T histogram");
  game->add_flag("--verify", g_verify, "build the special strategy on a side-effect grid and verify the NE");
  game->add_option("--xi-nodes", g_nodes, "side-effect grid size for --verify");
  game->add_option("--hist-out", g_hist, "write the histogram CSV here instead of stdout");

  auto* lead = app.add_subcommand("optimize-leader", "optimal incentive for a given eradication threshold");
  common(lead);
  add_game(lead, f);
  add_disease(lead, f);
  add_policy(lead, f);
  add_costs(lead, f);
  double l_delta = 0.05;
  std::optional<int> l_zbar;
  bool l_auto = false;
  std::string l_mode = "mc";
  std::size_t l_samples = 100000;
  std::string l_csv;
  lead->add_option("--delta", l_delta, "non-eradication tolerance");
  lead->add_option("--zbar", l_zbar, "eradication threshold");
  lead->add_flag("--auto-zbar", l_auto, "derive the threshold from the VA policy and public costs");
  lead->add_option("--mode", l_mode, "mc or perfect");
  lead->add_option("--samples", l_samples, "Monte Carlo draws of the last-epoch expectation");
  lead->add_option("--csv", l_csv, "append a row to this sweep file");

  auto* sim = app.add_subcommand("simulate", "ODE trajectory and optional jump-process sample path");
  common(sim);
  add_disease(sim, f);
  add_policy(sim, f);
  sim->add_option("--beta", f.beta, "response steepness");
  OdeState init{0.1, 0.2, 1.0};
  double s_horizon = 50.0;
  std::int64_t s_n0 = 0;
  std::uint64_t s_events = 1000000, s_every = 1000;
  std::string s_out = "trajectory.csv";
  sim->add_option("--theta0", init.theta, "initial infected share");
  sim->add_option("--psi0", init.psi, "initial vaccinated share");
  sim->add_option("--eta0", init.eta, "initial population ratio");
  sim->add_option("--horizon", s_horizon, "ODE horizon when no jump process is run");
  sim->add_option("--n0", s_n0, "initial population for the jump process (0 skips it)");
  sim->add_option("--events", s_events, "jump-process events");
  sim->add_option("--record-every", s_every, "record every n-th event or step");
  sim->add_option("--out", s_out, "trajectory CSV");

  auto* fig = app.add_subcommand("reproduce-fig", "run a figure preset");
  common(fig);
  int fig_id = 1;
  std::string fig_out = "out";
  std::optional<std::size_t> fig_samples;
  bool fig_plot = false;
  fig->add_option("--id", fig_id, "figure 1..5")->required();
  fig->add_option("--outdir", fig_out, "output directory");
  fig->add_option("--samples", fig_samples, "override the Monte Carlo sample count");
  fig->add_flag("--plot", fig_plot, "also write SVG charts");

  auto* run = app.add_subcommand("run-scenario", "run a scenario file");
  std::string scen;
  bool run_plot = false;
  std::string run_out;
  run->add_option("--config", scen, "scenario YAML or JSON")->required();
  std::optional<std::uint64_t> run_seed;
  run->add_option("--seed", run_seed, "override the scenario seed");
  run->add_option("--outdir", run_out, "override the output directory");
  run->add_flag("--plot", run_plot, "also write SVG charts");
  app.add_subcommand("schema", "print the scenario file schema");

  try {
    app.parse(argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    if (!config.empty() && sub != run) {
      std::vector<std::string> args(argv + 1, argv + argc);
      for (auto& a : config_args(config, sub)) args.push_back(a);
      std::reverse(args.begin(), args.end());
      config.clear();
      app.parse(args);
    }
    if (sub->get_name() == "schema") {
      std::cout << describe_scenario_schema();
      return 0;
    }
    if (sub == ess) return cmd_analyze_ess(f, ess_z);
    if (sub == game) return cmd_solve_game(f, g_zbar, g0, g_samples, g_verify, g_nodes, g_hist);
    if (sub == lead) return cmd_optimize_leader(f, l_delta, l_zbar, l_auto, l_mode, l_samples, l_csv);
    if (sub == sim) return cmd_simulate(f, init, s_horizon, s_n0, s_events, s_every, s_out);
    if (sub == fig) {
      const auto res = reproduce_figure(fig_id, fig_out, f.seed, fig_samples, fig_plot);
      for (const auto& p : res.files) std::cout << p << "\n";
      return 0;
    }
    if (sub == run) {
      ScenarioConfig sc = load_scenario(scen);
      if (run_seed) sc.seed = *run_seed;
      if (!run_out.empty()) sc.outdir = run_out;
      if (run_plot) sc.plot = true;
      const auto res = run_scenario(sc, true);
      for (const auto& p : res.files) std::cout << p << "\n";
      return 0;
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InsufficientInfluence& e) {
    std::cerr << "infeasible model: " << e.what() << "\n";
    return 3;
  } catch (const NotAdmissible& e) {
    std::cerr << "infeasible model: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
