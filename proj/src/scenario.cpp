#include "vaxgame/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "vaxgame/errors.hpp"
#include "vaxgame/parallel.hpp"

namespace vaxgame {

const char* to_string(SweepVar v) {
  switch (v) {
    case SweepVar::zbar: return "zbar";
    case SweepVar::delta: return "delta";
    case SweepVar::sigma2: return "sigma2";
    case SweepVar::theta_star: return "theta_star";
    case SweepVar::s: return "s";
  }
  return "?";
}

SweepVar parse_sweep_var(const std::string& s) {
  for (SweepVar v : {SweepVar::zbar, SweepVar::delta, SweepVar::sigma2, SweepVar::theta_star, SweepVar::s})
    if (s == to_string(v)) return v;
  throw ConfigError("unknown sweep variable '" + s + "' (expected zbar, delta, sigma2, theta_star or s)");
}

void ScenarioConfig::validate() const {
  if (values.empty()) throw ConfigError("sweep grid is empty");
  try {
    disease.validate();
    game.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  for (double d : deltas)
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("every delta must lie in (0,1)");
  for (int z : zbars)
    if (z < 1 || z > game.M) throw ConfigError("every zbar must lie in 1..M");
  const bool design_sweep = sweep == SweepVar::theta_star || sweep == SweepVar::s;
  if ((design_sweep || joint_design || zbar_auto) && !has_costs)
    throw ConfigError("this scenario needs a public_costs section");
  if (zbar_auto && !nu && !joint_design && !design_sweep) throw ConfigError("zbar: auto needs a policy or joint_design");
  if (has_costs && !sensitivity && costs.M() != game.M) throw ConfigError("cf_table needs M+1 entries");
  if (sweep == SweepVar::s && !has_costs) throw ConfigError("s sweep needs public_costs");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
    switch (sweep) {
      case SweepVar::zbar:
        if (v != std::floor(v) || v < 1 || v > game.M) throw ConfigError("zbar sweep values must be integers in 1..M");
        break;
      case SweepVar::delta:
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("delta sweep values must lie in (0,1)");
        break;
      case SweepVar::sigma2:
        if (v < 0.0) throw ConfigError("sigma2 sweep values must be nonnegative");
        break;
      case SweepVar::theta_star:
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("theta_star sweep values must lie in (0,1)");
        break;
      case SweepVar::s:
        if (v < 0.0) throw ConfigError("s sweep values must be nonnegative");
        break;
    }
  }
  const bool leader_sweep = sweep == SweepVar::zbar || sweep == SweepVar::delta || sweep == SweepVar::sigma2;
  if (leader_sweep && sweep != SweepVar::delta && deltas.empty()) throw ConfigError("leader.deltas is empty");
  if (leader_sweep && sweep != SweepVar::zbar && zbars.empty() && !zbar_auto) throw ConfigError("leader.zbars is empty");
}

namespace {

template <class T>
T get(const YAML::Node& n, const char* key, T fallback) {
  if (!n || !n[key]) return fallback;
  try {
    return n[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
T need(const YAML::Node& n, const char* section, const char* key) {
  if (!n || !n[key]) throw ConfigError(std::string("missing ") + section + "." + key);
  try {
    return n[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<double> range_values(double from, double to, double step) {
  if (!(step > 0.0)) throw ConfigError("sweep range step must be positive");
  std::vector<double> v;
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(std::round((from + step * i) * 1e12) / 1e12);
  return v;
}

std::vector<double> int_range(int from, int to) {
  std::vector<double> v;
  for (int z = from; z <= to; ++z) v.push_back(z);
  return v;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  ScenarioConfig c;
  c.name = get<std::string>(root, "name", c.name);
  c.seed = get<std::uint64_t>(root, "seed", c.seed);
  c.note = get<std::string>(root, "note", "");

  if (const auto d = root["disease"]) {
    c.disease.lambda = need<double>(d, "disease", "lambda");
    c.disease.r = need<double>(d, "disease", "r");
    c.disease.b = need<double>(d, "disease", "b");
    c.disease.d = get<double>(d, "d", c.disease.b / 4.0);
  }
  if (const auto p = root["policy"]) c.nu = VaRatePolicy{need<double>(p, "policy", "nu_b"), need<double>(p, "policy", "nu_e")};
  if (const auto j = root["joint_design"]) {
    c.joint_design = true;
    c.joint_eps = get<double>(j, "eps", c.joint_eps);
  }

  if (const auto g = root["game"]) {
    c.game.M = need<int>(g, "game", "M");
    c.game.T = need<int>(g, "game", "T");
    c.game.C_v = need<double>(g, "game", "C_v");
    c.game.C_i = need<double>(g, "game", "C_i");
    c.game.c_se_1 = need<double>(g, "game", "c_se1");
    c.game.xi_mean = need<double>(g, "game", "xi_mean");
    c.game.xi_sigma2 = need<double>(g, "game", "xi_var");
    c.game.p0 = get<double>(g, "p0", 0.0);
  }

  if (const auto pc = root["public_costs"]) {
    c.has_costs = true;
    c.costs.c_v1 = need<double>(pc, "public_costs", "c_v1");
    c.costs.c_v2 = need<double>(pc, "public_costs", "c_v2");
    c.costs.c_v2_bar = need<double>(pc, "public_costs", "c_v2_bar");
    c.costs.c_i = need<double>(pc, "public_costs", "c_i");
    if (pc["cf_table"]) {
      c.costs.c_f = get<std::vector<double>>(pc, "cf_table", {});
    } else {
      c.sensitivity = need<double>(pc, "public_costs", "s");
      c.costs.c_f = linear_insecurity(*c.sensitivity, c.game.M);
    }
  }

  if (const auto l = root["leader"]) {
    if (l["deltas"]) c.deltas = get<std::vector<double>>(l, "deltas", {});
    else if (l["delta"]) c.deltas = {get<double>(l, "delta", 0.05)};
    if (l["zbars"]) {
      c.zbars = get<std::vector<int>>(l, "zbars", {});
    } else if (l["zbar"]) {
      const std::string z = get<std::string>(l, "zbar", "");
      if (z == "auto") {
        c.zbar_auto = true;
      } else {
        try {
          c.zbars = {std::stoi(z)};
        } catch (const std::exception&) {
          throw ConfigError("leader.zbar must be an integer or 'auto'");
        }
      }
    }
    const std::string mode = get<std::string>(l, "mode", "mc");
    if (mode == "mc") c.mode = SamplerMode::monte_carlo;
    else if (mode == "perfect") c.mode = SamplerMode::perfect_info;
    else throw ConfigError("leader.mode must be mc or perfect");
    c.samples = get<std::size_t>(l, "samples", c.samples);
  }

  const auto sw = root["sweep"];
  if (!sw) throw ConfigError("missing sweep section");
  if (sw.IsMap() && sw.size() > 0 && !sw["variable"]) throw ConfigError("missing sweep.variable");
  c.sweep = parse_sweep_var(need<std::string>(sw, "sweep", "variable"));
  if (sw["values"]) {
    c.values = get<std::vector<double>>(sw, "values", {});
  } else if (const auto r = sw["range"]) {
    c.values = range_values(need<double>(r, "sweep.range", "from"), need<double>(r, "sweep.range", "to"),
                            need<double>(r, "sweep.range", "step"));
  } else {
    throw ConfigError("sweep needs values or range");
  }
  if (const auto o = root["output"]) {
    c.outdir = get<std::string>(o, "dir", c.outdir);
    c.plot = get<bool>(o, "plot", false);
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

std::string describe_scenario_schema() {
  return R"(name: fig1                      # output file stem
seed: 7
disease: {lambda: 15, r: 2, b: 2, d: 0.5}          # d defaults to b/4
policy: {nu_b: 5.0, nu_e: 0.7}                     # optional
joint_design: {eps: 0.001}                         # optional
public_costs: {c_v1: 0.2, c_v2: 0.05, c_v2_bar: 100, c_i: 0.5, s: 0.2}   # or cf_table: [c_f(0), ..., c_f(M)]
game: {M: 40, T: 20, C_v: 1, C_i: 5, c_se1: 3, xi_mean: 5, xi_var: 2, p0: 0}
leader: {deltas: [0.01, 0.05, 0.1], zbars: [1, 40], mode: mc, samples: 100000}   # zbar: auto also accepted
sweep: {variable: zbar, range: {from: 1, to: 40, step: 1}}   # or values: [...]; variable in zbar, delta, sigma2, theta_star, s
output: {dir: out, plot: true}
)";
}

namespace {

InfluencerGameConfig fig1_game() {
  InfluencerGameConfig g;
  g.M = 40;
  g.T = 20;
  g.C_v = 1.0;
  g.C_i = 5.0;
  g.c_se_1 = 3.0;
  g.xi_mean = 5.0;
  g.xi_sigma2 = 2.0;
  return g;
}

}  // namespace

ScenarioConfig figure_preset(int id) {
  ScenarioConfig c;
  c.seed = 20240607;
  c.game = fig1_game();
  switch (id) {
    case 1:
      c.name = "fig1";
      c.deltas = {0.01, 0.05, 0.1};
      c.sweep = SweepVar::zbar;
      c.values = int_range(1, 40);
      break;
    case 2:
      c.name = "fig2";
      c.zbars = {1, 40};
      c.sweep = SweepVar::delta;
      c.values = range_values(0.005, 0.2, 0.005);
      break;
    case 3:
      c.name = "fig3";
      c.zbars = {1, 40};
      c.deltas = {0.01, 0.05, 0.1};
      c.sweep = SweepVar::sigma2;
      c.values = {1e-4, 1e-3, 1e-2, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
      break;
    case 4:
      c.name = "fig4";
      c.disease = {14.0, 5.0, 2.0, 0.5};
      c.has_costs = true;
      c.costs = {6.0, 2.0, 15.0, 50.0, linear_insecurity(0.5, 40)};
      c.sensitivity = 0.5;
      c.joint_design = true;
      c.deltas = {0.01, 0.1};
      c.sweep = SweepVar::theta_star;
      c.values = range_values(0.02, 0.98, 0.02);
      c.samples = 20000;
      c.note = "costs c_v1=6 c_v2=2 c_v2_bar=15 c_i=50 c_f=0.5k r=5 b=2; the game layer reuses the fig1 parameters";
      break;
    case 5:
      c.name = "fig5";
      c.disease = {15.0, 2.0, 2.0, 0.5};
      c.has_costs = true;
      c.costs = {0.2, 0.05, 100.0, 0.5, linear_insecurity(0.2, 40)};
      c.sensitivity = 0.2;
      c.joint_design = true;
      c.deltas = {0.01, 0.1};
      c.sweep = SweepVar::s;
      c.values = range_values(0.01, 0.5, 0.01);
      c.samples = 20000;
      c.note = "the figure-4 caption points at these costs as well; both parameter sets are kept as separate presets";
      break;
    default:
      throw ConfigError("figure id must be 1..5");
  }
  return c;
}

namespace {

const std::vector<std::string> kColumns = {
    "sweep", "value", "design", "zbar", "delta", "sigma2", "g_star", "g_star_plus_Ci", "U_star", "U_star_raw",
    "NP_at_g", "p_mean", "binding", "g_perfect", "U_perfect", "argmin_U", "k_star", "psi_e", "incentive_optimal",
    "psi_e_incentive", "theta_star"};

struct PointRow {
  std::string design;
  int zbar = 0;
  double delta = std::nan("");
  std::optional<LeaderSolution> sol;
  std::optional<LeaderSolution> perfect;
  bool argmin = false;
};

struct PointResult {
  double value = 0.0;
  double sigma2 = 0.0;
  double theta_star = std::nan("");
  std::optional<int> k_star;
  double psi_e = std::nan("");
  std::optional<bool> incentive_optimal;
  double psi_e_incentive = std::nan("");
  std::vector<PointRow> rows;
  double runtime_ms = 0.0;
};

std::string b2s(bool b) { return b ? "1" : "0"; }

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, bool write_files) {
  cfg.validate();
  const int M = cfg.game.M;
  const bool design_sweep = cfg.sweep == SweepVar::theta_star || cfg.sweep == SweepVar::s;

  std::optional<ExpectationSampler> shared;
  if (cfg.sweep != SweepVar::sigma2) shared = make_sampler(cfg.game, cfg.mode, cfg.samples, cfg.seed);

  std::vector<PointResult> points(cfg.values.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = cfg.values[i];
    PointResult& pr = points[i];
    pr.value = v;
    DiseaseParams disease = cfg.disease;
    PublicCostModel costs = cfg.costs;
    InfluencerGameConfig game = cfg.game;
    std::vector<double> deltas = cfg.deltas;
    std::vector<int> zbars = cfg.zbars;
    switch (cfg.sweep) {
      case SweepVar::zbar: zbars = {static_cast<int>(v)}; break;
      case SweepVar::delta: deltas = {v}; break;
      case SweepVar::sigma2: game.xi_sigma2 = v; break;
      case SweepVar::theta_star: disease.lambda = (disease.r + disease.b) / (1.0 - v); break;
      case SweepVar::s: costs.c_f = linear_insecurity(v, M); break;
    }
    if (cfg.has_costs && cfg.sensitivity && cfg.sweep != SweepVar::s) costs.c_f = linear_insecurity(*cfg.sensitivity, M);
    pr.sigma2 = game.xi_sigma2;
    if (disease.rho() > 1.0) pr.theta_star = disease.theta_star();

    std::vector<std::pair<std::string, int>> designs;
    if (design_sweep || cfg.joint_design) {
      const KStarResult ks = vaccine_optimal_k(costs, disease, M);
      const JointDesign jd = construct_eps_vaccine_optimal_nu(ks.k_star, cfg.joint_eps, costs, disease, M);
      pr.k_star = ks.k_star;
      pr.psi_e = jd.psi_e_achieved;
      pr.incentive_optimal = jd.incentive_optimal_exists;
      if (jd.incentive_optimal_exists) {
        if (auto nu = incentive_optimal_nu(costs, disease, M)) pr.psi_e_incentive = psi_e(nu->nu_b, nu->nu_e, disease.b);
      }
      if (design_sweep) {
        designs.push_back({"vaccine_optimal", ks.k_star});
        if (jd.incentive_optimal_exists && ks.k_star != M) designs.push_back({"incentive_optimal", M});
      }
    }
    if (!design_sweep) {
      if (cfg.zbar_auto) {
        const int zb = cfg.nu ? eradication_threshold(*cfg.nu, costs, disease, M) : *pr.k_star;
        if (cfg.nu) pr.psi_e = psi_e(cfg.nu->nu_b, cfg.nu->nu_e, disease.b);
        designs.push_back({"auto", zb});
      } else {
        for (int z : zbars) designs.push_back({"fixed", z});
      }
    }

    if (!deltas.empty()) {
      const ExpectationSampler sampler =
          shared ? *shared : make_sampler(game, cfg.mode, cfg.samples, derive_seed(cfg.seed, i));
      for (double delta : deltas) {
        LeaderProblem prob{delta, game, sampler};
        LeaderProblem perf{delta, game, make_sampler(game, SamplerMode::perfect_info, 1, 0)};
        std::vector<PointRow> group;
        for (const auto& [name, zb] : designs) {
          PointRow row;
          row.design = name;
          row.zbar = zb;
          row.delta = delta;
          row.sol = solve_optimal_incentive(zb, prob);
          row.perfect = perfect_info_solution(zb, perf);
          group.push_back(row);
        }
        if (group.size() > 1) {
          auto best = std::min_element(group.begin(), group.end(),
                                       [](const PointRow& a, const PointRow& b) { return a.sol->U_star < b.sol->U_star; });
          best->argmin = true;
        }
        pr.rows.insert(pr.rows.end(), group.begin(), group.end());
      }
    } else {
      for (const auto& [name, zb] : designs) pr.rows.push_back({name, zb});
      if (designs.empty()) pr.rows.push_back({});
    }
    pr.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  });

  ScenarioResult res;
  res.table.columns = kColumns;
  res.timing.columns = {"index", "value", "runtime_ms"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const PointResult& pr = points[i];
    res.timing.add_row({std::to_string(i), fmt_num(pr.value), fmt_num(pr.runtime_ms)});
    for (const auto& row : pr.rows) {
      std::vector<std::string> r(kColumns.size());
      r[0] = to_string(cfg.sweep);
      r[1] = fmt_num(pr.value);
      r[2] = row.design;
      r[3] = row.zbar > 0 ? std::to_string(row.zbar) : "";
      r[4] = fmt_num(row.delta);
      r[5] = fmt_num(pr.sigma2);
      if (row.sol) {
        r[6] = fmt_num(row.sol->g_star);
        r[7] = fmt_num(row.sol->g_star + cfg.game.C_i);
        r[8] = fmt_num(row.sol->U_star);
        r[9] = fmt_num(row.sol->U_star_raw);
        r[10] = fmt_num(row.sol->NP_at_g);
        r[11] = fmt_num(row.sol->p_expectation);
        r[12] = b2s(row.sol->binding);
        r[13] = fmt_num(row.perfect->g_star);
        r[14] = fmt_num(row.perfect->U_star);
        r[15] = b2s(row.argmin);
      }
      r[16] = pr.k_star ? std::to_string(*pr.k_star) : "";
      r[17] = fmt_num(pr.psi_e);
      r[18] = pr.incentive_optimal ? b2s(*pr.incentive_optimal) : "";
      r[19] = fmt_num(pr.psi_e_incentive);
      r[20] = fmt_num(pr.theta_star);
      res.table.add_row(std::move(r));
    }
  }

  // crossover of U*_M - U*_1 along a delta sweep
  if (cfg.sweep == SweepVar::delta && std::count(cfg.zbars.begin(), cfg.zbars.end(), 1) &&
      std::count(cfg.zbars.begin(), cfg.zbars.end(), M)) {
    res.crossover.columns = {"delta_left", "delta_right", "delta_cross", "best_left", "best_right"};
    std::vector<double> diff;
    for (const auto& pr : points) {
      double u1 = 0, uM = 0;
      for (const auto& row : pr.rows) {
        if (row.zbar == 1) u1 = row.sol->U_star;
        if (row.zbar == M) uM = row.sol->U_star;
      }
      diff.push_back(uM - u1);
    }
    for (std::size_t i = 1; i < diff.size(); ++i) {
      if ((diff[i - 1] < 0) != (diff[i] < 0)) {
        const double x0 = cfg.values[i - 1], x1 = cfg.values[i];
        const double xc = x0 + (x1 - x0) * diff[i - 1] / (diff[i - 1] - diff[i]);
        res.crossover.add_row({fmt_num(x0), fmt_num(x1), fmt_num(xc), diff[i - 1] < 0 ? std::to_string(M) : "1",
                               diff[i] < 0 ? std::to_string(M) : "1"});
      }
    }
  }

  if (write_files) {
    const std::string stem = cfg.outdir + "/" + cfg.name;
    write_text_file(stem + ".csv", res.table.to_csv());
    write_text_file(stem + "_timing.csv", res.timing.to_csv());
    res.files = {stem + ".csv", stem + "_timing.csv"};
    if (!res.crossover.columns.empty()) {
      write_text_file(stem + "_crossover.csv", res.crossover.to_csv());
      res.files.push_back(stem + "_crossover.csv");
    }
    if (cfg.plot) {
      std::map<std::string, Series> u_series, g_series;
      for (const auto& row : res.table.rows) {
        if (row[8].empty()) continue;
        const std::string key = (cfg.sweep == SweepVar::zbar ? "" : "zbar=" + row[3] + " ") +
                                (row[2] == "fixed" || row[2] == "auto" ? "" : row[2] + " ") + "delta=" + row[4];
        for (auto* m : {&u_series, &g_series}) (*m)[key].name = key;
        u_series[key].x.push_back(std::stod(row[1]));
        u_series[key].y.push_back(std::stod(row[8]));
        g_series[key].x.push_back(std::stod(row[1]));
        g_series[key].y.push_back(std::stod(cfg.sweep == SweepVar::sigma2 && row[3] == std::to_string(M) ? row[7] : row[6]));
      }
      auto collect = [](const std::map<std::string, Series>& m) {
        std::vector<Series> out;
        for (const auto& [k, s] : m) out.push_back(s);
        return out;
      };
      const bool logx = cfg.sweep == SweepVar::sigma2;
      if (!u_series.empty()) {
        write_text_file(stem + "_U.svg", svg_line_chart(cfg.name + ": U*", to_string(cfg.sweep), "U*", collect(u_series), logx));
        write_text_file(stem + "_g.svg", svg_line_chart(cfg.name + ": g*", to_string(cfg.sweep), "g*", collect(g_series), logx));
        res.files.push_back(stem + "_U.svg");
        res.files.push_back(stem + "_g.svg");
      }
      if (design_sweep) {
        Series k{"k*", {}, {}}, pe{"psi_e (vaccine-optimal)", {}, {}}, pi{"psi_e (incentive-optimal)", {}, {}};
        for (const auto& pr : points) {
          k.x.push_back(pr.value);
          k.y.push_back(pr.k_star ? *pr.k_star : std::nan(""));
          pe.x.push_back(pr.value);
          pe.y.push_back(pr.psi_e);
          pi.x.push_back(pr.value);
          pi.y.push_back(pr.psi_e_incentive);
        }
        write_text_file(stem + "_k.svg", svg_line_chart(cfg.name + ": k*", to_string(cfg.sweep), "k*", {k}));
        write_text_file(stem + "_psi.svg", svg_line_chart(cfg.name + ": psi_e", to_string(cfg.sweep), "psi_e", {pe, pi}));
        res.files.push_back(stem + "_k.svg");
        res.files.push_back(stem + "_psi.svg");
      }
    }
  }
  return res;
}

ScenarioResult reproduce_figure(int id, const std::string& outdir, std::uint64_t seed,
                                std::optional<std::size_t> samples, bool plot) {
  ScenarioConfig c = figure_preset(id);
  c.outdir = outdir;
  c.seed = seed;
  c.plot = plot;
  if (samples) c.samples = *samples;
  return run_scenario(c, true);
}

}  // namespace vaxgame
