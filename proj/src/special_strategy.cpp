#include "vaxgame/special_strategy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vaxgame/binomial.hpp"
#include "vaxgame/errors.hpp"

namespace vaxgame {

bool ActionSet::contains(double p, double tol) const {
  if (full_interval) return p >= -tol && p <= 1.0 + tol;
  if (has_zero && std::abs(p) <= tol) return true;
  if (has_one && std::abs(p - 1.0) <= tol) return true;
  for (double m : mixed)
    if (std::abs(p - m) <= tol) return true;
  return false;
}

double ActionSet::smallest() const {
  if (has_zero || full_interval) return 0.0;
  if (!mixed.empty()) return mixed.front();
  return 1.0;
}

double ActionSet::largest() const {
  if (has_one || full_interval) return 1.0;
  if (!mixed.empty()) return mixed.back();
  return 0.0;
}

std::string ActionSet::describe() const {
  if (full_interval) return "[0,1]";
  std::ostringstream os;
  os << '{';
  bool first = true;
  auto put = [&](double p) {
    if (!first) os << ',';
    os << p;
    first = false;
  };
  if (has_zero) put(0.0);
  for (double m : mixed) put(m);
  if (has_one) put(1.0);
  os << '}';
  return os.str();
}

Selector wait_and_watch_selector() {
  return [](int, const AgentState&, const ActionSet& set) { return set.smallest(); };
}

Selector eager_selector() {
  return [](int, const AgentState&, const ActionSet& set) { return set.largest(); };
}

double CostTree::next_c(int t, double c, std::size_t k) const {
  return c + (xi[k].value - c) / static_cast<double>(t + 1);
}

std::size_t CostTree::find(int t, double c) const {
  if (t < 1 || t > T - 1) throw DomainError("stage outside 1..T-1");
  const auto& m = index[t - 1];
  auto it = m.lower_bound(c);
  const double tol = 1e-9 * std::max(1.0, std::abs(c));
  if (it != m.end() && std::abs(it->first - c) <= tol) return it->second;
  if (it != m.begin()) {
    --it;
    if (std::abs(it->first - c) <= tol) return it->second;
  }
  throw DomainError("side-effect estimate is not on the strategy's cost grid");
}

CostTree build_cost_tree(const InfluencerGameConfig& cfg, const TreeOptions& opts) {
  CostTree tree;
  tree.T = cfg.T;
  tree.xi = cfg.xi_law().quadrature(cfg.xi_sigma2 > 0.0 ? opts.xi_nodes : 1);
  tree.xi_mean = quadrature_mean(tree.xi);
  const std::size_t K = tree.xi.size();
  std::size_t total = 0, width = 1;
  for (int t = 1; t <= cfg.T - 1; ++t) {
    total += width;
    if (total > opts.max_nodes) throw ConstructionError("cost tree too large for exact tabulation");
    width *= K;
  }
  tree.stages.resize(static_cast<std::size_t>(cfg.T - 1));
  tree.index.resize(static_cast<std::size_t>(cfg.T - 1));
  tree.stages[0] = {cfg.c_se_1};
  for (int t = 1; t < cfg.T - 1; ++t) {
    const auto& cur = tree.stages[t - 1];
    auto& nxt = tree.stages[t];
    nxt.reserve(cur.size() * K);
    for (double c : cur)
      for (std::size_t k = 0; k < K; ++k) nxt.push_back(tree.next_c(t, c, k));
  }
  for (int t = 1; t <= cfg.T - 1; ++t) {
    const auto& st = tree.stages[t - 1];
    for (std::size_t i = 0; i < st.size(); ++i) tree.index[t - 1].emplace(st[i], i);
  }
  return tree;
}

namespace {

std::vector<double> roots_on_open_unit(const std::function<double(double)>& f, const RootScan& scan) {
  std::vector<double> roots;
  const int G = std::max(2, scan.grid);
  double p_prev = 0.0, f_prev = f(0.0);
  for (int i = 1; i <= G; ++i) {
    const double p = static_cast<double>(i) / G;
    const double fp = f(p);
    if (i < G && fp == 0.0) {
      roots.push_back(p);
    } else if ((f_prev < 0.0 && fp > 0.0) || (f_prev > 0.0 && fp < 0.0)) {
      double lo = p_prev, hi = p, flo = f_prev;
      for (int it = 0; it < scan.bisect_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double r = 0.5 * (lo + hi);
      if (r > 0.0 && r < 1.0) roots.push_back(r);
    }
    p_prev = p;
    f_prev = fp;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              roots.end());
  return roots;
}

}  // namespace

ActionSet stage_action_set(int t, const AgentState& x, const NextValue& value_next,
                           const std::vector<XiNode>& xi, double xi_mean,
                           const InfluencerGameConfig& cfg, const RootScan& scan) {
  ActionSet set;
  const int M = cfg.M, zb = cfg.z_bar;
  if (x.status == Status::V || x.z >= zb) {
    set.has_zero = true;
    return set;
  }
  const double a = cfg.C_v + gamma_with_mean(t, x.c, cfg.T, xi_mean) - cfg.incentive(x.z);

  if (t == cfg.T - 1) {
    if (zb < M) {
      if (a <= 0.0) {
        set.has_one = true;
      } else if (a >= cfg.C_i) {
        set.has_zero = true;
      } else {
        set.mixed.push_back(solve_binom_cdf(M - x.z - 1, zb - x.z - 1, a / cfg.C_i));
      }
    } else if (a < cfg.C_i) {
      set.has_one = true;
    } else if (a > cfg.C_i) {
      set.has_zero = true;
    } else {
      set.full_interval = true;
    }
    return set;
  }

  const int others = M - x.z - 1;
  std::vector<double> W(static_cast<std::size_t>(others) + 1, 0.0);
  for (int y = 0; y <= others; ++y) {
    const int zn = x.z + y;
    if (zn >= zb) continue;
    double acc = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) acc += xi[k].weight * value_next(zn, k);
    W[y] = acc;
  }
  auto expect = [&](double p) {
    const auto pmf = binom_pmf(others, p);
    double e = 0.0;
    for (int y = 0; y <= others; ++y) e += pmf[y] * W[y];
    return e;
  };
  auto f = [&](double p) { return a - expect(p); };

  set.has_zero = true;
  if (zb < M) {
    set.has_one = a <= 0.0;
    set.mixed = roots_on_open_unit(f, scan);
  } else if (a <= W[others]) {
    set.has_one = true;
    set.mixed = roots_on_open_unit(f, scan);
  }
  return set;
}

double SpecialStrategy::decision(int t, const AgentState& x) const {
  if (x.status == Status::V) return 0.0;
  return profile.get(t, tree.find(t, x.c), x.z);
}

double SpecialStrategy::value(int t, const AgentState& x) const {
  if (x.status == Status::V) return gamma_with_mean(t, x.c, cfg.T, tree.xi_mean);
  return v[t - 1][tree.find(t, x.c) * (cfg.M + 1) + x.z];
}

const ActionSet& SpecialStrategy::action_set(int t, const AgentState& x) const {
  return sets[t - 1][tree.find(t, x.c) * (cfg.M + 1) + x.z];
}

SpecialStrategy build_special_strategy(const InfluencerGameConfig& cfg, const Selector& selector,
                                       const StrategyOptions& opts) {
  cfg.validate();
  SpecialStrategy s;
  s.cfg = cfg;
  s.tree = build_cost_tree(cfg, opts.tree);
  const int M = cfg.M, T = cfg.T;
  const std::size_t width = static_cast<std::size_t>(M) + 1;
  const std::size_t K = s.tree.xi.size();
  s.profile.M = M;
  s.profile.d.resize(static_cast<std::size_t>(T - 1));
  s.v.resize(static_cast<std::size_t>(T - 1));
  s.sets.resize(static_cast<std::size_t>(T - 1));

  for (int t = T - 1; t >= 1; --t) {
    const auto& cs = s.tree.stages[t - 1];
    auto& dt = s.profile.d[t - 1];
    auto& vt = s.v[t - 1];
    auto& st = s.sets[t - 1];
    dt.assign(cs.size() * width, 0.0);
    vt.assign(cs.size() * width, 0.0);
    st.assign(cs.size() * width, ActionSet{});
    for (std::size_t node = 0; node < cs.size(); ++node) {
      for (int z = 0; z <= M; ++z) {
        const AgentState x{Status::S, z, cs[node]};
        NextValue next = [&](int zn, std::size_t k) -> double {
          return s.v[t][s.tree.child(t, node, k) * width + zn];
        };
        ActionSet set = stage_action_set(t, x, next, s.tree.xi, s.tree.xi_mean, cfg, opts.scan);
        const double p = selector(t, x, set);
        if (!set.contains(p)) {
          std::ostringstream os;
          os << "selector chose " << p << " outside " << set.describe() << " at t=" << t << " z=" << z
             << " c=" << x.c;
          throw ConstructionError(os.str());
        }
        const std::size_t idx = node * width + z;
        dt[idx] = p;
        st[idx] = std::move(set);
        if (z >= cfg.z_bar) {
          vt[idx] = 0.0;
          continue;
        }
        const double a = cfg.C_v + gamma_with_mean(t, x.c, T, s.tree.xi_mean) - cfg.incentive(z);
        if (t == T - 1) {
          vt[idx] = std::min(a, cfg.C_i);
        } else if (p == 0.0) {
          double e = 0.0;
          for (std::size_t k = 0; k < K; ++k) e += s.tree.xi[k].weight * next(z, k);
          vt[idx] = e;
        } else {
          vt[idx] = a;
        }
      }
    }
  }
  return s;
}

NeVerification verify_symmetric_ne(const DecisionProfile& profile, const CostTree& tree,
                                   const InfluencerGameConfig& cfg, double tol) {
  const int M = cfg.M, T = cfg.T, zb = cfg.z_bar;
  const std::size_t width = static_cast<std::size_t>(M) + 1;
  const std::size_t K = tree.xi.size();
  NeVerification out;

  // u: best-response values, w: values from following the profile, uv: vaccinated values
  std::vector<double> u_next, w_next, uv_next;
  for (int t = T - 1; t >= 1; --t) {
    const auto& cs = tree.stages[t - 1];
    std::vector<double> u(cs.size() * width), w(cs.size() * width), uv(cs.size());
    for (std::size_t node = 0; node < cs.size(); ++node) {
      const double c = cs[node];
      double vac_next = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double cn = tree.next_c(t, c, k);
        vac_next += tree.xi[k].weight * (t == T - 1 ? cn : uv_next[tree.child(t, node, k)]);
      }
      uv[node] = vac_next;
      out.vaccinated_value_error =
          std::max(out.vaccinated_value_error, std::abs(vac_next - gamma_with_mean(t, c, T, tree.xi_mean)));

      for (int z = 0; z <= M; ++z) {
        const std::size_t idx = node * width + z;
        const double q = profile.get(t, node, z);
        const double vaccinate = cfg.C_v - cfg.incentive(z) + vac_next;
        const int others = std::max(0, M - z - 1);
        const auto pmf = binom_pmf(others, q);
        double stay_u = 0.0, stay_w = 0.0;
        for (int y = 0; y <= others; ++y) {
          if (pmf[y] == 0.0) continue;
          const int zn = std::min(z + y, M);
          double eu = 0.0, ew = 0.0;
          for (std::size_t k = 0; k < K; ++k) {
            double nu, nw;
            if (t == T - 1) {
              nu = nw = zn < zb ? cfg.C_i : 0.0;
            } else {
              const std::size_t ci = tree.child(t, node, k) * width + zn;
              nu = u_next[ci];
              nw = w_next[ci];
            }
            eu += tree.xi[k].weight * nu;
            ew += tree.xi[k].weight * nw;
          }
          stay_u += pmf[y] * eu;
          stay_w += pmf[y] * ew;
        }
        u[idx] = std::min(vaccinate, stay_u);
        w[idx] = q * vaccinate + (1.0 - q) * stay_w;
        const double one_shot = w[idx] - std::min(vaccinate, stay_w);
        const double gain = w[idx] - u[idx];
        out.worst_one_shot_gain = std::max(out.worst_one_shot_gain, one_shot);
        if (gain > out.worst_gain) {
          out.worst_gain = gain;
          out.worst_t = t;
          out.worst_z = z;
          out.worst_c = c;
        }
      }
    }
    u_next = std::move(u);
    w_next = std::move(w);
    uv_next = std::move(uv);
  }
  out.pass = out.worst_gain <= tol && out.worst_one_shot_gain <= tol;
  return out;
}

NeVerification verify_symmetric_ne(const SpecialStrategy& strategy, double tol) {
  return verify_symmetric_ne(strategy.profile, strategy.tree, strategy.cfg, tol);
}

}  // namespace vaxgame
