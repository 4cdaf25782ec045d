#include "vaxgame/epidemic_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include <boost/numeric/odeint.hpp>

#include "vaxgame/errors.hpp"

namespace vaxgame {

double DiseaseParams::theta_star() const {
  const double rh = rho();
  if (!(rh > 1.0)) throw DomainError("theta_star requires rho > 1");
  return 1.0 - 1.0 / rh;
}

void DiseaseParams::validate() const {
  for (double v : {lambda, r, b, d}) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("disease rates must be finite and nonnegative");
  }
  if (!(lambda > 0.0) || !(r > 0.0) || !(b > 0.0)) throw DomainError("lambda, r, b must be positive");
  if (!(b > d)) throw DomainError("birth rate must exceed death rate");
}

double ResponseParams::response(double psi) const { return std::clamp(beta * psi, 0.0, 1.0); }

double varrho(const OdeState& s, const DiseaseParams& p, const VaRatePolicy& nu) {
  const double phi = 1.0 - s.theta - s.psi;
  return p.b + p.d + p.lambda * s.theta * phi + (nu.nu_b + nu.nu_e * s.psi) * phi + p.r * s.theta;
}

OdeState ode_rhs(const OdeState& s, const DiseaseParams& p, const VaRatePolicy& nu,
                 const ResponseParams& beta) {
  if (!std::isfinite(s.theta) || !std::isfinite(s.psi) || !std::isfinite(s.eta))
    throw DomainError("non-finite ODE state");
  const double rho = p.rho();
  const double vr = varrho(s, p, nu);
  if (!(vr > 0.0) || !(s.eta > 0.0)) throw DomainError("varrho and eta must be positive");
  const double phi = 1.0 - s.theta - s.psi;
  const double scale = 1.0 / (s.eta * vr);
  OdeState out;
  out.theta = s.theta * p.lambda * scale * (phi - 1.0 / rho);
  out.psi = scale * (phi * beta.response(s.psi) * (nu.nu_b + nu.nu_e * s.psi) - p.b * s.psi);
  out.eta = (p.b - p.d) / vr - s.eta;
  return out;
}

double max_norm(const OdeState& s) {
  return std::max({std::abs(s.theta), std::abs(s.psi), std::abs(s.eta)});
}

double psi_e(double nu_b, double nu_e, double b) {
  const double B = b + nu_b - nu_e;
  const double disc = std::sqrt(B * B + 4.0 * nu_e * nu_b);
  if (B >= 0.0) {
    const double den = B + disc;
    return den > 0.0 ? 2.0 * nu_b / den : 0.0;
  }
  return (-B + disc) / (2.0 * nu_e);
}

double psi_o(double nu_b, double nu_e, const DiseaseParams& p) {
  const double den = p.b * p.rho() - nu_e;
  if (!(den > 0.0)) throw DomainError("psi_o undefined: b*rho - nu_e <= 0");
  return nu_b / den;
}

OdeState equilibrium_point(double theta, double psi, const DiseaseParams& p, const VaRatePolicy& nu) {
  OdeState s{theta, psi, 1.0};
  s.eta = (p.b - p.d) / varrho(s, p, nu);
  return s;
}

std::vector<const AttractorCandidate*> AttractorSet::active() const {
  std::vector<const AttractorCandidate*> out;
  for (const auto* c : {&non_vaccinating, &eradicating, &co_occurring, &self_eradicating})
    if (c->active) out.push_back(c);
  return out;
}

namespace {

// strict a < b with the equality band treated as a corner case
struct Cmp {
  bool less = false;
  bool degenerate = false;
};

Cmp strictly_less(double a, double b) {
  Cmp c;
  c.degenerate = std::abs(a - b) <= kDegenerateBand;
  c.less = !c.degenerate && a < b;
  return c;
}

}  // namespace

AttractorSet candidate_attractors(const DiseaseParams& p, const VaRatePolicy& nu,
                                  const ResponseParams& beta) {
  AttractorSet out;
  const double rho = p.rho();
  const double b = p.b;
  const double inf = std::numeric_limits<double>::infinity();

  out.self_eradicating.point = equilibrium_point(0.0, 0.0, p, nu);
  out.self_eradicating.defined = true;
  if (rho <= 1.0) {
    const auto c = strictly_less(beta.beta, nu.nu_b > 0.0 ? b / nu.nu_b : inf);
    out.self_eradicating.degenerate = c.degenerate;
    out.self_eradicating.active = c.less;
    return out;
  }

  const double th = 1.0 - 1.0 / rho;
  const double nu_e_cut = b * rho - nu.nu_b / th;

  out.non_vaccinating.point = equilibrium_point(th, 0.0, p, nu);
  out.non_vaccinating.defined = true;
  {
    const auto c = strictly_less(beta.beta, nu.nu_b > 0.0 ? b * rho / nu.nu_b : inf);
    out.non_vaccinating.degenerate = c.degenerate;
    out.non_vaccinating.active = c.less;
  }

  const double pe = psi_e(nu.nu_b, nu.nu_e, b);
  out.eradicating.point = equilibrium_point(0.0, pe, p, nu);
  out.eradicating.defined = true;
  {
    const auto resp = strictly_less(1.0, beta.beta * pe);
    const auto cut = strictly_less(nu_e_cut, nu.nu_e);
    out.eradicating.degenerate = resp.degenerate || cut.degenerate;
    out.eradicating.active = resp.less && cut.less && nu.nu_e >= 0.0;
  }

  if (b * rho - nu.nu_e > 0.0) {
    const double po = psi_o(nu.nu_b, nu.nu_e, p);
    out.co_occurring.point = equilibrium_point(th - po, po, p, nu);
    out.co_occurring.defined = true;
    const auto resp = strictly_less(1.0, beta.beta * po);
    const auto cut = strictly_less(nu.nu_e, nu_e_cut);
    out.co_occurring.degenerate = resp.degenerate || cut.degenerate;
    out.co_occurring.active = resp.less && cut.less && nu.nu_e >= 0.0;
  }
  return out;
}

namespace {

using State3 = std::array<double, 3>;

OdeState to_state(const State3& x) { return {x[0], x[1], x[2]}; }

}  // namespace

IntegrationResult integrate_to_equilibrium(const OdeState& init, const DiseaseParams& p,
                                           const VaRatePolicy& nu, const ResponseParams& beta,
                                           const IntegrationOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  const double slack = 1e-9;
  if (init.theta < -slack || init.psi < -slack || init.theta + init.psi > 1.0 + slack || !(init.eta > 0.0))
    throw DomainError("initial state outside the simplex");

  auto system = [&](const State3& x, State3& dx, double) {
    const OdeState d = ode_rhs(to_state(x), p, nu, beta);
    dx = {d.theta, d.psi, d.eta};
  };

  auto stepper = odeint::make_dense_output(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State3>());
  State3 x{init.theta, init.psi, init.eta};
  stepper.initialize(x, 0.0, 1e-4);

  IntegrationResult res;
  const bool sampled = !opts.sample_times.empty();
  std::size_t next_sample = 0;
  auto emit_samples_until = [&](double t_hi) {
    State3 xs;
    while (next_sample < opts.sample_times.size() && opts.sample_times[next_sample] <= t_hi) {
      const double ts = opts.sample_times[next_sample++];
      if (ts <= stepper.current_time()) {
        res.trajectory.push_back({ts, to_state(stepper.current_state())});
      } else {
        stepper.calc_state(ts, xs);
        res.trajectory.push_back({ts, to_state(xs)});
      }
    }
  };

  if (sampled) {
    emit_samples_until(0.0);
  } else {
    res.trajectory.push_back({0.0, init});
  }

  int calm = 0;
  double t = 0.0;
  while (t < opts.horizon) {
    const double t1 = stepper.do_step(system).second;
    t = t1;
    ++res.steps;
    const State3& cur = stepper.current_state();
    if (sampled) {
      emit_samples_until(t1);
    } else if (opts.record_every > 0 && res.steps % static_cast<std::size_t>(opts.record_every) == 0) {
      res.trajectory.push_back({t, to_state(cur)});
    }
    if (max_norm(ode_rhs(to_state(cur), p, nu, beta)) < opts.tol) {
      if (++calm >= opts.settle_steps) res.converged = true;
    } else {
      calm = 0;
      res.converged = false;
    }
    const bool samples_done = next_sample >= opts.sample_times.size();
    if (sampled ? samples_done : res.converged) break;
  }
  res.limit = to_state(stepper.current_state());
  res.t_end = t;
  if (!sampled && (res.trajectory.empty() || res.trajectory.back().t != t))
    res.trajectory.push_back({t, res.limit});
  return res;
}

JumpResult simulate_jump_process(const PopulationCounts& initial, const DiseaseParams& p,
                                 const VaRatePolicy& nu, const ResponseParams& beta,
                                 std::uint64_t seed, const JumpOptions& opts) {
  if (initial.S < 0 || initial.V < 0 || initial.I < 0 || initial.N() < 1)
    throw DomainError("jump process needs nonnegative counts with N >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  PopulationCounts c = initial;
  std::uint64_t k = opts.start_index > 0 ? opts.start_index : static_cast<std::uint64_t>(c.N());
  double t = 0.0;
  JumpResult res;

  auto record = [&]() {
    const double n = static_cast<double>(c.N());
    JumpSample s;
    s.t = t;
    s.index = k;
    s.counts = c;
    s.state = {static_cast<double>(c.I) / n, static_cast<double>(c.V) / n, n / static_cast<double>(k)};
    res.samples.push_back(s);
  };
  record();

  const std::uint64_t every = std::max<std::uint64_t>(1, opts.record_every);
  for (std::uint64_t e = 0; e < opts.n_events; ++e) {
    const double n = static_cast<double>(c.N());
    const double S = static_cast<double>(c.S), I = static_cast<double>(c.I);
    const double psi = static_cast<double>(c.V) / n;
    const double w_birth = p.b * n;
    const double w_death = p.d * n;
    const double w_inf = p.lambda * S * I / n;
    const double w_rec = p.r * I;
    const double w_va = (nu.nu_b + nu.nu_e * psi) * S;
    const double total = w_birth + w_death + w_inf + w_rec + w_va;

    double u = unif(rng) * total;
    if (u < w_birth) {
      ++c.S;
    } else if ((u -= w_birth) < w_death) {
      const double pick = unif(rng) * n;
      if (pick < S) {
        --c.S;
      } else if (pick < S + static_cast<double>(c.V)) {
        --c.V;
      } else {
        --c.I;
      }
    } else if ((u -= w_death) < w_inf) {
      --c.S;
      ++c.I;
    } else if ((u -= w_inf) < w_rec) {
      --c.I;
      ++c.S;
    } else if (unif(rng) < beta.response(psi)) {
      --c.S;
      ++c.V;
    }
    t += 1.0 / (1.0 + static_cast<double>(k));
    ++k;
    ++res.events;
    if (c.N() == 0) {
      res.extinct = true;
      break;
    }
    if (res.events % every == 0) record();
  }
  if (!res.extinct && res.events % every != 0) record();
  return res;
}

std::string trajectory_csv_header() { return "t,theta,psi,eta,source\n"; }

namespace {

void append_row(std::string& out, double t, const OdeState& s, const char* source) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.10g,%.12g,%.12g,%.12g,%s\n", t, s.theta, s.psi, s.eta, source);
  out += buf;
}

}  // namespace

void append_trajectory_csv(std::string& out, const std::vector<TrajectoryPoint>& traj,
                           const std::string& source) {
  for (const auto& pt : traj) append_row(out, pt.t, pt.state, source.c_str());
}

void append_trajectory_csv(std::string& out, const std::vector<JumpSample>& traj) {
  for (const auto& s : traj) append_row(out, s.t, s.state, "jump");
}

}  // namespace vaxgame
