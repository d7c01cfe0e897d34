#include "kinanneal/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "kinanneal/errors.hpp"

namespace kinanneal {

namespace {

struct StepScratch {
  std::vector<double> xi;
  std::vector<double> trial;
  std::vector<double> grad;

  explicit StepScratch(std::size_t d) : xi(d), trial(d), grad(d) {}
};

bool has_value(double v) { return v == v; }

void ensure_objective_cache(WalkerState& s, const ChainConfig& cfg) {
  if (!has_value(s.objective_value)) {
    s.objective_value = evaluate(cfg.objective, s.position);
  }
}

void finish_step(WalkerState& s, double dt) {
  ++s.iteration;
  // derived from the counter so t = n * dt holds exactly over long chains
  s.time = static_cast<double>(s.iteration) * dt;
}

// One tick of KSA (maxwellian = false) or MSA (maxwellian = true). With
// dt < eps the kinetic move fires with probability dt/eps, which realizes
// the convex combination f^{n+1} = (1 - dt/eps) f^n + (dt/eps) J(f^n).
void advance_kinetic(WalkerState& s, const ChainConfig& cfg, RngStream& rng, StepScratch& ws,
                     bool maxwellian) {
  const double dt = cfg.step_dt();
  const double temperature = cfg.schedule.temperature(s.time);
  bool move = true;
  if (dt < cfg.eps) move = rng.uniform() < dt / cfg.eps;
  if (move) {
    const double sigma = noise_scale(temperature, cfg.eps);
    sample_selection(cfg.selection, rng, ws.xi);
    const std::size_t d = s.position.size();
    for (std::size_t i = 0; i < d; ++i) ws.trial[i] = s.position[i] + sigma * ws.xi[i];
    const double f_trial = evaluate(cfg.objective, ws.trial);
    const double b = acceptance_from_delta(f_trial - s.objective_value, temperature);
    if (!maxwellian) {
      if (rng.uniform() <= b) {
        std::copy(ws.trial.begin(), ws.trial.end(), s.position.begin());
        s.objective_value = f_trial;
      }
    } else {
      if (b >= 1.0) {
        std::copy(ws.trial.begin(), ws.trial.end(), s.position.begin());
        s.objective_value = f_trial;
      } else {
        // move the Gibbs-weighted fraction of the way; every step moves
        for (std::size_t i = 0; i < d; ++i) s.position[i] += b * (ws.trial[i] - s.position[i]);
        s.objective_value = evaluate(cfg.objective, s.position);
      }
    }
  }
  finish_step(s, dt);
}

// Euler-Maruyama tick of dX = -grad F dt + sqrt(2 T) dB.
void advance_mfl(WalkerState& s, const ChainConfig& cfg, RngStream& rng, StepScratch& ws) {
  const double dt = cfg.step_dt();
  const double temperature = cfg.schedule.temperature(s.time);
  gradient(cfg.objective, s.position, ws.grad);
  const double scale = noise_scale(temperature, dt);
  for (std::size_t i = 0; i < s.position.size(); ++i) {
    s.position[i] += -ws.grad[i] * dt + scale * rng.normal();
  }
  s.objective_value = evaluate(cfg.objective, s.position);
  finish_step(s, dt);
}

void advance(WalkerState& s, const ChainConfig& cfg, RngStream& rng, StepScratch& ws) {
  switch (cfg.method) {
    case Method::ksa:
      advance_kinetic(s, cfg, rng, ws, false);
      break;
    case Method::msa:
      advance_kinetic(s, cfg, rng, ws, true);
      break;
    case Method::mfl:
      advance_mfl(s, cfg, rng, ws);
      break;
  }
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "ksa") return Method::ksa;
  if (name == "msa") return Method::msa;
  if (name == "mfl") return Method::mfl;
  throw config_error("method: unknown name \"" + name + "\" (expected ksa, msa or mfl)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::ksa: return "ksa";
    case Method::msa: return "msa";
    case Method::mfl: return "mfl";
  }
  return "?";
}

void ChainConfig::validate() const {
  if (!objective.value) throw config_error("chain: objective is not set");
  if (objective.dimension < 1) throw config_error("chain: objective dimension must be positive");
  if (selection.dimension != objective.dimension) {
    throw config_error("chain: selection dimension must match the objective");
  }
  if (!(eps > 0.0)) throw config_error("chain: eps must be positive");
  if (dt < 0.0) throw config_error("chain: dt must be nonnegative");
  if (dt > eps) throw config_error("chain: dt must satisfy dt <= eps");
  if (!(t_final >= 0.0)) throw config_error("chain: t_final must be nonnegative");
  if (!(init_interval[0] < init_interval[1])) {
    throw config_error("chain: init interval must satisfy a < b");
  }
}

WalkerState initial_state(const ChainConfig& cfg, RngStream& rng) {
  WalkerState s;
  s.position.resize(cfg.objective.dimension);
  for (auto& x : s.position) x = rng.uniform(cfg.init_interval[0], cfg.init_interval[1]);
  s.objective_value = evaluate(cfg.objective, s.position);
  return s;
}

WalkerState metropolis_step(const WalkerState& s, const ChainConfig& cfg, RngStream& rng) {
  WalkerState out = s;
  ensure_objective_cache(out, cfg);
  StepScratch ws(out.position.size());
  advance_kinetic(out, cfg, rng, ws, false);
  return out;
}

WalkerState msa_step(const WalkerState& s, const ChainConfig& cfg, RngStream& rng) {
  WalkerState out = s;
  ensure_objective_cache(out, cfg);
  StepScratch ws(out.position.size());
  advance_kinetic(out, cfg, rng, ws, true);
  return out;
}

WalkerState mfl_step(const WalkerState& s, const ChainConfig& cfg, RngStream& rng) {
  WalkerState out = s;
  StepScratch ws(out.position.size());
  advance_mfl(out, cfg, rng, ws);
  return out;
}

std::vector<WalkerState> run_chain(const ChainConfig& cfg, std::span<const double> snapshot_times,
                                   std::uint64_t run_index) {
  cfg.validate();
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    if (i > 0 && snapshot_times[i] < snapshot_times[i - 1]) {
      throw config_error("run_chain: snapshot times must be sorted");
    }
    if (snapshot_times[i] < 0.0 || snapshot_times[i] > cfg.t_final + 1e-12) {
      throw config_error("run_chain: snapshot times must lie in [0, t_final]");
    }
  }

  RngStream rng(cfg.seed, run_index);
  WalkerState state = initial_state(cfg, rng);
  StepScratch ws(state.position.size());

  const double dt = cfg.step_dt();
  const auto nsteps = static_cast<std::uint64_t>(std::floor(cfg.t_final / dt + 1e-9));

  std::vector<WalkerState> out;
  out.reserve(snapshot_times.empty() ? 1 : snapshot_times.size());
  std::size_t next_snap = 0;
  for (std::uint64_t n = 0; n < nsteps; ++n) {
    const double t_after = static_cast<double>(n + 1) * dt;
    while (next_snap < snapshot_times.size() && snapshot_times[next_snap] < t_after - 1e-12) {
      out.push_back(state);
      ++next_snap;
    }
    advance(state, cfg, rng, ws);
  }
  while (next_snap < snapshot_times.size()) {
    out.push_back(state);
    ++next_snap;
  }
  if (snapshot_times.empty()) out.push_back(state);
  return out;
}

}  // namespace kinanneal
