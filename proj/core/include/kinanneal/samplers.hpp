#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kinanneal/kernels.hpp"
#include "kinanneal/schedule.hpp"

namespace kinanneal {

enum class Method { ksa, msa, mfl };

Method parse_method(const std::string& name);  // "ksa" | "msa" | "mfl"
std::string method_name(Method m);

struct WalkerState {
  std::vector<double> position;
  double time = 0.0;
  std::uint64_t iteration = 0;
  // Cached F(position); NaN when unknown. Kinetic steps keep it current so a
  // chain needs one objective evaluation per trial.
  double objective_value = std::numeric_limits<double>::quiet_NaN();
};

struct ChainConfig {
  Method method = Method::ksa;
  double eps = 1e-2;
  // 0 selects dt = eps. dt < eps runs the thinned scheme: each tick performs
  // the kinetic move with probability dt/eps and stays put otherwise.
  double dt = 0.0;
  double t_final = 2.0;
  CoolingSchedule schedule;
  ObjectiveFunction objective;
  SelectionDensity selection;
  std::uint64_t seed = 0;
  std::array<double, 2> init_interval{-3.0, 3.0};

  double step_dt() const { return dt > 0.0 ? dt : eps; }
  void validate() const;  // throws config_error
};

// Draws the initial position uniformly on init_interval per coordinate.
WalkerState initial_state(const ChainConfig& cfg, RngStream& rng);

// One tick of each dynamic. The temperature is evaluated at the step's
// start time; time advances by step_dt() and is derived from the iteration
// counter so that t = n * dt holds exactly.
WalkerState metropolis_step(const WalkerState& s, const ChainConfig& cfg, RngStream& rng);
WalkerState msa_step(const WalkerState& s, const ChainConfig& cfg, RngStream& rng);
WalkerState mfl_step(const WalkerState& s, const ChainConfig& cfg, RngStream& rng);

// Runs the configured method from a fresh initial state to t_final. Returns
// the walker recorded at each snapshot time (latest step not exceeding it);
// with no snapshot times, the final state alone. Fully deterministic given
// (cfg.seed, run_index).
std::vector<WalkerState> run_chain(const ChainConfig& cfg, std::span<const double> snapshot_times,
                                   std::uint64_t run_index = 0);

}  // namespace kinanneal
