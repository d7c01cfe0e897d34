#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinanneal/grid.hpp"

namespace kinanneal {

// A cost function R^d -> R. The evaluator must be deterministic and finite
// on every point it is asked about. Built-in benchmarks carry their known
// minimizer so that tests and success-rate diagnostics can refer to it.
struct ObjectiveFunction {
  std::string name;
  int dimension = 1;
  std::function<double(std::span<const double>)> value;
  // Empty when no closed form is available; `gradient` then falls back to
  // central differences.
  std::function<void(std::span<const double>, std::span<double>)> analytic_gradient;
  std::optional<std::vector<double>> known_minimizer;
  std::optional<double> known_minimum;

  bool has_gradient() const { return static_cast<bool>(analytic_gradient); }
};

// Registered objectives: "quadratic" (|x|^2/2), "doublewell" ((|x|^2-1)^2),
// "ackley" (a=20, b=0.2, c=2*pi). Throws config_error on unknown names.
ObjectiveFunction make_objective(const std::string& name, int dimension = 1);

double evaluate(const ObjectiveFunction& obj, std::span<const double> x);

// Analytic gradient when available, otherwise central differences with
// per-coordinate step h_i = 1e-6 * max(1, |x_i|).
void gradient(const ObjectiveFunction& obj, std::span<const double> x, std::span<double> out);

// Discrete Boltzmann-Gibbs density exp(-F/T)/C on the grid, normalized under
// the midpoint rule. The exponent is shifted by min_i F(x_i) before
// exponentiating so that small T cannot underflow every weight at once.
DensityField gibbs_density(const ObjectiveFunction& obj, double temperature, const Grid1D& grid);

}  // namespace kinanneal
