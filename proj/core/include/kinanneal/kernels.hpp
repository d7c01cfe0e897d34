#pragma once

#include <span>

#include "kinanneal/objectives.hpp"
#include "kinanneal/rng.hpp"

namespace kinanneal {

enum class SelectionKind { normal, uniform };

// Symmetric selection density p(xi) with zero mean and identity covariance:
// standard normal, or uniform on [-sqrt(3), sqrt(3)] per coordinate.
struct SelectionDensity {
  SelectionKind kind = SelectionKind::normal;
  int dimension = 1;

  double pdf1(double xi) const;        // one-coordinate marginal density
  double support_radius() const;       // quadrature truncation radius in xi
};

SelectionKind parse_selection(const std::string& name);
std::string selection_name(SelectionKind kind);

void sample_selection(const SelectionDensity& p, RngStream& rng, std::span<double> out);

// min(1, exp(-delta_f / T)); a tie (delta_f = 0) accepts with probability 1.
// Always computed from the objective difference, never from density ratios.
double acceptance_from_delta(double delta_f, double temperature);

double acceptance_probability(const ObjectiveFunction& obj, double temperature,
                              std::span<const double> x, std::span<const double> x_new);

// Gain-term kernel of the kinetic operator (1D):
//   k(x_from, x_to) = p((x_from - x_to)/sigma)/sigma * B(x_from -> x_to).
double transition_kernel_k(const ObjectiveFunction& obj, double temperature, double sigma,
                           const SelectionDensity& p, double x_from, double x_to);

}  // namespace kinanneal
