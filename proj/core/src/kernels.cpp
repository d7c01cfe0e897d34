#include "kinanneal/kernels.hpp"

#include <cmath>
#include <numbers>

#include "kinanneal/errors.hpp"

namespace kinanneal {

namespace {
const double kSqrt3 = std::sqrt(3.0);
const double kNormalNorm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
}  // namespace

double SelectionDensity::pdf1(double xi) const {
  switch (kind) {
    case SelectionKind::normal:
      return kNormalNorm * std::exp(-0.5 * xi * xi);
    case SelectionKind::uniform:
      return std::abs(xi) <= kSqrt3 ? 1.0 / (2.0 * kSqrt3) : 0.0;
  }
  return 0.0;
}

double SelectionDensity::support_radius() const {
  return kind == SelectionKind::uniform ? kSqrt3 : 6.0;
}

SelectionKind parse_selection(const std::string& name) {
  if (name == "normal") return SelectionKind::normal;
  if (name == "uniform") return SelectionKind::uniform;
  throw config_error("kernel.selection: unknown kind \"" + name + "\" (normal or uniform)");
}

std::string selection_name(SelectionKind kind) {
  return kind == SelectionKind::uniform ? "uniform" : "normal";
}

void sample_selection(const SelectionDensity& p, RngStream& rng, std::span<double> out) {
  switch (p.kind) {
    case SelectionKind::normal:
      for (auto& v : out) v = rng.normal();
      break;
    case SelectionKind::uniform:
      for (auto& v : out) v = rng.uniform(-kSqrt3, kSqrt3);
      break;
  }
}

double acceptance_from_delta(double delta_f, double temperature) {
  if (delta_f < 0.0) return 1.0;
  return std::exp(-delta_f / temperature);
}

double acceptance_probability(const ObjectiveFunction& obj, double temperature,
                              std::span<const double> x, std::span<const double> x_new) {
  if (!(temperature > 0.0)) throw config_error("acceptance: temperature must be positive");
  return acceptance_from_delta(evaluate(obj, x_new) - evaluate(obj, x), temperature);
}

double transition_kernel_k(const ObjectiveFunction& obj, double temperature, double sigma,
                           const SelectionDensity& p, double x_from, double x_to) {
  if (!(sigma > 0.0)) throw config_error("transition kernel: sigma must be positive");
  const double move = acceptance_probability(obj, temperature,
                                             std::span<const double>(&x_from, 1),
                                             std::span<const double>(&x_to, 1));
  return p.pdf1((x_from - x_to) / sigma) / sigma * move;
}

}  // namespace kinanneal
