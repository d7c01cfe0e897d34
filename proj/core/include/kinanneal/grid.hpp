#pragma once

#include <vector>

namespace kinanneal {

// Uniform cell-centered grid on [lower, upper]; cell i has center
// lower + (i + 1/2) * dx.
struct Grid1D {
  double lower = -6.0;
  double upper = 6.0;
  int cells = 2048;

  double dx() const { return (upper - lower) / cells; }
  double center(int i) const { return lower + (i + 0.5) * dx(); }

  bool operator==(const Grid1D&) const = default;
};

// Throws config_error unless lower < upper and cells >= 1.
Grid1D make_grid(double lower, double upper, int cells);

// Nonnegative grid function with unit mass under the midpoint rule.
struct DensityField {
  Grid1D grid;
  std::vector<double> values;

  double mass() const;
  void normalize();  // scales to unit mass; throws numeric_error if mass <= 0
};

// Flat density on the cells whose centers lie in [support_lo, support_hi],
// normalized to unit mass.
DensityField uniform_density(const Grid1D& grid, double support_lo, double support_hi);

}  // namespace kinanneal
