#include "kinanneal/grid.hpp"

#include <cmath>

#include "kinanneal/errors.hpp"

namespace kinanneal {

Grid1D make_grid(double lower, double upper, int cells) {
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw config_error("grid: need finite lower < upper");
  }
  if (cells < 1) {
    throw config_error("grid: need at least one cell");
  }
  return Grid1D{lower, upper, cells};
}

double DensityField::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dx();
}

void DensityField::normalize() {
  const double m = mass();
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw numeric_error("density: cannot normalize, total mass is " + std::to_string(m));
  }
  for (double& v : values) v /= m;
}

DensityField uniform_density(const Grid1D& grid, double support_lo, double support_hi) {
  if (!(support_lo < support_hi)) {
    throw config_error("uniform_density: need support_lo < support_hi");
  }
  DensityField f{grid, std::vector<double>(grid.cells, 0.0)};
  for (int i = 0; i < grid.cells; ++i) {
    const double x = grid.center(i);
    if (x >= support_lo && x <= support_hi) f.values[i] = 1.0;
  }
  f.normalize();
  return f;
}

}  // namespace kinanneal
