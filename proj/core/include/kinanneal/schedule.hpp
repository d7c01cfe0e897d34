#pragma once

#include <utility>
#include <vector>

namespace kinanneal {

enum class ScheduleKind { constant, logarithmic, table };

// Cooling law T(t): strictly positive and nonincreasing in the physical time
// t = n * dt. The logarithmic kind is T0 / log(t + 2).
class CoolingSchedule {
 public:
  CoolingSchedule();  // constant T = 2

  static CoolingSchedule constant(double t0);
  static CoolingSchedule logarithmic(double t0);
  // Piecewise-linear interpolation of (t, T) pairs; the last value is held
  // beyond the table. Points must have increasing t and nonincreasing T > 0.
  static CoolingSchedule table(std::vector<std::pair<double, double>> points);

  double temperature(double t) const;

  ScheduleKind kind() const { return kind_; }
  double t0() const { return t0_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  CoolingSchedule(ScheduleKind kind, double t0, std::vector<std::pair<double, double>> points);

  ScheduleKind kind_;
  double t0_;
  std::vector<std::pair<double, double>> points_;
};

// Per-step noise standard deviation sqrt(2 * eps * T).
double noise_scale(double temperature, double eps);

}  // namespace kinanneal
