#include "kinanneal/schedule.hpp"

#include <cmath>

#include "kinanneal/errors.hpp"

namespace kinanneal {

CoolingSchedule::CoolingSchedule() : CoolingSchedule(ScheduleKind::constant, 2.0, {}) {}

CoolingSchedule::CoolingSchedule(ScheduleKind kind, double t0,
                                 std::vector<std::pair<double, double>> points)
    : kind_(kind), t0_(t0), points_(std::move(points)) {}

CoolingSchedule CoolingSchedule::constant(double t0) {
  if (!(t0 > 0.0)) throw config_error("schedule: T0 must be positive");
  return CoolingSchedule(ScheduleKind::constant, t0, {});
}

CoolingSchedule CoolingSchedule::logarithmic(double t0) {
  if (!(t0 > 0.0)) throw config_error("schedule: T0 must be positive");
  return CoolingSchedule(ScheduleKind::logarithmic, t0, {});
}

CoolingSchedule CoolingSchedule::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw config_error("schedule: table needs at least one (t, T) point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].second > 0.0)) throw config_error("schedule: table temperatures must be positive");
    if (points[i].first < 0.0) throw config_error("schedule: table times must be nonnegative");
    if (i > 0) {
      if (!(points[i].first > points[i - 1].first)) {
        throw config_error("schedule: table times must be strictly increasing");
      }
      if (points[i].second > points[i - 1].second) {
        throw config_error("schedule: table temperatures must be nonincreasing");
      }
    }
  }
  const double t0 = points.front().second;
  return CoolingSchedule(ScheduleKind::table, t0, std::move(points));
}

double CoolingSchedule::temperature(double t) const {
  if (t < 0.0) throw config_error("schedule: time must be nonnegative");
  switch (kind_) {
    case ScheduleKind::constant:
      return t0_;
    case ScheduleKind::logarithmic:
      return t0_ / std::log(t + 2.0);
    case ScheduleKind::table: {
      if (t <= points_.front().first) return points_.front().second;
      if (t >= points_.back().first) return points_.back().second;  // hold last value
      std::size_t i = 1;
      while (points_[i].first < t) ++i;
      const auto& [ta, Ta] = points_[i - 1];
      const auto& [tb, Tb] = points_[i];
      const double w = (t - ta) / (tb - ta);
      return Ta + w * (Tb - Ta);
    }
  }
  return t0_;
}

double noise_scale(double temperature, double eps) {
  if (!(temperature > 0.0) || !(eps > 0.0)) {
    throw config_error("noise_scale: temperature and eps must be positive");
  }
  return std::sqrt(2.0 * eps * temperature);
}

}  // namespace kinanneal
