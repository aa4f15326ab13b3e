#pragma once

#include <string>
#include <vector>

#include "lcadv/run_store.hpp"

namespace lcadv {

// How several runs at one data size collapse into a single curve point:
//   max    - best run at each size
//   accmax - best run at each size or any smaller size (non-decreasing)
//   mean   - arithmetic mean of the runs at each size
//   median - per-size median (mid-average for even counts)
enum class ReductionMode { accmax, max, mean, median };

std::string to_string(ReductionMode mode);
ReductionMode reduction_mode_from_string(const std::string& label);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const CurvePoint&) const = default;
};

struct LearningCurve {
  std::vector<CurvePoint> points;  // x strictly increasing, y finite
  ReductionMode mode = ReductionMode::accmax;
  std::string metric;
  std::string task;  // serialization context, may be empty
  std::string arm;

  bool empty() const { return points.empty(); }
  double x_min() const { return points.front().x; }
  double x_max() const { return points.back().x; }
  double y_min() const;
  double y_max() const;
};

// Exponential data-size grid: starts at 10, climbs through the default
// mantissa ladder, and always ends at n_train = n_total - n_dev.
struct Schedule {
  std::vector<long> sizes;
  long n_train = 0;
};

Schedule make_schedule(long n_total, long n_dev);
// Custom mantissas (e.g. {1, 2, 5}) applied uniformly to every decade.
Schedule make_schedule(long n_total, long n_dev, const std::vector<double>& mantissas);

LearningCurve reduce(const RunMatrix& matrix, ReductionMode mode);

// Piecewise-linear evaluation; x must lie within the curve's domain.
double interpolate(const LearningCurve& curve, double x);

// Unique x with interpolate(curve, x) == y; the curve must be strictly
// increasing in y.
double invert(const LearningCurve& curve, double y);

std::string curve_to_json(const LearningCurve& curve);
LearningCurve curve_from_json(const std::string& text);

}  // namespace lcadv
