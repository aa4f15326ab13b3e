#include "lcadv/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lcadv/error.hpp"

namespace lcadv {

namespace {

using nlohmann::json;

// Default ladder, read off the published 10..919 grid: the tens decade runs
// {10, 15, 20, 32, 50, 70}; every later decade uses {1, 1.5, 2, 3.2, 5, 7.5}.
const std::vector<double> kTensMantissas = {1.0, 1.5, 2.0, 3.2, 5.0, 7.0};
const std::vector<double> kUpperMantissas = {1.0, 1.5, 2.0, 3.2, 5.0, 7.5};

Schedule build_schedule(long n_total, long n_dev,
                        const std::vector<double>* uniform_mantissas) {
  if (n_dev < 0) throw ValidationError("dev size must be ≥ 0");
  if (n_dev >= n_total) throw ValidationError("dev size must be < total size");
  const long n_train = n_total - n_dev;

  Schedule s;
  s.n_train = n_train;
  for (long decade = 10; decade < n_train; decade *= 10) {
    const std::vector<double>& mantissas =
        uniform_mantissas ? *uniform_mantissas
                          : (decade == 10 ? kTensMantissas : kUpperMantissas);
    for (double m : mantissas) {
      const long size = std::lround(m * static_cast<double>(decade));
      if (size >= n_train) break;
      s.sizes.push_back(size);
    }
    if (decade > n_train / 10) break;
  }
  s.sizes.push_back(n_train);
  s.sizes.erase(std::unique(s.sizes.begin(), s.sizes.end()), s.sizes.end());
  return s;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

std::string to_string(ReductionMode mode) {
  switch (mode) {
    case ReductionMode::accmax: return "accmax";
    case ReductionMode::max: return "max";
    case ReductionMode::mean: return "mean";
    case ReductionMode::median: return "median";
  }
  throw DomainError("invalid reduction mode");
}

ReductionMode reduction_mode_from_string(const std::string& label) {
  if (label == "accmax") return ReductionMode::accmax;
  if (label == "max") return ReductionMode::max;
  if (label == "mean") return ReductionMode::mean;
  if (label == "median") return ReductionMode::median;
  throw ValidationError("unknown reduction mode \"" + label + "\"");
}

double LearningCurve::y_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::min(m, p.y);
  return m;
}

double LearningCurve::y_max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::max(m, p.y);
  return m;
}

Schedule make_schedule(long n_total, long n_dev) {
  return build_schedule(n_total, n_dev, nullptr);
}

Schedule make_schedule(long n_total, long n_dev, const std::vector<double>& mantissas) {
  if (mantissas.empty()) throw ValidationError("mantissa grid must be non-empty");
  for (std::size_t i = 0; i < mantissas.size(); ++i) {
    if (mantissas[i] < 1.0 || mantissas[i] >= 10.0) {
      throw ValidationError("mantissas must lie in [1, 10)");
    }
    if (i > 0 && mantissas[i] <= mantissas[i - 1]) {
      throw ValidationError("mantissas must be strictly increasing");
    }
  }
  return build_schedule(n_total, n_dev, &mantissas);
}

LearningCurve reduce(const RunMatrix& matrix, ReductionMode mode) {
  LearningCurve curve;
  curve.mode = mode;
  curve.metric = matrix.metric;
  curve.task = matrix.task;
  curve.arm = to_string(matrix.arm);

  double running_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < matrix.sizes.size(); ++i) {
    std::vector<double> present;
    for (const auto& cell : matrix.values[i]) {
      if (cell) present.push_back(*cell);
    }
    if (present.empty()) {
      throw ValidationError("no run values at size " + std::to_string(matrix.sizes[i]));
    }
    double y = 0.0;
    switch (mode) {
      case ReductionMode::max:
        y = *std::max_element(present.begin(), present.end());
        break;
      case ReductionMode::accmax:
        running_max = std::max(running_max, *std::max_element(present.begin(), present.end()));
        y = running_max;
        break;
      case ReductionMode::mean: {
        double sum = 0.0;
        for (double v : present) sum += v;
        y = sum / static_cast<double>(present.size());
        break;
      }
      case ReductionMode::median:
        y = median_of(present);
        break;
    }
    curve.points.push_back({static_cast<double>(matrix.sizes[i]), y});
  }
  return curve;
}

double interpolate(const LearningCurve& curve, double x) {
  if (curve.empty()) throw DomainError("cannot interpolate an empty curve");
  const auto& pts = curve.points;
  if (x < pts.front().x || x > pts.back().x) {
    std::ostringstream os;
    os << "x=" << x << " outside curve domain [" << pts.front().x << ", " << pts.back().x << "]";
    throw DomainError(os.str());
  }
  auto it = std::lower_bound(pts.begin(), pts.end(), x,
                             [](const CurvePoint& p, double v) { return p.x < v; });
  if (it != pts.end() && it->x == x) return it->y;
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

double invert(const LearningCurve& curve, double y) {
  if (curve.points.size() < 2) throw DomainError("cannot invert a curve with fewer than 2 points");
  const auto& pts = curve.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].y > pts[i - 1].y)) {
      throw DomainError("curve is not strictly increasing in the metric");
    }
  }
  if (y < pts.front().y || y > pts.back().y) {
    std::ostringstream os;
    os << "y=" << y << " outside curve range [" << pts.front().y << ", " << pts.back().y << "]";
    throw DomainError(os.str());
  }
  auto it = std::lower_bound(pts.begin(), pts.end(), y,
                             [](const CurvePoint& p, double v) { return p.y < v; });
  if (it != pts.end() && it->y == y) return it->x;
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  const double t = (y - lo.y) / (hi.y - lo.y);
  return lo.x + t * (hi.x - lo.x);
}

std::string curve_to_json(const LearningCurve& curve) {
  json obj;
  obj["task"] = curve.task;
  obj["arm"] = curve.arm;
  obj["mode"] = to_string(curve.mode);
  obj["metric"] = curve.metric;
  json pts = json::array();
  for (const auto& p : curve.points) pts.push_back(json::array({p.x, p.y}));
  obj["points"] = pts;
  return obj.dump(2) + "\n";
}

LearningCurve curve_from_json(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("curve: ") + e.what());
  }
  LearningCurve curve;
  try {
    curve.task = obj.at("task").get<std::string>();
    curve.arm = obj.at("arm").get<std::string>();
    curve.mode = reduction_mode_from_string(obj.at("mode").get<std::string>());
    curve.metric = obj.at("metric").get<std::string>();
    for (const auto& p : obj.at("points")) {
      if (!p.is_array() || p.size() != 2) throw ValidationError("curve: points must be [x, y] pairs");
      curve.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("curve: ") + e.what());
  }
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (!std::isfinite(curve.points[i].y) || !std::isfinite(curve.points[i].x)) {
      throw ValidationError("curve: points must be finite");
    }
    if (i > 0 && !(curve.points[i].x > curve.points[i - 1].x)) {
      throw ValidationError("curve: x values must be strictly increasing");
    }
  }
  return curve;
}

}  // namespace lcadv
