#include "lcadv/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lcadv/error.hpp"

namespace lcadv {

namespace {

double phi(double x, XScale scale) { return scale == XScale::linear ? x : std::log(x); }

struct Knots {
  std::vector<double> x;
  std::vector<double> y;  // transformed
};

Knots transformed_knots(const LearningCurve& c, const YTransform& g) {
  Knots k;
  k.x.reserve(c.points.size());
  k.y.reserve(c.points.size());
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    if (!(c.points[i].x > c.points[i - 1].x)) {
      throw DomainError("curve x values must be strictly increasing");
    }
  }
  for (const auto& p : c.points) {
    const double gy = g(p.y);
    if (!std::isfinite(gy)) {
      std::ostringstream os;
      os << "transform produces a non-finite value at y=" << p.y;
      throw DomainError(os.str());
    }
    k.x.push_back(p.x);
    k.y.push_back(gy);
  }
  return k;
}

// Linear in phi(x) between knots; x must lie within the knot range.
double eval_knots(const Knots& k, double x, XScale scale) {
  auto it = std::lower_bound(k.x.begin(), k.x.end(), x);
  if (it != k.x.end() && *it == x) return k.y[static_cast<std::size_t>(it - k.x.begin())];
  const std::size_t hi = static_cast<std::size_t>(it - k.x.begin());
  const std::size_t lo = hi - 1;
  const double t = (phi(x, scale) - phi(k.x[lo], scale)) /
                   (phi(k.x[hi], scale) - phi(k.x[lo], scale));
  return k.y[lo] + t * (k.y[hi] - k.y[lo]);
}

// x where the segment (x0,y0)-(x1,y1) reaches level, in the given scale.
double crossing_x(double x0, double x1, double y0, double y1, double level, XScale scale) {
  const double t = (level - y0) / (y1 - y0);
  if (scale == XScale::linear) return x0 + t * (x1 - x0);
  return x0 * std::pow(x1 / x0, t);
}

void collect_breakpoints(const Knots& k, double x_lo, double x_hi, double g_lo, double g_hi,
                         XScale scale, std::vector<double>& out) {
  for (std::size_t i = 0; i < k.x.size(); ++i) {
    if (k.x[i] > x_lo && k.x[i] < x_hi) out.push_back(k.x[i]);
    if (i == 0) continue;
    const double y0 = k.y[i - 1], y1 = k.y[i];
    if (y0 == y1) continue;
    for (double level : {g_lo, g_hi}) {
      if ((y0 < level) != (y1 < level) || y0 == level || y1 == level) {
        const double cx = crossing_x(k.x[i - 1], k.x[i], y0, y1, level, scale);
        if (cx > x_lo && cx < x_hi) out.push_back(cx);
      }
    }
  }
}

// Exact integral over [p, q] of the affine-in-phi function matching the
// endpoint values. Trapezoid for linear x; the x*ln(x) closed form for log.
double integrate_affine(double p, double q, double fp, double fq, XScale scale) {
  if (scale == XScale::linear) return 0.5 * (fp + fq) * (q - p);
  const double lp = std::log(p), lq = std::log(q);
  if (lq == lp) return 0.5 * (fp + fq) * (q - p);
  const double b = (fq - fp) / (lq - lp);
  const double a = fp - b * lp;
  return a * (q - p) + b * (q * lq - q - (p * lp - p));
}

double stddev_population(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

char arm_letter(Arm arm) {
  switch (arm) {
    case Arm::head: return 'H';
    case Arm::prompt: return 'P';
    case Arm::null_verbalizer: return 'N';
  }
  throw DomainError("invalid arm value");
}

Arm arm_from_letter(char c) {
  switch (c) {
    case 'H': case 'h': return Arm::head;
    case 'P': case 'p': return Arm::prompt;
    case 'N': case 'n': return Arm::null_verbalizer;
  }
  throw ValidationError(std::string("unknown arm letter \"") + c + "\" (expected P, H or N)");
}

}  // namespace

YTransform YTransform::identity() {
  YTransform t;
  t.name_ = "identity";
  return t;
}

YTransform YTransform::logit(double metric_lo, double metric_hi) {
  if (!(metric_lo < metric_hi)) throw ValidationError("logit transform requires lo < hi");
  YTransform t;
  t.name_ = "logit";
  t.lo_ = metric_lo;
  t.hi_ = metric_hi;
  return t;
}

YTransform YTransform::custom(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw ValidationError("custom transform needs at least 2 table rows");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].first > table[i - 1].first) || !(table[i].second > table[i - 1].second)) {
      throw ValidationError("custom transform table must be strictly increasing");
    }
  }
  YTransform t;
  t.name_ = "custom";
  t.table_ = std::move(table);
  return t;
}

double YTransform::operator()(double y) const {
  if (name_ == "identity") return y;
  if (name_ == "logit") {
    if (!(y > lo_ && y < hi_)) {
      std::ostringstream os;
      os << "logit transform undefined at y=" << y << " (bounds " << lo_ << ", " << hi_ << ")";
      throw DomainError(os.str());
    }
    return std::log((y - lo_) / (hi_ - y));
  }
  if (y < table_.front().first || y > table_.back().first) {
    throw DomainError("y outside custom transform table");
  }
  auto it = std::lower_bound(table_.begin(), table_.end(), y,
                             [](const auto& row, double v) { return row.first < v; });
  if (it != table_.end() && it->first == y) return it->second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (y - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

std::string to_string(XScale scale) { return scale == XScale::linear ? "linear" : "log"; }

ComparisonBand comparison_band(const LearningCurve& a, const LearningCurve& b, double epsilon) {
  if (a.empty() || b.empty()) throw DomainError("comparison band requires non-empty curves");
  ComparisonBand band;
  band.y_lo = std::max(a.y_min(), b.y_min());
  band.y_hi = std::min(a.y_max(), b.y_max());
  if (band.y_hi - band.y_lo <= epsilon) {
    band.y_lo = std::min(a.y_min(), b.y_min());
    band.y_hi = std::max(a.y_max(), b.y_max());
    band.degenerate = true;
    band.lower_bound = true;
  }
  return band;
}

double data_advantage(const LearningCurve& a, const LearningCurve& b,
                      const ComparisonBand& band, const YTransform& transform, XScale xscale) {
  if (a.empty() || b.empty()) throw DomainError("data advantage requires non-empty curves");
  const double x_lo = std::max(a.x_min(), b.x_min());
  const double x_hi = std::min(a.x_max(), b.x_max());
  if (!(x_hi > x_lo)) throw DomainError("curves do not overlap on an x-interval of positive length");
  if (xscale == XScale::log && (a.x_min() <= 0.0 || b.x_min() <= 0.0)) {
    throw DomainError("log x-scale requires positive data sizes");
  }

  const double g_lo = transform(band.y_lo);
  const double g_hi = transform(band.y_hi);
  if (!std::isfinite(g_lo) || !std::isfinite(g_hi)) {
    throw DomainError("transform produces a non-finite band edge");
  }
  const double height = g_hi - g_lo;
  if (!(height > 0.0)) throw DomainError("zero band height");

  const Knots ka = transformed_knots(a, transform);
  const Knots kb = transformed_knots(b, transform);

  std::vector<double> cuts;
  cuts.push_back(x_lo);
  cuts.push_back(x_hi);
  collect_breakpoints(ka, x_lo, x_hi, g_lo, g_hi, xscale, cuts);
  collect_breakpoints(kb, x_lo, x_hi, g_lo, g_hi, xscale, cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double area = 0.0;
  double prev_x = cuts.front();
  double prev_fa = std::clamp(eval_knots(ka, prev_x, xscale), g_lo, g_hi);
  double prev_fb = std::clamp(eval_knots(kb, prev_x, xscale), g_lo, g_hi);
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double x = cuts[i];
    const double fa = std::clamp(eval_knots(ka, x, xscale), g_lo, g_hi);
    const double fb = std::clamp(eval_knots(kb, x, xscale), g_lo, g_hi);
    area += integrate_affine(prev_x, x, prev_fa - prev_fb, fa - fb, xscale);
    prev_x = x;
    prev_fa = fa;
    prev_fb = fb;
  }
  return area / height;
}

AdvantageResult bootstrap_advantage(const RunMatrix& mat_a, const RunMatrix& mat_b,
                                    ReductionMode mode, double epsilon,
                                    const YTransform& transform, XScale xscale) {
  if (mat_a.run_count() < 2 || mat_b.run_count() < 2) {
    throw ValidationError("bootstrap requires at least 2 runs per arm (got " +
                          std::to_string(mat_a.run_count()) + " and " +
                          std::to_string(mat_b.run_count()) + ")");
  }

  AdvantageResult result;
  result.mode = mode;
  result.transform = transform.name();

  const LearningCurve curve_a = reduce(mat_a, mode);
  const LearningCurve curve_b = reduce(mat_b, mode);
  result.band = comparison_band(curve_a, curve_b, epsilon);
  result.value = data_advantage(curve_a, curve_b, result.band, transform, xscale);

  for (std::size_t i = 0; i < mat_a.run_count(); ++i) {
    const RunMatrix sub_a = mat_a.without_run(i);
    for (std::size_t j = 0; j < mat_b.run_count(); ++j) {
      try {
        const RunMatrix sub_b = mat_b.without_run(j);
        const LearningCurve ca = reduce(sub_a, mode);
        const LearningCurve cb = reduce(sub_b, mode);
        const ComparisonBand band = comparison_band(ca, cb, epsilon);
        result.combos.push_back(data_advantage(ca, cb, band, transform, xscale));
      } catch (const DomainError&) {
        ++result.failed_combos;
      } catch (const ValidationError&) {
        ++result.failed_combos;
      }
    }
  }
  result.std_dev = stddev_population(result.combos);
  return result;
}

std::string pair_label(const ArmPair& pair) {
  return std::string(1, arm_letter(pair.first)) + ":" + std::string(1, arm_letter(pair.second));
}

ArmPair pair_from_label(const std::string& label) {
  if (label.size() != 3 || label[1] != ':') {
    throw ValidationError("pair must look like P:H (got \"" + label + "\")");
  }
  return ArmPair{arm_from_letter(label[0]), arm_from_letter(label[2])};
}

std::vector<AdvantageResult> pairwise_table(const ValidatedRunSet& set, const std::string& task,
                                            const std::vector<ArmPair>& pairs, ReductionMode mode,
                                            double epsilon, const YTransform& transform,
                                            XScale xscale) {
  std::vector<AdvantageResult> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    for (Arm arm : {pair.first, pair.second}) {
      if (!set.has_arm(task, arm)) {
        throw ValidationError("task \"" + task + "\" has no records for arm \"" + to_string(arm) +
                              "\"");
      }
    }
    const RunMatrix mat_a = set.matrix(task, pair.first);
    const RunMatrix mat_b = set.matrix(task, pair.second);
    out.push_back(bootstrap_advantage(mat_a, mat_b, mode, epsilon, transform, xscale));
  }
  return out;
}

}  // namespace lcadv
