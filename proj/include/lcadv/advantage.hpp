#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcadv/curve.hpp"
#include "lcadv/run_store.hpp"

namespace lcadv {

// Metric interval over which two curves can be compared at matched
// performance: from the larger of the two minima to the smaller of the two
// maxima. When that interval is no taller than epsilon the band falls back
// to the union of both ranges and the result is only a lower bound.
struct ComparisonBand {
  double y_lo = 0.0;
  double y_hi = 0.0;
  bool degenerate = false;
  bool lower_bound = false;
};

// Optional y-axis re-parameterization. Applied to curve values at the
// knots; interpolation stays linear in the transformed scale.
class YTransform {
 public:
  static YTransform identity();
  static YTransform logit(double metric_lo, double metric_hi);
  // Strictly increasing tabulated map, evaluated by linear interpolation.
  static YTransform custom(std::vector<std::pair<double, double>> table);

  double operator()(double y) const;
  const std::string& name() const { return name_; }

 private:
  YTransform() = default;
  std::string name_;
  double lo_ = 0.0, hi_ = 0.0;                     // logit bounds
  std::vector<std::pair<double, double>> table_;   // custom map
};

// Interpolation scale for the x axis. The integral is always taken in raw
// data points; log only changes how curves are read between knots.
enum class XScale { linear, log };

std::string to_string(XScale scale);

struct AdvantageResult {
  double value = 0.0;               // data points; positive favors curve a
  double std_dev = 0.0;             // population std of combos
  std::vector<double> combos;       // hold-one-out values, sorted by (i, j)
  ComparisonBand band;
  ReductionMode mode = ReductionMode::accmax;
  std::string transform = "identity";
  int failed_combos = 0;
};

ComparisonBand comparison_band(const LearningCurve& a, const LearningCurve& b,
                               double epsilon = 0.02);

// Area between the two curves, clipped to the band, divided by the band
// height. Positive means a reaches equal performance with fewer data
// points than b; stretches where b is on top subtract from the total.
double data_advantage(const LearningCurve& a, const LearningCurve& b,
                      const ComparisonBand& band, const YTransform& transform,
                      XScale xscale = XScale::linear);

// Central value from all runs; spread from recomputing the advantage for
// every (delete run i from a, delete run j from b) combination.
AdvantageResult bootstrap_advantage(const RunMatrix& mat_a, const RunMatrix& mat_b,
                                    ReductionMode mode, double epsilon,
                                    const YTransform& transform,
                                    XScale xscale = XScale::linear);

struct ArmPair {
  Arm first;
  Arm second;
};

// "P:H"-style label, e.g. prompt vs head.
std::string pair_label(const ArmPair& pair);
ArmPair pair_from_label(const std::string& label);

std::vector<AdvantageResult> pairwise_table(const ValidatedRunSet& set,
                                            const std::string& task,
                                            const std::vector<ArmPair>& pairs,
                                            ReductionMode mode, double epsilon,
                                            const YTransform& transform,
                                            XScale xscale = XScale::linear);

}  // namespace lcadv
