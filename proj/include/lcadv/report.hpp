#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lcadv/advantage.hpp"
#include "lcadv/curve.hpp"

namespace lcadv {

// Rows are fixed to [P:H, P:N, N:H]; columns follow `tasks`. Cells are
// "value±std" rounded half-even to whole data points, "-" when missing,
// "*"-suffixed for lower-bound results.
struct TableSpec {
  std::vector<std::string> tasks;
};

struct AdvantageTable {
  std::string text;  // markdown
  std::string json;  // same rounded values plus full precision
};

using ResultKey = std::pair<std::string, std::string>;  // (task, pair label)

AdvantageTable advantage_table(const std::map<ResultKey, AdvantageResult>& results,
                               const TableSpec& spec);

long long round_half_even(double x);

struct PlotSpec {
  double width = 720.0;
  double height = 480.0;
  std::string label_a = "a";
  std::string label_b = "b";
};

// Self-contained SVG: two curve polylines, the signed difference region
// split at crossings, and a cross-hatched rectangle spanning exactly
// [y_lo, y_hi]. The x axis is drawn log-scaled with major ticks at powers
// of 10 and minor ticks at the schedule mantissas.
std::string plot_comparison(const LearningCurve& a, const LearningCurve& b,
                            const ComparisonBand& band, const PlotSpec& spec = {});

struct PromptCurves {
  LearningCurve median;
  std::vector<LearningCurve> runs;
};

// One median polyline plus a min-max envelope per prompt, legend keyed by
// prompt id. Requires at least two prompts.
std::string plot_prompt_medians(const std::map<std::string, PromptCurves>& prompts,
                                const PlotSpec& spec = {});

}  // namespace lcadv
