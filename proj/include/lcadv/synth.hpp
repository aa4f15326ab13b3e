#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcadv/advantage.hpp"
#include "lcadv/curve.hpp"
#include "lcadv/run_store.hpp"

namespace lcadv {

// Saturating learner: mean curve y(n) = y_inf - (y_inf - y0) * exp(-(n/tau)^gamma),
// plus gaussian jitter and an occasional collapse to fail_value (the
// bimodal poor-outlier regime real sweeps show).
struct LearnerSpec {
  double y0 = 0.5;
  double y_inf = 0.9;
  double tau = 100.0;    // > 0
  double gamma = 1.0;    // > 0
  double noise_sd = 0.0; // >= 0
  double fail_prob = 0.0;
  double fail_value = 0.5;

  double mean_at(double n) const;
  void check() const;  // throws ValidationError on a bad spec
};

struct SynthArm {
  Arm arm = Arm::head;
  std::optional<std::string> prompt_id;
  LearnerSpec learner;
};

struct SynthTask {
  TaskManifest manifest;
  int n_runs = 4;
  std::vector<SynthArm> arms;
};

struct SynthSpec {
  std::vector<SynthTask> tasks;
};

SynthSpec synth_spec_from_json(const std::string& text);

// Deterministic for a fixed seed: every (run, size) cell draws from its own
// splitmix64 stream keyed by (seed, run, size index).
std::vector<RunRecord> gen_runs(const LearnerSpec& spec, const Schedule& schedule,
                                int n_runs, std::uint64_t seed,
                                const std::string& task, Arm arm,
                                const std::optional<std::string>& prompt_id,
                                const std::string& metric, double metric_lo,
                                double metric_hi);

std::vector<RunRecord> gen_runs(const SynthSpec& spec, std::uint64_t seed);

// Fixed 3-task, 3-arm, 4-run bundle plus its expected advantage table,
// regenerated bit-identically from the seed. End-to-end pipeline oracle.
struct GoldenDataset {
  ValidatedRunSet set;
  // (task, pair label) -> result, pairs P:H, P:N, N:H per task.
  std::map<std::pair<std::string, std::string>, AdvantageResult> expected;
};

SynthSpec golden_spec();
GoldenDataset golden_dataset(std::uint64_t seed);

}  // namespace lcadv
