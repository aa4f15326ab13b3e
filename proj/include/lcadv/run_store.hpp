#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lcadv {

enum class Arm { head, prompt, null_verbalizer };

std::string to_string(Arm arm);
Arm arm_from_string(const std::string& label);

// One observed (task, arm, training size, run) -> metric value.
struct RunRecord {
  std::string task;
  Arm arm = Arm::head;
  std::optional<std::string> prompt_id;  // empty for head arms, usually
  long data_size = 0;                    // >= 1
  long run_id = 0;                       // >= 0
  std::string metric;
  double value = 0.0;

  auto key() const { return std::tie(task, arm, prompt_id, data_size, run_id); }
  bool operator==(const RunRecord&) const = default;
};

struct TaskManifest {
  std::string task;
  long total_size = 0;
  long dev_size = 0;
  std::string metric;
  double metric_lo = 0.0;
  double metric_hi = 1.0;
  std::optional<double> majority_baseline;

  bool operator==(const TaskManifest&) const = default;
};

// One column of a RunMatrix. For a single prompt (or a head arm) this is
// just the run id; pooling several prompts makes the run axis the
// (prompt_id, run_id) pairs.
struct RunLabel {
  std::optional<std::string> prompt_id;
  long run_id = 0;

  auto operator<=>(const RunLabel&) const = default;
};

std::string to_string(const RunLabel& label);

// Dense (sizes x runs) grid for one (task, arm); missing cells allowed.
struct RunMatrix {
  std::string task;
  Arm arm = Arm::head;
  std::string metric;
  std::vector<long> sizes;                               // strictly increasing
  std::vector<RunLabel> runs;                            // sorted
  std::vector<std::vector<std::optional<double>>> values;  // [size][run]

  std::size_t run_count() const { return runs.size(); }
  RunMatrix without_run(std::size_t run_index) const;
};

enum class RecordFormat { csv, jsonl };

// CSV header is fixed: task,arm,prompt_id,data_size,run_id,metric,value.
// JSONL uses the same seven keys, one object per line.
std::vector<RunRecord> parse_records(const std::string& document, RecordFormat format);
std::string serialize_records(const std::vector<RunRecord>& records, RecordFormat format);

std::vector<TaskManifest> parse_manifests(const std::string& document);
std::string serialize_manifests(const std::vector<TaskManifest>& manifests);

// Immutable, indexed view over a validated batch of records. Construction
// is single-writer; reads are safe from any number of threads.
class ValidatedRunSet {
 public:
  static ValidatedRunSet validate(std::vector<RunRecord> records,
                                  std::vector<TaskManifest> manifests);

  const std::vector<RunRecord>& records() const { return records_; }
  const std::vector<TaskManifest>& manifests() const { return manifests_; }

  const TaskManifest& manifest(const std::string& task) const;
  std::vector<std::string> tasks() const;
  bool has_arm(const std::string& task, Arm arm) const;
  std::vector<std::string> prompt_ids(const std::string& task, Arm arm) const;

  // Omitting prompt_id pools every prompt of the arm; the run axis then
  // carries (prompt_id, run_id) pairs.
  RunMatrix matrix(const std::string& task, Arm arm,
                   const std::optional<std::string>& prompt_id = std::nullopt) const;

  bool operator==(const ValidatedRunSet&) const = default;

 private:
  ValidatedRunSet() = default;
  std::vector<RunRecord> records_;      // sorted by key
  std::vector<TaskManifest> manifests_;  // sorted by task
};

}  // namespace lcadv
