#include "lcadv/run_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lcadv/error.hpp"

namespace lcadv {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader = "task,arm,prompt_id,data_size,run_id,metric,value";

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ValidationError(where + ": invalid number \"" + text + "\"");
  }
  return v;
}

long parse_long(const std::string& text, const std::string& where) {
  long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ValidationError(where + ": invalid integer \"" + text + "\"");
  }
  return v;
}

// RFC-4180 tokenizer. Quoted fields may contain commas, quotes ("" escape)
// and line breaks; rows end at CR, LF or CRLF outside quotes.
std::vector<std::vector<std::string>> split_csv(const std::string& doc) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  std::size_t i = 0;
  const std::size_t n = doc.size();
  while (i < n) {
    char c = doc[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && doc[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !field_started && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (i + 1 < n && doc[i + 1] == '\n') ++i;
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) {
    throw ValidationError("row " + std::to_string(rows.size() + 1) + ": unterminated quoted field");
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

void check_record_fields(const RunRecord& r, const std::string& where) {
  if (r.task.empty()) throw ValidationError(where + ": task must be non-empty");
  if (r.data_size < 1) throw ValidationError(where + ": data_size must be ≥ 1");
  if (r.run_id < 0) throw ValidationError(where + ": run_id must be ≥ 0");
  if (r.metric.empty()) throw ValidationError(where + ": metric must be non-empty");
  if (!std::isfinite(r.value)) throw ValidationError(where + ": value must be finite");
  if (r.prompt_id && r.prompt_id->empty()) {
    throw ValidationError(where + ": prompt_id must be non-empty when present");
  }
}

RunRecord record_from_fields(const std::vector<std::string>& f, const std::string& where) {
  if (f.size() != 7) {
    throw ValidationError(where + ": expected 7 fields, got " + std::to_string(f.size()));
  }
  RunRecord r;
  r.task = f[0];
  r.arm = [&] {
    try {
      return arm_from_string(f[1]);
    } catch (const ValidationError&) {
      throw ValidationError(where + ": unknown arm label \"" + f[1] + "\"");
    }
  }();
  if (!f[2].empty()) r.prompt_id = f[2];
  r.data_size = parse_long(f[3], where + ", field data_size");
  if (r.data_size < 1) throw ValidationError(where + ": data_size must be ≥ 1");
  r.run_id = parse_long(f[4], where + ", field run_id");
  r.metric = f[5];
  r.value = parse_double(f[6], where + ", field value");
  check_record_fields(r, where);
  return r;
}

RunRecord record_from_json(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected a JSON object");
  static const std::set<std::string> keys = {"task",   "arm",    "prompt_id", "data_size",
                                             "run_id", "metric", "value"};
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!keys.count(it.key())) throw ValidationError(where + ": unexpected key \"" + it.key() + "\"");
  }
  for (const auto& k : keys) {
    if (!obj.contains(k)) throw ValidationError(where + ": missing key \"" + k + "\"");
  }
  RunRecord r;
  try {
    r.task = obj.at("task").get<std::string>();
    const auto arm_label = obj.at("arm").get<std::string>();
    try {
      r.arm = arm_from_string(arm_label);
    } catch (const ValidationError&) {
      throw ValidationError(where + ": unknown arm label \"" + arm_label + "\"");
    }
    const auto& pid = obj.at("prompt_id");
    if (pid.is_string() && !pid.get<std::string>().empty()) r.prompt_id = pid.get<std::string>();
    else if (!pid.is_null() && !(pid.is_string() && pid.get<std::string>().empty())) {
      throw ValidationError(where + ": prompt_id must be a string or null");
    }
    r.data_size = obj.at("data_size").get<long>();
    if (r.data_size < 1) throw ValidationError(where + ": data_size must be ≥ 1");
    r.run_id = obj.at("run_id").get<long>();
    r.metric = obj.at("metric").get<std::string>();
    r.value = obj.at("value").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(where + ": " + e.what());
  }
  check_record_fields(r, where);
  return r;
}

json record_to_json(const RunRecord& r) {
  json obj;
  obj["task"] = r.task;
  obj["arm"] = to_string(r.arm);
  obj["prompt_id"] = r.prompt_id ? json(*r.prompt_id) : json(nullptr);
  obj["data_size"] = r.data_size;
  obj["run_id"] = r.run_id;
  obj["metric"] = r.metric;
  obj["value"] = r.value;
  return obj;
}

void check_manifest(const TaskManifest& m) {
  if (m.task.empty()) throw ValidationError("manifest: task must be non-empty");
  const std::string where = "manifest for task \"" + m.task + "\"";
  if (m.total_size < 1) throw ValidationError(where + ": total_size must be ≥ 1");
  if (m.dev_size < 0) throw ValidationError(where + ": dev_size must be ≥ 0");
  if (m.dev_size >= m.total_size) throw ValidationError(where + ": dev_size must be < total_size");
  if (m.metric.empty()) throw ValidationError(where + ": metric must be non-empty");
  if (!(m.metric_lo < m.metric_hi)) throw ValidationError(where + ": metric_lo must be < metric_hi");
  if (m.majority_baseline &&
      (*m.majority_baseline < m.metric_lo || *m.majority_baseline > m.metric_hi)) {
    throw ValidationError(where + ": majority_baseline outside metric bounds");
  }
}

TaskManifest manifest_from_json(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected a JSON object");
  TaskManifest m;
  try {
    m.task = obj.at("task").get<std::string>();
    m.total_size = obj.at("total_size").get<long>();
    m.dev_size = obj.at("dev_size").get<long>();
    m.metric = obj.at("metric").get<std::string>();
    m.metric_lo = obj.at("metric_lo").get<double>();
    m.metric_hi = obj.at("metric_hi").get<double>();
    if (obj.contains("majority_baseline") && !obj.at("majority_baseline").is_null()) {
      m.majority_baseline = obj.at("majority_baseline").get<double>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(where + ": " + e.what());
  }
  check_manifest(m);
  return m;
}

std::string record_key_string(const RunRecord& r) {
  std::ostringstream os;
  os << "task=" << r.task << " arm=" << to_string(r.arm);
  if (r.prompt_id) os << " prompt_id=" << *r.prompt_id;
  os << " data_size=" << r.data_size << " run_id=" << r.run_id;
  return os.str();
}

}  // namespace

std::string to_string(Arm arm) {
  switch (arm) {
    case Arm::head: return "head";
    case Arm::prompt: return "prompt";
    case Arm::null_verbalizer: return "null";
  }
  throw DomainError("invalid arm value");
}

Arm arm_from_string(const std::string& label) {
  if (label == "head") return Arm::head;
  if (label == "prompt") return Arm::prompt;
  if (label == "null") return Arm::null_verbalizer;
  throw ValidationError("unknown arm label \"" + label + "\"");
}

std::string to_string(const RunLabel& label) {
  if (label.prompt_id) return *label.prompt_id + "/" + std::to_string(label.run_id);
  return std::to_string(label.run_id);
}

RunMatrix RunMatrix::without_run(std::size_t run_index) const {
  RunMatrix out;
  out.task = task;
  out.arm = arm;
  out.metric = metric;
  out.sizes = sizes;
  for (std::size_t j = 0; j < runs.size(); ++j) {
    if (j != run_index) out.runs.push_back(runs[j]);
  }
  out.values.resize(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t j = 0; j < runs.size(); ++j) {
      if (j != run_index) out.values[i].push_back(values[i][j]);
    }
  }
  return out;
}

std::vector<RunRecord> parse_records(const std::string& document, RecordFormat format) {
  std::vector<RunRecord> records;
  if (format == RecordFormat::csv) {
    auto rows = split_csv(document);
    if (rows.empty()) throw ValidationError("row 1: missing header");
    {
      std::ostringstream hdr;
      for (std::size_t i = 0; i < rows[0].size(); ++i) {
        if (i) hdr << ',';
        hdr << rows[0][i];
      }
      if (hdr.str() != kCsvHeader) {
        throw ValidationError(std::string("row 1: header must be exactly \"") + kCsvHeader + "\"");
      }
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      records.push_back(record_from_fields(rows[i], "row " + std::to_string(i + 1)));
    }
  } else {
    std::istringstream in(document);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      const std::string where = "line " + std::to_string(lineno);
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::exception& e) {
        throw ValidationError(where + ": " + e.what());
      }
      records.push_back(record_from_json(obj, where));
    }
  }
  return records;
}

std::string serialize_records(const std::vector<RunRecord>& records, RecordFormat format) {
  std::ostringstream out;
  if (format == RecordFormat::csv) {
    out << kCsvHeader << "\n";
    for (const auto& r : records) {
      out << csv_escape(r.task) << ',' << to_string(r.arm) << ','
          << csv_escape(r.prompt_id.value_or("")) << ',' << r.data_size << ',' << r.run_id << ','
          << csv_escape(r.metric) << ',' << format_double(r.value) << "\n";
    }
  } else {
    for (const auto& r : records) out << record_to_json(r).dump() << "\n";
  }
  return out.str();
}

std::vector<TaskManifest> parse_manifests(const std::string& document) {
  std::vector<TaskManifest> manifests;
  const auto first = document.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ValidationError("manifest document is empty");
  if (document[first] == '[') {
    json arr;
    try {
      arr = json::parse(document);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("manifest: ") + e.what());
    }
    std::size_t i = 0;
    for (const auto& obj : arr) {
      manifests.push_back(manifest_from_json(obj, "manifest entry " + std::to_string(++i)));
    }
  } else {
    std::istringstream in(document);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      const std::string where = "manifest line " + std::to_string(lineno);
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::exception& e) {
        throw ValidationError(where + ": " + e.what());
      }
      manifests.push_back(manifest_from_json(obj, where));
    }
  }
  return manifests;
}

std::string serialize_manifests(const std::vector<TaskManifest>& manifests) {
  json arr = json::array();
  for (const auto& m : manifests) {
    json obj;
    obj["task"] = m.task;
    obj["total_size"] = m.total_size;
    obj["dev_size"] = m.dev_size;
    obj["metric"] = m.metric;
    obj["metric_lo"] = m.metric_lo;
    obj["metric_hi"] = m.metric_hi;
    obj["majority_baseline"] = m.majority_baseline ? json(*m.majority_baseline) : json(nullptr);
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

ValidatedRunSet ValidatedRunSet::validate(std::vector<RunRecord> records,
                                          std::vector<TaskManifest> manifests) {
  std::sort(manifests.begin(), manifests.end(),
            [](const TaskManifest& a, const TaskManifest& b) { return a.task < b.task; });
  std::map<std::string, const TaskManifest*> by_task;
  for (const auto& m : manifests) {
    check_manifest(m);
    if (!by_task.emplace(m.task, &m).second) {
      throw ValidationError("duplicate manifest for task \"" + m.task + "\"");
    }
  }

  for (const auto& r : records) {
    check_record_fields(r, record_key_string(r));
    auto it = by_task.find(r.task);
    if (it == by_task.end()) throw ValidationError("no manifest for task \"" + r.task + "\"");
    const TaskManifest& m = *it->second;
    if (r.metric != m.metric) {
      throw ValidationError("record metric \"" + r.metric + "\" does not match manifest metric \"" +
                            m.metric + "\" for task \"" + r.task + "\"");
    }
    if (r.value < m.metric_lo || r.value > m.metric_hi) {
      std::ostringstream os;
      os << "metric value " << format_double(r.value) << " outside [" << format_double(m.metric_lo)
         << ", " << format_double(m.metric_hi) << "] for " << record_key_string(r);
      throw ValidationError(os.str());
    }
  }

  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.key() < b.key(); });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].key() == records[i - 1].key()) {
      throw ValidationError("duplicate record: " + record_key_string(records[i]));
    }
  }

  ValidatedRunSet set;
  set.records_ = std::move(records);
  set.manifests_ = std::move(manifests);
  return set;
}

const TaskManifest& ValidatedRunSet::manifest(const std::string& task) const {
  for (const auto& m : manifests_) {
    if (m.task == task) return m;
  }
  throw ValidationError("no manifest for task \"" + task + "\"");
}

std::vector<std::string> ValidatedRunSet::tasks() const {
  std::vector<std::string> out;
  for (const auto& m : manifests_) out.push_back(m.task);
  return out;
}

bool ValidatedRunSet::has_arm(const std::string& task, Arm arm) const {
  return std::any_of(records_.begin(), records_.end(), [&](const RunRecord& r) {
    return r.task == task && r.arm == arm;
  });
}

std::vector<std::string> ValidatedRunSet::prompt_ids(const std::string& task, Arm arm) const {
  std::set<std::string> ids;
  for (const auto& r : records_) {
    if (r.task == task && r.arm == arm && r.prompt_id) ids.insert(*r.prompt_id);
  }
  return {ids.begin(), ids.end()};
}

RunMatrix ValidatedRunSet::matrix(const std::string& task, Arm arm,
                                  const std::optional<std::string>& prompt_id) const {
  std::vector<const RunRecord*> hits;
  for (const auto& r : records_) {
    if (r.task != task || r.arm != arm) continue;
    if (prompt_id && r.prompt_id != prompt_id) continue;
    hits.push_back(&r);
  }
  if (hits.empty()) {
    std::string what = "no records for task=" + task + " arm=" + to_string(arm);
    if (prompt_id) what += " prompt_id=" + *prompt_id;
    throw ValidationError(what);
  }

  std::set<long> sizes;
  std::set<RunLabel> labels;
  for (const auto* r : hits) {
    sizes.insert(r->data_size);
    labels.insert(RunLabel{r->prompt_id, r->run_id});
  }

  RunMatrix m;
  m.task = task;
  m.arm = arm;
  m.metric = hits.front()->metric;
  m.sizes.assign(sizes.begin(), sizes.end());
  m.runs.assign(labels.begin(), labels.end());
  m.values.assign(m.sizes.size(), std::vector<std::optional<double>>(m.runs.size()));

  std::map<long, std::size_t> size_idx;
  for (std::size_t i = 0; i < m.sizes.size(); ++i) size_idx[m.sizes[i]] = i;
  std::map<RunLabel, std::size_t> run_idx;
  for (std::size_t j = 0; j < m.runs.size(); ++j) run_idx[m.runs[j]] = j;

  for (const auto* r : hits) {
    m.values[size_idx[r->data_size]][run_idx[RunLabel{r->prompt_id, r->run_id}]] = r->value;
  }
  return m;
}

}  // namespace lcadv
