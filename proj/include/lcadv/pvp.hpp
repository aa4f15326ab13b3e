#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcadv {

// Cloze template with named {slot}s and exactly one <MASK> placeholder.
struct Pattern {
  std::string task;
  std::string text;

  std::vector<std::string> slots() const;  // in order of first appearance
};

// Invertible label -> token map. Identity verbalizers pass candidate
// strings through unchanged (free-form answer tasks).
class Verbalizer {
 public:
  static Verbalizer mapping(std::vector<std::pair<std::string, std::string>> pairs);
  static Verbalizer identity();

  bool is_identity() const { return identity_; }
  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

  std::string verbalize(const std::string& label) const;
  std::string deverbalize(const std::string& token) const;

 private:
  bool identity_ = false;
  std::vector<std::pair<std::string, std::string>> pairs_;  // label order fixed
};

struct PVP {
  std::string pvp_id;
  Pattern pattern;
  Verbalizer verbalizer;
};

// Built-in catalog. Tasks: mnli, rte, cb, boolq, copa, multirc, wic, wsc.
std::vector<PVP> builtin_pvps(const std::string& task);
PVP builtin_pvp(const std::string& task, const std::string& pvp_id);
std::vector<std::string> builtin_tasks();

// Byte-exact slot substitution; <MASK> stays in place. Unknown fields are
// ignored and reported through `warnings` when given.
std::string render(const PVP& pvp, const std::map<std::string, std::string>& fields,
                   std::vector<std::string>* warnings = nullptr);

// Control verbalizer: each label gets a distinct random first name, drawn
// without replacement from a fixed 100-name list. Deterministic per seed.
Verbalizer null_verbalizer(const Verbalizer& v, std::uint64_t seed);

std::span<const std::string> first_name_pool();

}  // namespace lcadv
