#include "lcadv/pvp.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "lcadv/error.hpp"
#include "lcadv/prng.hpp"

namespace lcadv {

namespace {

struct TaskEntry {
  const char* task;
  std::vector<const char*> slots;
  std::vector<const char*> patterns;
  // label -> token rows; empty means identity (free-form answer) verbalizer
  std::vector<std::pair<const char*, const char*>> verbalizer;
};

// Entailment tasks share patterns and the yes/no/maybe verbalizer.
const std::vector<const char*> kEntailmentPatterns = {
    "{hypothesis}? | <MASK>, {premise}",
    "\"{hypothesis}\"? | <MASK>. \"{premise}\"",
};
const std::vector<std::pair<const char*, const char*>> kEntailmentVerbalizer = {
    {"entailment", "yes"},
    {"contradiction", "no"},
    {"neutral", "maybe"},
};
const std::vector<std::pair<const char*, const char*>> kYesNoVerbalizer = {
    {"True", "yes"},
    {"False", "no"},
};

const std::vector<TaskEntry>& catalog() {
  static const std::vector<TaskEntry> entries = {
      {"boolq",
       {"passage", "question"},
       {
           "{passage}. Question: {question}? Answer: <MASK>.",
           "{passage}. Based on the previous passage, {question}? <MASK>.",
           "Based on the following passage, {question}? <MASK>. {passage}",
       },
       kYesNoVerbalizer},
      {"cb", {"premise", "hypothesis"}, kEntailmentPatterns, kEntailmentVerbalizer},
      {"copa",
       {"premise", "choice1", "choice2"},
       {
           "“{choice1}” or “{choice2}”? {premise}, so <MASK> .",
           "{choice1} or {choice2}? {premise}, so <MASK>.",
           "“{choice1}” or “{choice2}”? <MASK>, because {premise}.",
           "{choice1} or {choice2}? <MASK>, because {premise}.",
       },
       {}},
      {"mnli", {"premise", "hypothesis"}, kEntailmentPatterns, kEntailmentVerbalizer},
      {"multirc",
       {"passage", "question", "answer"},
       {
           "{passage}. Question: {question}? Is it {answer}? <MASK>.",
           "{passage}. Based on the previous passage, {question}? Is the correct answer {answer}? "
           "<MASK>.",
           "{passage}. Question: {question}? Is the correct answer {answer}? <MASK>.",
       },
       kYesNoVerbalizer},
      {"rte", {"premise", "hypothesis"}, kEntailmentPatterns, kEntailmentVerbalizer},
      {"wic",
       {"sentence1", "sentence2", "word"},
       {
           "\"{sentence1}” / “{sentence2}”. Similar sense of “{word}”? "
           "<MASK>.",
           "{sentence1} {sentence2} Does {word} have the same meaning in both sentences? <MASK>.",
       },
       kYesNoVerbalizer},
      {"wsc",
       {"sentence", "pronoun"},
       {
           "{sentence} The pronoun ‘*{pronoun}*’ refers to <MASK>.",
           "{sentence} In the previous sentence, the pronoun ‘*{pronoun}*’refers to "
           "<MASK>.",
           "{sentence} In the passage above, what does the pronoun‘*{pronoun}*’ refer "
           "to? Answer: <MASK>.",
       },
       {}},
  };
  return entries;
}

const TaskEntry& entry_for(const std::string& task) {
  for (const auto& e : catalog()) {
    if (task == e.task) return e;
  }
  throw ValidationError("unknown task \"" + task + "\"");
}

constexpr const char* kMask = "<MASK>";

std::size_t count_masks(const std::string& text) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(kMask); pos != std::string::npos;
       pos = text.find(kMask, pos + 1)) {
    ++count;
  }
  return count;
}

// 100 common first names, alphabetically sorted; the draw pool for null
// verbalizers. Fixed so seeded outputs never change across releases.
const std::array<std::string, 100> kFirstNames = {
    "Aaron",    "Abigail", "Adam",    "Alice",   "Amanda",  "Amber",    "Amy",      "Andrea",
    "Andrew",   "Angela",  "Anna",    "Anthony", "Ashley",  "Barbara",  "Benjamin", "Brandon",
    "Brian",    "Carl",    "Carol",   "Charles", "Chloe",   "Claire",   "Cynthia",  "Daniel",
    "David",    "Deborah", "Dennis",  "Diana",   "Donald",  "Donna",    "Dorothy",  "Douglas",
    "Dylan",    "Edward",  "Eleanor", "Emily",   "Emma",    "Eric",     "Ethan",    "Evelyn",
    "Frank",    "Gary",    "George",  "Grace",   "Gregory", "Hannah",   "Harold",   "Heather",
    "Helen",    "Henry",   "Isabella", "Jack",   "Jacob",   "James",    "Janet",    "Jason",
    "Jeffrey",  "Jennifer", "Jeremy", "Jessica", "John",    "Jonathan", "Joseph",   "Joshua",
    "Julia",    "Karen",   "Katherine", "Keith", "Kelly",   "Kenneth",  "Kevin",    "Kimberly",
    "Kyle",     "Laura",   "Lauren",  "Linda",   "Lisa",    "Logan",    "Margaret", "Maria",
    "Mark",     "Mary",    "Matthew", "Megan",   "Melissa", "Michael",  "Michelle", "Nancy",
    "Nathan",   "Nicole",  "Oliver",  "Olivia",  "Patricia", "Paul",    "Peter",    "Rachel",
    "Rebecca",  "Richard", "Robert",  "Samuel",
};

}  // namespace

std::vector<std::string> Pattern::slots() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::size_t pos = 0;
  while ((pos = text.find('{', pos)) != std::string::npos) {
    const std::size_t end = text.find('}', pos);
    if (end == std::string::npos) break;
    const std::string name = text.substr(pos + 1, end - pos - 1);
    if (seen.insert(name).second) out.push_back(name);
    pos = end + 1;
  }
  return out;
}

Verbalizer Verbalizer::mapping(std::vector<std::pair<std::string, std::string>> pairs) {
  if (pairs.empty()) throw ValidationError("verbalizer mapping must be non-empty");
  std::set<std::string> labels, tokens;
  for (const auto& [label, token] : pairs) {
    if (!labels.insert(label).second) {
      throw ValidationError("duplicate verbalizer label \"" + label + "\"");
    }
    if (!tokens.insert(token).second) {
      throw ValidationError("verbalizer tokens must be pairwise distinct (\"" + token + "\")");
    }
  }
  Verbalizer v;
  v.pairs_ = std::move(pairs);
  return v;
}

Verbalizer Verbalizer::identity() {
  Verbalizer v;
  v.identity_ = true;
  return v;
}

std::string Verbalizer::verbalize(const std::string& label) const {
  if (identity_) return label;
  for (const auto& [l, t] : pairs_) {
    if (l == label) return t;
  }
  throw ValidationError("unknown label \"" + label + "\"");
}

std::string Verbalizer::deverbalize(const std::string& token) const {
  if (identity_) return token;
  for (const auto& [l, t] : pairs_) {
    if (t == token) return l;
  }
  throw ValidationError("unknown token \"" + token + "\"");
}

std::vector<PVP> builtin_pvps(const std::string& task) {
  const TaskEntry& entry = entry_for(task);
  std::vector<PVP> out;
  for (std::size_t i = 0; i < entry.patterns.size(); ++i) {
    PVP pvp;
    pvp.pvp_id = task + "-" + std::to_string(i + 1);
    pvp.pattern.task = task;
    pvp.pattern.text = entry.patterns[i];
    if (entry.verbalizer.empty()) {
      pvp.verbalizer = Verbalizer::identity();
    } else {
      std::vector<std::pair<std::string, std::string>> pairs;
      for (const auto& [l, t] : entry.verbalizer) pairs.emplace_back(l, t);
      pvp.verbalizer = Verbalizer::mapping(std::move(pairs));
    }
    out.push_back(std::move(pvp));
  }
  return out;
}

PVP builtin_pvp(const std::string& task, const std::string& pvp_id) {
  for (auto& pvp : builtin_pvps(task)) {
    if (pvp.pvp_id == pvp_id) return pvp;
  }
  throw ValidationError("unknown pvp id \"" + pvp_id + "\" for task \"" + task + "\"");
}

std::vector<std::string> builtin_tasks() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.push_back(e.task);
  return out;
}

std::string render(const PVP& pvp, const std::map<std::string, std::string>& fields,
                   std::vector<std::string>* warnings) {
  const std::vector<std::string> slots = pvp.pattern.slots();
  for (const auto& slot : slots) {
    if (!fields.count(slot)) throw ValidationError("missing slot: " + slot);
  }
  if (warnings) {
    for (const auto& [name, _] : fields) {
      if (std::find(slots.begin(), slots.end(), name) == slots.end()) {
        warnings->push_back("ignoring unknown slot \"" + name + "\"");
      }
    }
  }

  std::string out;
  const std::string& tmpl = pvp.pattern.text;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    if (open == std::string::npos) {
      out.append(tmpl, pos, std::string::npos);
      break;
    }
    const std::size_t close = tmpl.find('}', open);
    if (close == std::string::npos) {
      out.append(tmpl, pos, std::string::npos);
      break;
    }
    out.append(tmpl, pos, open - pos);
    out += fields.at(tmpl.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
  return out;
}

Verbalizer null_verbalizer(const Verbalizer& v, std::uint64_t seed) {
  if (v.is_identity()) {
    throw ValidationError("no null verbalizer for free-form tasks");
  }
  std::set<std::string> original_tokens;
  for (const auto& [_, token] : v.pairs()) original_tokens.insert(token);

  SplitMix64 rng(seed);
  std::vector<std::size_t> order = sample_indices(kFirstNames.size(), kFirstNames.size(), rng);

  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t next = 0;
  for (const auto& [label, _] : v.pairs()) {
    while (next < order.size() && original_tokens.count(kFirstNames[order[next]])) ++next;
    if (next >= order.size()) throw ValidationError("name pool exhausted");
    pairs.emplace_back(label, kFirstNames[order[next]]);
    ++next;
  }
  return Verbalizer::mapping(std::move(pairs));
}

std::span<const std::string> first_name_pool() {
  return {kFirstNames.data(), kFirstNames.size()};
}

}  // namespace lcadv
