// Copyright 2026 The synthdoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthdoc/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

namespace synthdoc::experiment {

using nlohmann::json;

char slot_label(Slot s) { return static_cast<char>('A' + static_cast<int>(s)); }

std::optional<Slot> parse_slot(std::string_view label) {
  if (label.size() != 1) return std::nullopt;
  const char c = static_cast<char>(label[0] & ~0x20);  // upper-case ASCII letters
  if (c < 'A' || c > 'D') return std::nullopt;
  return static_cast<Slot>(c - 'A');
}

std::vector<std::string> AssessmentTask::relevant_docnos() const {
  std::vector<std::string> out;
  for (Slot s : kSlots)
    if (s != synthetic_slot) out.push_back(cloud(s).doc_ref);
  return out;
}

std::optional<Slot> RotationSchedule::position(int query_id) const {
  auto it = positions_.find(query_id);
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

std::array<int, 4> RotationSchedule::counts() const {
  std::array<int, 4> c{};
  for (const auto& [q, s] : positions_) ++c[static_cast<std::size_t>(s)];
  return c;
}

std::string failure_name(Failure f) {
  switch (f) {
    case Failure::kMalformedRanking: return "malformed-ranking";
    case Failure::kSalientTerms: return "salient-terms";
    case Failure::kUnderTime: return "under-time";
  }
  return "unknown";
}

std::vector<std::string> select_relevant_docs(const std::vector<corpus::QrelEntry>& qrels, int query_id,
                                              std::size_t n, std::uint64_t seed,
                                              const std::function<bool(const std::string&)>& eligible) {
  auto pool = corpus::relevant_docnos(qrels, query_id);
  if (eligible) std::erase_if(pool, [&](const std::string& d) { return !eligible(d); });
  if (pool.size() < n)
    throw InsufficientRelevant("query " + std::to_string(query_id) + " has " + std::to_string(pool.size()) +
                               " eligible relevant documents, need " + std::to_string(n));
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  std::sample(pool.begin(), pool.end(), std::back_inserter(out), static_cast<std::ptrdiff_t>(n), rng);
  return out;
}

RotationSchedule assign_positions(std::span<const int> query_ids, std::uint64_t seed) {
  std::vector<int> order(query_ids.begin(), query_ids.end());
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  RotationSchedule schedule;
  for (std::size_t k = 0; k < order.size(); ++k) schedule.assign(order[k], kSlots[k % 4]);
  return schedule;
}

AssessmentTask build_task(const corpus::Topic& query, std::span<const synth::WordCloud> relevant_clouds,
                          const synth::WordCloud& synthetic_cloud, const RotationSchedule& schedule,
                          std::uint64_t seed) {
  if (relevant_clouds.size() != 3) throw TaskRejected("a task needs exactly 3 relevant clouds");
  if (synthetic_cloud.empty())
    throw TaskRejected("synthetic cloud for query " + std::to_string(query.id) + " is empty");
  std::set<std::string> refs;
  for (const auto& c : relevant_clouds) {
    if (c.empty()) throw TaskRejected("relevant cloud " + c.doc_ref + " is empty");
    refs.insert(c.doc_ref);
  }
  if (refs.size() != 3) throw TaskRejected("relevant clouds must come from 3 distinct documents");
  const auto slot = schedule.position(query.id);
  if (!slot) throw TaskRejected("query " + std::to_string(query.id) + " has no scheduled position");

  std::vector<std::size_t> order = {0, 1, 2};
  std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(query.id)};
  std::mt19937_64 rng(sseq);
  std::shuffle(order.begin(), order.end(), rng);

  AssessmentTask task;
  task.task_id = "q" + std::to_string(query.id);
  task.query_id = query.id;
  task.query_text = query.title;
  task.synthetic_slot = *slot;
  std::size_t next = 0;
  for (Slot s : kSlots)
    task.slots[static_cast<std::size_t>(s)] = s == *slot ? synthetic_cloud : relevant_clouds[order[next++]];
  return task;
}

bool is_permutation(const std::vector<std::string>& ranking) {
  if (ranking.size() != 4) return false;
  std::array<bool, 4> seen{};
  for (const auto& label : ranking) {
    auto s = parse_slot(label);
    if (!s || seen[static_cast<std::size_t>(*s)]) return false;
    seen[static_cast<std::size_t>(*s)] = true;
  }
  return true;
}

std::optional<int> rank_of(const UserResponse& r, Slot slot) {
  for (std::size_t i = 0; i < r.ranking.size(); ++i)
    if (parse_slot(r.ranking[i]) == slot) return static_cast<int>(i) + 1;
  return std::nullopt;
}

ValidationResult validate_response(const AssessmentTask& task, const UserResponse& response,
                                   const ValidationConfig& cfg) {
  if (response.task_id != task.task_id)
    throw std::invalid_argument("response for " + response.task_id + " checked against task " + task.task_id);
  ValidationResult result;
  const bool permutation = is_permutation(response.ranking);
  if (!permutation) result.reasons.push_back(Failure::kMalformedRanking);

  bool salient_ok = response.salient_terms.size() == 2 && permutation;
  if (salient_ok) {
    const auto& top = task.cloud(*parse_slot(response.ranking.front()));
    for (const auto& typed : response.salient_terms) {
      const auto tokens = corpus::tokenize(typed);
      if (tokens.empty() || !std::all_of(tokens.begin(), tokens.end(), [&](const auto& t) { return top.contains(t); }))
        salient_ok = false;
    }
  }
  if (!salient_ok) result.reasons.push_back(Failure::kSalientTerms);
  if (!(response.duration_seconds >= cfg.min_seconds)) result.reasons.push_back(Failure::kUnderTime);
  result.valid = result.reasons.empty();
  return result;
}

json to_json(const AssessmentTask& task) {
  json slots = json::object();
  for (Slot s : kSlots) slots[std::string(1, slot_label(s))] = synth::to_json(task.cloud(s));
  return {{"task_id", task.task_id},
          {"query_id", task.query_id},
          {"query_text", task.query_text},
          {"synthetic_slot", std::string(1, slot_label(task.synthetic_slot))},
          {"slots", slots}};
}

AssessmentTask task_from_json(const json& j) {
  AssessmentTask t;
  t.task_id = j.at("task_id");
  t.query_id = j.at("query_id");
  t.query_text = j.at("query_text");
  auto s = parse_slot(j.at("synthetic_slot").get<std::string>());
  if (!s) throw std::runtime_error("task " + t.task_id + " has a bad synthetic_slot");
  t.synthetic_slot = *s;
  for (Slot slot : kSlots)
    t.slots[static_cast<std::size_t>(slot)] = synth::cloud_from_json(j.at("slots").at(std::string(1, slot_label(slot))));
  return t;
}

json task_payload(const AssessmentTask& task) {
  json clouds = json::object();
  for (Slot s : kSlots) {
    json entries = json::array();
    for (const auto& e : task.cloud(s).entries)
      entries.push_back({{"term", e.term}, {"freq", e.freq}, {"weight", e.weight}});
    clouds[std::string(1, slot_label(s))] = {
        {"label", std::string(1, slot_label(s))}, {"row", slot_row(s)}, {"col", slot_col(s)}, {"entries", entries}};
  }
  return {{"task_id", task.task_id}, {"query_id", task.query_id}, {"query_text", task.query_text}, {"clouds", clouds}};
}

json to_json(const UserResponse& r) {
  json j{{"task_id", r.task_id},
         {"user_id", r.user_id},
         {"ranking", r.ranking},
         {"understood", r.understood},
         {"salient_terms", r.salient_terms},
         {"duration_seconds", r.duration_seconds}};
  j["comment"] = r.comment ? json(*r.comment) : json(nullptr);
  return j;
}

RequestError::RequestError(std::vector<std::string> fields)
    : std::runtime_error([&] {
        std::string msg = "malformed response:";
        for (const auto& f : fields) msg += " " + f + ";";
        return msg;
      }()),
      fields_(std::move(fields)) {}

UserResponse response_from_json(const json& j) {
  std::vector<std::string> problems;
  UserResponse r;
  if (!j.is_object()) throw RequestError({"body: expected a JSON object"});

  auto string_field = [&](const char* name, std::string& out) {
    if (!j.contains(name)) problems.push_back(std::string(name) + ": missing");
    else if (!j[name].is_string() || j[name].get<std::string>().empty())
      problems.push_back(std::string(name) + ": expected non-empty string");
    else out = j[name].get<std::string>();
  };
  auto string_array = [&](const char* name, std::vector<std::string>& out) {
    if (!j.contains(name)) { problems.push_back(std::string(name) + ": missing"); return; }
    const auto& a = j[name];
    // A ranking may also be typed as "A,D,B,C".
    if (a.is_string()) {
      std::string cur;
      for (char c : a.get<std::string>()) {
        if (c == ',' || c == ' ') { if (!cur.empty()) out.push_back(cur); cur.clear(); }
        else cur.push_back(c);
      }
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    if (!a.is_array() || !std::all_of(a.begin(), a.end(), [](const json& e) { return e.is_string(); })) {
      problems.push_back(std::string(name) + ": expected array of strings");
      return;
    }
    out = a.get<std::vector<std::string>>();
  };

  string_field("task_id", r.task_id);
  string_field("user_id", r.user_id);
  string_array("ranking", r.ranking);
  string_array("salient_terms", r.salient_terms);
  if (!j.contains("understood") || !j["understood"].is_boolean()) problems.push_back("understood: expected boolean");
  else r.understood = j["understood"].get<bool>();
  if (!j.contains("duration_seconds") || !j["duration_seconds"].is_number())
    problems.push_back("duration_seconds: expected number");
  else r.duration_seconds = j["duration_seconds"].get<double>();
  if (j.contains("comment") && !j["comment"].is_null()) {
    if (!j["comment"].is_string()) problems.push_back("comment: expected string or null");
    else r.comment = j["comment"].get<std::string>();
  }
  if (!problems.empty()) throw RequestError(std::move(problems));
  return r;
}

void save_tasks(const std::vector<AssessmentTask>& tasks, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& t : tasks) out << to_json(t).dump() << '\n';
}

std::vector<AssessmentTask> load_tasks(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<AssessmentTask> tasks;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) tasks.push_back(task_from_json(json::parse(line)));
  return tasks;
}

}  // namespace synthdoc::experiment
