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

#ifndef SYNTHDOC_EXPERIMENT_HPP_
#define SYNTHDOC_EXPERIMENT_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "synthdoc/corpus.hpp"
#include "synthdoc/synth.hpp"

namespace synthdoc::experiment {

/// Grid cells: A top-left, B top-right, C bottom-left, D bottom-right.
enum class Slot : int { A = 0, B = 1, C = 2, D = 3 };

inline constexpr std::array<Slot, 4> kSlots = {Slot::A, Slot::B, Slot::C, Slot::D};

char slot_label(Slot s);
std::optional<Slot> parse_slot(std::string_view label);
inline int slot_row(Slot s) { return static_cast<int>(s) / 2; }
inline int slot_col(Slot s) { return static_cast<int>(s) % 2; }

struct AssessmentTask {
  std::string task_id;
  int query_id = 0;
  std::string query_text;
  std::array<synth::WordCloud, 4> slots;
  Slot synthetic_slot = Slot::A;

  const synth::WordCloud& cloud(Slot s) const { return slots[static_cast<std::size_t>(s)]; }
  std::vector<std::string> relevant_docnos() const;
};

class RotationSchedule {
public:
  void assign(int query_id, Slot slot) { positions_[query_id] = slot; }
  std::optional<Slot> position(int query_id) const;
  std::array<int, 4> counts() const;
  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  const std::map<int, Slot>& positions() const { return positions_; }

private:
  std::map<int, Slot> positions_;
};

struct UserResponse {
  std::string task_id;
  std::string user_id;
  std::vector<std::string> ranking;  // labels, most relevant first
  bool understood = true;
  std::optional<std::string> comment;
  std::vector<std::string> salient_terms;
  double duration_seconds = 0;
};

enum class Failure { kMalformedRanking, kSalientTerms, kUnderTime };
std::string failure_name(Failure f);

struct ValidationResult {
  bool valid = true;
  std::vector<Failure> reasons;
};

struct ValidationConfig {
  double min_seconds = 20.0;
};

class InsufficientRelevant : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class TaskRejected : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Uniform draw of `n` distinct relevant docnos without replacement,
/// restricted to those accepted by `eligible` when given. Output keeps
/// qrels order. Throws InsufficientRelevant when fewer than `n` qualify.
std::vector<std::string> select_relevant_docs(const std::vector<corpus::QrelEntry>& qrels, int query_id,
                                              std::size_t n, std::uint64_t seed,
                                              const std::function<bool(const std::string&)>& eligible = {});

/// Cycles A, B, C, D over a seed-shuffled copy of `query_ids`.
RotationSchedule assign_positions(std::span<const int> query_ids, std::uint64_t seed);

/// Places the synthetic cloud at its scheduled slot and the three relevant
/// clouds, shuffled under `seed`, in the remaining slots.
AssessmentTask build_task(const corpus::Topic& query, std::span<const synth::WordCloud> relevant_clouds,
                          const synth::WordCloud& synthetic_cloud, const RotationSchedule& schedule,
                          std::uint64_t seed);

/// 1-based position of `slot` in the response ranking, if present.
std::optional<int> rank_of(const UserResponse& r, Slot slot);
bool is_permutation(const std::vector<std::string>& ranking);

/// Throws std::invalid_argument when the response names another task.
ValidationResult validate_response(const AssessmentTask& task, const UserResponse& response,
                                   const ValidationConfig& cfg = {});

// Serialisation. `to_json(task)` is the persisted form; `task_payload`
// is what assessors receive and omits the synthetic slot and doc refs.
nlohmann::json to_json(const AssessmentTask& task);
AssessmentTask task_from_json(const nlohmann::json& j);
nlohmann::json task_payload(const AssessmentTask& task);

nlohmann::json to_json(const UserResponse& r);

/// Field-level problems in a submitted response body.
class RequestError : public std::runtime_error {
public:
  explicit RequestError(std::vector<std::string> fields);
  const std::vector<std::string>& fields() const { return fields_; }

private:
  std::vector<std::string> fields_;
};

/// Structural parse of a response body; throws RequestError.
UserResponse response_from_json(const nlohmann::json& j);

void save_tasks(const std::vector<AssessmentTask>& tasks, const std::filesystem::path& file);
std::vector<AssessmentTask> load_tasks(const std::filesystem::path& file);

}  // namespace synthdoc::experiment

#endif  // SYNTHDOC_EXPERIMENT_HPP_
