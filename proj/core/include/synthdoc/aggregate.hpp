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

#ifndef SYNTHDOC_AGGREGATE_HPP_
#define SYNTHDOC_AGGREGATE_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "synthdoc/assessment_service.hpp"
#include "synthdoc/experiment.hpp"

namespace synthdoc::aggregate {

struct QueryRankSummary {
  int query_id = 0;
  std::string task_id;
  int n_valid = 0;
  double avg_rank = 0;
  std::map<int, int> rank_counts;  // rank (1..4) -> responses
};

struct RankHistogram {
  std::array<int, 4> bins{};  // bins[0] is rank bin 1

  int total() const { return bins[0] + bins[1] + bins[2] + bins[3]; }
  int operator[](int bin) const { return bins.at(static_cast<std::size_t>(bin - 1)); }
};

class NoValidResponses : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mean 1-based rank given to the task's synthetic cloud. Every response
/// must be for `task` and carry a complete ranking.
QueryRankSummary average_rank(std::span<const experiment::UserResponse> valid_responses,
                              const experiment::AssessmentTask& task);

/// 1 for [1, 1.5], 2 for (1.5, 2.5], 3 for (2.5, 3.5], 4 for (3.5, 4].
/// Throws std::invalid_argument outside [1, 4].
int bin_rank(double avg_rank);

RankHistogram histogram(std::span<const QueryRankSummary> summaries);

struct DominanceNote {
  int query_id = 0;
  double avg_rank = 0;
  double ratio = 0;
  std::vector<std::string> top_terms;
};

struct Report {
  std::vector<QueryRankSummary> per_query;
  RankHistogram histogram;
  double overall_mean = 0;  // unweighted over queries
  std::vector<DominanceNote> dominance;  // queries in the bottom bin
  std::vector<std::string> warnings;
};

/// `tasks` supplies synthetic clouds for the dominance diagnostics; may be empty.
Report report(std::span<const QueryRankSummary> summaries, std::span<const experiment::AssessmentTask> tasks = {});

/// Replays a response log: first response per (task, user) wins, each is
/// re-validated against its task, and valid ones are averaged per task.
/// Tasks without valid responses are listed in `excluded`.
std::vector<QueryRankSummary> summarize_log(std::span<const experiment::AssessmentTask> tasks,
                                            std::span<const experiment::LoggedResponse> log,
                                            const experiment::ValidationConfig& cfg,
                                            std::vector<std::string>* excluded = nullptr);

/// Writes per_query.csv, histogram.csv, dominance.csv and summary.txt.
void write_report(const Report& r, const std::filesystem::path& dir);

}  // namespace synthdoc::aggregate

#endif  // SYNTHDOC_AGGREGATE_HPP_
