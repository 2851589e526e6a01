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

#include "synthdoc/aggregate.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>

namespace synthdoc::aggregate {

QueryRankSummary average_rank(std::span<const experiment::UserResponse> valid_responses,
                              const experiment::AssessmentTask& task) {
  if (valid_responses.empty()) throw NoValidResponses("no valid responses for task " + task.task_id);
  QueryRankSummary s;
  s.query_id = task.query_id;
  s.task_id = task.task_id;
  long sum = 0;
  for (const auto& r : valid_responses) {
    if (r.task_id != task.task_id) throw std::invalid_argument("response for " + r.task_id + " in " + task.task_id);
    const auto rank = experiment::rank_of(r, task.synthetic_slot);
    if (!rank) throw std::invalid_argument("response from " + r.user_id + " does not rank the synthetic cloud");
    ++s.rank_counts[*rank];
    sum += *rank;
  }
  s.n_valid = static_cast<int>(valid_responses.size());
  s.avg_rank = static_cast<double>(sum) / s.n_valid;
  return s;
}

int bin_rank(double avg_rank) {
  if (!(avg_rank >= 1.0 && avg_rank <= 4.0)) throw std::invalid_argument("average rank outside [1, 4]");
  if (avg_rank <= 1.5) return 1;
  if (avg_rank <= 2.5) return 2;
  if (avg_rank <= 3.5) return 3;
  return 4;
}

RankHistogram histogram(std::span<const QueryRankSummary> summaries) {
  RankHistogram h;
  for (const auto& s : summaries) ++h.bins[static_cast<std::size_t>(bin_rank(s.avg_rank) - 1)];
  return h;
}

Report report(std::span<const QueryRankSummary> summaries, std::span<const experiment::AssessmentTask> tasks) {
  Report r;
  r.per_query.assign(summaries.begin(), summaries.end());
  std::sort(r.per_query.begin(), r.per_query.end(),
            [](const auto& a, const auto& b) { return a.query_id < b.query_id; });
  r.histogram = histogram(r.per_query);
  if (r.per_query.empty()) {
    r.warnings.push_back("no query summaries; report is empty");
    return r;
  }
  double total = 0;
  for (const auto& s : r.per_query) total += s.avg_rank;
  r.overall_mean = total / static_cast<double>(r.per_query.size());

  for (const auto& s : r.per_query) {
    if (bin_rank(s.avg_rank) != 4) continue;
    auto it = std::find_if(tasks.begin(), tasks.end(), [&](const auto& t) { return t.task_id == s.task_id; });
    if (it == tasks.end()) {
      r.warnings.push_back("no task for bottom-bin query " + std::to_string(s.query_id));
      continue;
    }
    const auto& cloud = it->cloud(it->synthetic_slot);
    DominanceNote note{s.query_id, s.avg_rank, cloud.empty() ? 0.0 : synth::dominance_ratio(cloud), {}};
    for (std::size_t i = 0; i < std::min<std::size_t>(2, cloud.entries.size()); ++i)
      note.top_terms.push_back(cloud.entries[i].term);
    r.dominance.push_back(std::move(note));
  }
  return r;
}

std::vector<QueryRankSummary> summarize_log(std::span<const experiment::AssessmentTask> tasks,
                                            std::span<const experiment::LoggedResponse> log,
                                            const experiment::ValidationConfig& cfg,
                                            std::vector<std::string>* excluded) {
  std::map<std::string, std::vector<experiment::UserResponse>> valid;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& entry : log) {
    const auto& r = entry.response;
    if (!seen.emplace(r.task_id, r.user_id).second) continue;
    auto it = std::find_if(tasks.begin(), tasks.end(), [&](const auto& t) { return t.task_id == r.task_id; });
    if (it == tasks.end()) continue;
    if (experiment::validate_response(*it, r, cfg).valid) valid[r.task_id].push_back(r);
  }
  std::vector<QueryRankSummary> out;
  for (const auto& t : tasks) {
    auto v = valid.find(t.task_id);
    if (v == valid.end()) {
      if (excluded) excluded->push_back(t.task_id);
      continue;
    }
    out.push_back(average_rank(v->second, t));
  }
  return out;
}

void write_report(const Report& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "per_query.csv");
    out << "query_id,task_id,n_valid,avg_rank,bin,rank1,rank2,rank3,rank4\n";
    for (const auto& s : r.per_query) {
      out << s.query_id << ',' << s.task_id << ',' << s.n_valid << ',' << std::setprecision(6) << s.avg_rank << ','
          << bin_rank(s.avg_rank);
      for (int k = 1; k <= 4; ++k) out << ',' << (s.rank_counts.contains(k) ? s.rank_counts.at(k) : 0);
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "histogram.csv");
    out << "bin,queries\n";
    for (int b = 1; b <= 4; ++b) out << b << ',' << r.histogram[b] << '\n';
  }
  {
    std::ofstream out(dir / "dominance.csv");
    out << "query_id,avg_rank,dominance_ratio,top_terms\n";
    for (const auto& d : r.dominance) {
      out << d.query_id << ',' << d.avg_rank << ',' << d.ratio << ',';
      for (std::size_t i = 0; i < d.top_terms.size(); ++i) out << (i ? " " : "") << d.top_terms[i];
      out << '\n';
    }
  }
  std::ofstream out(dir / "summary.txt");
  out << "queries summarized: " << r.per_query.size() << '\n';
  out << "overall mean rank of synthetic document: " << std::fixed << std::setprecision(2) << r.overall_mean << '\n';
  out << "binned ranks (1/2/3/4): " << r.histogram[1] << " / " << r.histogram[2] << " / " << r.histogram[3] << " / "
      << r.histogram[4] << '\n';
  for (const auto& d : r.dominance)
    out << "bottom-bin query " << d.query_id << ": avg " << d.avg_rank << ", dominance ratio " << d.ratio << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
}

}  // namespace synthdoc::aggregate
