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

#ifndef SYNTHDOC_PIPELINE_HPP_
#define SYNTHDOC_PIPELINE_HPP_

// Directory-level pipeline stages shared by the CLI and integration tests.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "synthdoc/corpus_store.hpp"
#include "synthdoc/experiment.hpp"
#include "synthdoc/synth.hpp"
#include "synthdoc/windowing.hpp"

namespace synthdoc::pipeline {

struct SufficiencyRow {
  int query_id = 0;
  std::size_t relevant_docs = 0;
  std::size_t body_chars = 0;
  bool sufficient = false;
};

/// Builds training sequences for `query_ids` (all topics when empty).
/// Writes `<out>/<id>.json` for sufficient queries and `<out>/sufficiency.tsv`.
std::vector<SufficiencyRow> extract_training(const corpus::Corpus& corpus, const std::vector<int>& query_ids,
                                             const windowing::WindowConfig& cfg, const std::filesystem::path& out);

std::filesystem::path training_file(const std::filesystem::path& dir, int query_id);
std::filesystem::path cloud_file(const std::filesystem::path& dir, std::string_view doc_ref);

/// Cloud of a relevant document: tokenized body minus stopwords.
synth::WordCloud relevant_cloud(const corpus::Document& doc, const corpus::StopwordList& stop,
                                std::size_t k = synth::kCloudTerms);

/// Cloud of a synthetic document's filtered terms.
synth::WordCloud synthetic_cloud(const synth::SyntheticDocument& doc, std::size_t k = synth::kCloudTerms);

/// Writes clouds for every relevant document of `query_id`. Returns the count.
std::size_t write_relevant_clouds(const corpus::Corpus& corpus, int query_id, const std::filesystem::path& dir,
                                  std::size_t k = synth::kCloudTerms);

struct AssembleResult {
  std::vector<experiment::AssessmentTask> tasks;
  experiment::RotationSchedule schedule;
  std::vector<std::string> excluded;  // one line per skipped query
};

/// Every query with a non-empty `synthetic_<id>.json` in `clouds_dir` and at
/// least three relevant documents with non-empty clouds becomes one task.
AssembleResult assemble(const std::filesystem::path& clouds_dir, const std::vector<corpus::QrelEntry>& qrels,
                        const std::vector<corpus::Topic>& topics, std::uint64_t seed);

/// Loads topics from a corpus topics.jsonl or a raw TREC topic file.
std::vector<corpus::Topic> load_topics_any(const std::filesystem::path& file);
/// Loads qrels from a corpus qrels.jsonl or a 4-column qrels file.
std::vector<corpus::QrelEntry> load_qrels_any(const std::filesystem::path& file);

}  // namespace synthdoc::pipeline

#endif  // SYNTHDOC_PIPELINE_HPP_
