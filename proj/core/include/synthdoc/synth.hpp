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

#ifndef SYNTHDOC_SYNTH_HPP_
#define SYNTHDOC_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "synthdoc/corpus.hpp"

namespace synthdoc::synth {

inline constexpr std::size_t kCloudTerms = 150;

struct SyntheticDocument {
  int query_id = 0;
  std::string raw_text;
  std::vector<corpus::Term> filtered_terms;
  std::string checkpoint_id;
  std::uint64_t sample_seed = 0;
  double temperature = 1.0;

  std::string doc_ref() const { return synthetic_ref(query_id); }
  static std::string synthetic_ref(int query_id) { return "synthetic:" + std::to_string(query_id); }
};

struct CloudEntry {
  corpus::Term term;
  std::uint64_t freq = 0;
  double weight = 0;

  bool operator==(const CloudEntry&) const = default;
};

/// Top-k term frequency summary, sorted by (-freq, term).
struct WordCloud {
  std::string doc_ref;
  std::vector<CloudEntry> entries;

  bool empty() const { return entries.empty(); }
  bool contains(std::string_view term) const;
  bool operator==(const WordCloud&) const = default;
};

/// Tokenize, then drop stopwords and out-of-vocabulary tokens. Order kept.
std::vector<corpus::Term> filter_terms(std::string_view text, const corpus::Vocabulary& vocab,
                                       const corpus::StopwordList& stop);

/// Tokenize and drop stopwords only; used for relevant documents.
std::vector<corpus::Term> content_terms(std::string_view text, const corpus::StopwordList& stop);

WordCloud top_k_frequencies(std::span<const corpus::Term> terms, std::size_t k = kCloudTerms,
                            std::string doc_ref = {});

/// Top-entry frequency over the median entry frequency.
/// Throws std::invalid_argument on an empty cloud.
double dominance_ratio(const WordCloud& cloud);

SyntheticDocument make_synthetic_document(int query_id, std::string raw_text, const corpus::Vocabulary& vocab,
                                          const corpus::StopwordList& stop);

nlohmann::json to_json(const WordCloud& cloud);
WordCloud cloud_from_json(const nlohmann::json& j);
void save_cloud(const WordCloud& cloud, const std::filesystem::path& file);
WordCloud load_cloud(const std::filesystem::path& file);

nlohmann::json to_json(const SyntheticDocument& doc);
SyntheticDocument synthetic_from_json(const nlohmann::json& j);

/// File-system-safe name for a doc_ref ("synthetic:301" -> "synthetic_301").
std::string cloud_file_stem(std::string_view doc_ref);

}  // namespace synthdoc::synth

#endif  // SYNTHDOC_SYNTH_HPP_
