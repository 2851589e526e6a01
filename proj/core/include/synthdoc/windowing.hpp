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

#ifndef SYNTHDOC_WINDOWING_HPP_
#define SYNTHDOC_WINDOWING_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "synthdoc/corpus.hpp"

namespace synthdoc::windowing {

using corpus::kEofChar;

struct WindowConfig {
  int radius = 30;
  std::size_t min_training_chars = 2000;

  void validate() const;
};

/// Closed interval of token positions [first, last].
struct TermSpan {
  std::size_t first = 0;
  std::size_t last = 0;

  bool operator==(const TermSpan&) const = default;
};

struct TrainingSequence {
  int query_id = 0;
  /// Text with every document body followed by exactly one kEofChar.
  std::string chars;
  /// Half-open [begin, end) body ranges; chars[end] is the separator.
  std::vector<std::pair<std::size_t, std::size_t>> doc_spans;
  std::vector<std::string> docnos;

  std::size_t body_chars() const;
};

class NoTrainingData : public std::runtime_error {
public:
  explicit NoTrainingData(int query_id)
      : std::runtime_error("no training data for query " + std::to_string(query_id)) {}
};

/// Symbol table over the characters of a training sequence. Symbols are
/// sorted by byte value with the separator appended last.
class CharVocab {
public:
  explicit CharVocab(std::vector<char> symbols);  // must end with kEofChar

  std::size_t size() const { return symbols_.size(); }
  int eof_index() const { return static_cast<int>(symbols_.size()) - 1; }
  char symbol(int index) const { return symbols_.at(static_cast<std::size_t>(index)); }
  bool contains(char c) const { return index_[static_cast<unsigned char>(c)] >= 0; }
  /// Throws std::out_of_range for characters outside the vocabulary.
  int index(char c) const;
  const std::vector<char>& symbols() const { return symbols_; }

  std::vector<int> encode(std::string_view text) const;
  std::string decode(std::span<const int> indices) const;

  bool operator==(const CharVocab& o) const { return symbols_ == o.symbols_; }

private:
  std::vector<char> symbols_;
  std::array<int, 256> index_;
};

std::vector<TermSpan> extract_windows(std::span<const corpus::Term> doc_terms,
                                      const std::set<corpus::Term, std::less<>>& query_terms, int radius);

/// Tokenized title minus stopwords.
std::set<corpus::Term, std::less<>> query_terms(const corpus::Topic& topic, const corpus::StopwordList* stop);

/// Window spans of one document joined by single spaces; empty if no match.
std::string render_windows(std::span<const corpus::Term> doc_terms, std::span<const TermSpan> spans);

/// Throws NoTrainingData when no document contributes a window.
TrainingSequence build_training_sequence(const corpus::Topic& query, std::span<const corpus::Document> rel_docs,
                                         const WindowConfig& cfg, const corpus::StopwordList* stop = nullptr);

bool check_sufficiency(const TrainingSequence& seq, const WindowConfig& cfg);

CharVocab build_char_vocab(const TrainingSequence& seq);

void save_training_sequence(const TrainingSequence& seq, const std::filesystem::path& file);
TrainingSequence load_training_sequence(const std::filesystem::path& file);

}  // namespace synthdoc::windowing

#endif  // SYNTHDOC_WINDOWING_HPP_
