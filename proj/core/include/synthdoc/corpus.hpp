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

#ifndef SYNTHDOC_CORPUS_HPP_
#define SYNTHDOC_CORPUS_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace synthdoc {

/// Raised by the TREC readers. `position()` is a byte offset for document
/// streams and a 1-based line number for qrels.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::uint64_t position)
      : std::runtime_error(what), position_(position) {}
  std::uint64_t position() const noexcept { return position_; }

private:
  std::uint64_t position_;
};

namespace corpus {

/// Reserved document separator; scrubbed from all ingested text.
inline constexpr char kEofChar = '\x03';

struct Document {
  std::string docno;
  std::string source;
  std::string text;
};

struct Topic {
  int id = 0;
  std::string title;
};

struct QrelEntry {
  int topic_id = 0;
  std::string docno;
  int relevance = 0;

  bool relevant() const { return relevance > 0; }
};

using Term = std::string;

/// Collection term statistics. Terms are tokenizer output.
class Vocabulary {
public:
  Vocabulary() = default;

  void add(const Term& term, std::uint64_t count = 1);
  void merge(const Vocabulary& other);

  bool contains(std::string_view term) const;
  std::uint64_t frequency(std::string_view term) const;
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return freq_.size(); }
  bool empty() const { return freq_.empty(); }
  const std::map<Term, std::uint64_t, std::less<>>& frequencies() const { return freq_; }

  bool operator==(const Vocabulary&) const = default;

private:
  std::map<Term, std::uint64_t, std::less<>> freq_;
  std::uint64_t total_ = 0;
};

class StopwordList {
public:
  /// Throws std::invalid_argument when the list is empty or has uppercase entries.
  explicit StopwordList(std::set<std::string, std::less<>> words);

  static StopwordList load(std::istream& in);
  static StopwordList load_file(const std::string& path);

  bool contains(std::string_view term) const { return words_.contains(term); }
  std::size_t size() const { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const { return words_; }

private:
  std::set<std::string, std::less<>> words_;
};

/// Streaming reader over a TREC SGML document file. Holds at most one
/// document in memory.
class TrecDocumentReader {
public:
  TrecDocumentReader(std::istream& in, std::string source_tag);

  /// Next document, or nullopt at a clean end of stream.
  std::optional<Document> next();

  std::uint64_t offset() const { return offset_; }

private:
  struct Tag {
    std::string name;  // upper-cased
    bool closing = false;
    std::uint64_t offset = 0;
  };

  int get();
  // Reads text up to the next '<', appending it to `sink` when non-null.
  // Returns false at end of stream.
  bool read_text(std::string* sink);
  bool read_tag(Tag& tag);

  std::istream& in_;
  std::string source_;
  std::uint64_t offset_ = 0;
};

std::vector<Document> parse_trec_documents(std::istream& in, const std::string& source_tag);
std::vector<Topic> parse_topics(std::istream& in);
std::vector<QrelEntry> parse_qrels(std::istream& in);

/// Lowercase, split on non-alphanumeric ASCII, drop empty tokens.
std::vector<Term> tokenize(std::string_view text);

Vocabulary build_vocabulary(const std::vector<Document>& docs);

/// Opens a file for reading; `.gz` files are transparently decompressed.
std::unique_ptr<std::istream> open_input(const std::string& path);

/// Docnos judged relevant (> 0) for `topic_id`, in qrels order.
std::vector<std::string> relevant_docnos(const std::vector<QrelEntry>& qrels, int topic_id);

/// Whitespace-collapsed, trimmed copy.
std::string normalize_whitespace(std::string_view s);

}  // namespace corpus
}  // namespace synthdoc

#endif  // SYNTHDOC_CORPUS_HPP_
