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

#ifndef SYNTHDOC_CORPUS_STORE_HPP_
#define SYNTHDOC_CORPUS_STORE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthdoc/corpus.hpp"

namespace synthdoc::corpus {

// On-disk layout of an ingested corpus directory:
//   documents.jsonl   {"docno","source","text"} per line, ingestion order
//   vocabulary.tsv    term<TAB>frequency, sorted by term
//   topics.jsonl      {"id","title"}
//   qrels.jsonl       {"topic_id","docno","relevance"}
//   stopwords.txt     copy of the stopword list used at ingestion
struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocabulary;
  std::vector<Topic> topics;
  std::vector<QrelEntry> qrels;
  std::optional<StopwordList> stopwords;

  const Document* find(std::string_view docno) const;
  const Topic* topic(int id) const;

  void index();

private:
  std::map<std::string, std::size_t, std::less<>> by_docno_;
};

struct IngestOptions {
  std::vector<std::string> doc_files;
  std::string topics_file;
  std::string qrels_file;
  std::vector<std::string> exclude_sources;  // e.g. "CR"
  std::string stopwords_file;
};

struct IngestReport {
  std::size_t documents = 0;
  std::size_t excluded = 0;
  std::size_t empty_text = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> warnings;
};

/// Source tag for a document file: the upper-cased leading alphabetic run
/// of its file name ("fr940104.0.gz" -> "FR", "cr93e1" -> "CR").
std::string source_tag_for(const std::filesystem::path& file);

/// Parses all inputs, drops excluded sources and duplicate docnos, builds
/// the vocabulary.
Corpus ingest(const IngestOptions& opts, IngestReport* report = nullptr);

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);

void write_vocabulary(const Vocabulary& vocab, const std::filesystem::path& file);
Vocabulary read_vocabulary(const std::filesystem::path& file);

/// Expands a shell-style glob (`*`, `?`) in the final path component.
std::vector<std::string> expand_glob(const std::string& pattern);

}  // namespace synthdoc::corpus

#endif  // SYNTHDOC_CORPUS_STORE_HPP_
