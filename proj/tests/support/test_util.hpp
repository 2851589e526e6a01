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

#ifndef SYNTHDOC_TESTS_TEST_UTIL_HPP_
#define SYNTHDOC_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "synthdoc/corpus.hpp"
#include "synthdoc/corpus_store.hpp"

namespace testutil {

inline std::filesystem::path data_dir() { return SYNTHDOC_TEST_DATA_DIR; }
inline std::filesystem::path minicorpus_dir() { return data_dir() / "minicorpus"; }

inline const synthdoc::corpus::StopwordList& stopwords() {
  static const auto list = synthdoc::corpus::StopwordList::load_file(SYNTHDOC_STOPWORDS_FILE);
  return list;
}

// The checked-in mini corpus, ingested with the CR source excluded.
inline synthdoc::corpus::IngestOptions mini_ingest_options() {
  const auto dir = minicorpus_dir();
  synthdoc::corpus::IngestOptions o;
  o.doc_files = synthdoc::corpus::expand_glob((dir / "docs" / "*").string());
  o.topics_file = (dir / "topics.txt").string();
  o.qrels_file = (dir / "qrels.txt").string();
  o.exclude_sources = {"CR"};
  o.stopwords_file = SYNTHDOC_STOPWORDS_FILE;
  return o;
}

// Fresh scratch directory removed on scope exit.
class TempDir {
public:
  explicit TempDir(const std::string& tag = "t") {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("synthdoc-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace testutil

#endif  // SYNTHDOC_TESTS_TEST_UTIL_HPP_
