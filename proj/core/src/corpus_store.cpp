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

#include "synthdoc/corpus_store.hpp"

#include <glob.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "json.hpp"

namespace synthdoc::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

const Document* Corpus::find(std::string_view docno) const {
  auto it = by_docno_.find(docno);
  return it == by_docno_.end() ? nullptr : &documents[it->second];
}

const Topic* Corpus::topic(int id) const {
  auto it = std::find_if(topics.begin(), topics.end(), [&](const Topic& t) { return t.id == id; });
  return it == topics.end() ? nullptr : &*it;
}

void Corpus::index() {
  by_docno_.clear();
  for (std::size_t i = 0; i < documents.size(); ++i) by_docno_.emplace(documents[i].docno, i);
}

std::string source_tag_for(const fs::path& file) {
  std::string tag;
  for (char c : file.filename().string()) {
    if (!std::isalpha(static_cast<unsigned char>(c))) break;
    tag.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return tag;
}

Corpus ingest(const IngestOptions& opts, IngestReport* report) {
  IngestReport local;
  IngestReport& rep = report ? *report : local;
  Corpus corpus;
  std::set<std::string, std::less<>> seen;
  std::set<std::string, std::less<>> excluded(opts.exclude_sources.begin(), opts.exclude_sources.end());

  for (const auto& file : opts.doc_files) {
    const auto tag = source_tag_for(file);
    auto in = open_input(file);
    TrecDocumentReader reader(*in, tag);
    while (auto doc = reader.next()) {
      if (excluded.contains(doc->source)) {
        ++rep.excluded;
        continue;
      }
      if (!seen.insert(doc->docno).second) {
        ++rep.duplicates;
        rep.warnings.push_back("duplicate docno " + doc->docno + " in " + file);
        continue;
      }
      if (doc->text.empty()) {
        ++rep.empty_text;
        rep.warnings.push_back("empty text for " + doc->docno);
      }
      corpus.vocabulary.merge([&] {
        Vocabulary v;
        for (const auto& t : tokenize(doc->text)) v.add(t);
        return v;
      }());
      corpus.documents.push_back(std::move(*doc));
    }
  }
  rep.documents = corpus.documents.size();
  if (corpus.vocabulary.empty()) rep.warnings.push_back("vocabulary is empty");

  if (!opts.topics_file.empty()) {
    auto in = open_input(opts.topics_file);
    corpus.topics = parse_topics(*in);
  }
  if (!opts.qrels_file.empty()) {
    auto in = open_input(opts.qrels_file);
    corpus.qrels = parse_qrels(*in);
  }
  if (!opts.stopwords_file.empty()) corpus.stopwords = StopwordList::load_file(opts.stopwords_file);
  corpus.index();
  return corpus;
}

void write_vocabulary(const Vocabulary& vocab, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& [term, n] : vocab.frequencies()) out << term << '\t' << n << '\n';
}

Vocabulary read_vocabulary(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  Vocabulary v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("malformed vocabulary line: " + line);
    v.add(line.substr(0, tab), std::stoull(line.substr(tab + 1)));
  }
  return v;
}

void save_corpus(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "documents.jsonl");
    for (const auto& d : corpus.documents)
      out << json{{"docno", d.docno}, {"source", d.source}, {"text", d.text}}.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
  write_vocabulary(corpus.vocabulary, dir / "vocabulary.tsv");
  {
    std::ofstream out(dir / "topics.jsonl");
    for (const auto& t : corpus.topics) out << json{{"id", t.id}, {"title", t.title}}.dump() << '\n';
  }
  {
    std::ofstream out(dir / "qrels.jsonl");
    for (const auto& q : corpus.qrels)
      out << json{{"topic_id", q.topic_id}, {"docno", q.docno}, {"relevance", q.relevance}}.dump() << '\n';
  }
  if (corpus.stopwords) {
    std::ofstream out(dir / "stopwords.txt");
    for (const auto& w : corpus.stopwords->words()) out << w << '\n';
  }
}

namespace {

template <typename F>
void for_each_jsonl(const fs::path& file, F&& f) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    f(json::parse(line));
  }
}

}  // namespace

Corpus load_corpus(const fs::path& dir) {
  Corpus c;
  for_each_jsonl(dir / "documents.jsonl", [&](const json& j) {
    c.documents.push_back(Document{j.at("docno"), j.at("source"), j.at("text")});
  });
  c.vocabulary = read_vocabulary(dir / "vocabulary.tsv");
  for_each_jsonl(dir / "topics.jsonl", [&](const json& j) { c.topics.push_back(Topic{j.at("id"), j.at("title")}); });
  for_each_jsonl(dir / "qrels.jsonl", [&](const json& j) {
    c.qrels.push_back(QrelEntry{j.at("topic_id"), j.at("docno"), j.at("relevance")});
  });
  if (fs::exists(dir / "stopwords.txt")) c.stopwords = StopwordList::load_file((dir / "stopwords.txt").string());
  c.index();
  return c;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<std::string> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace synthdoc::corpus
