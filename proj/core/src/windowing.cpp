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

#include "synthdoc/windowing.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace synthdoc::windowing {

void WindowConfig::validate() const {
  if (radius < 1) throw std::invalid_argument("window radius must be >= 1");
  if (min_training_chars < 1) throw std::invalid_argument("min_training_chars must be >= 1");
}

std::size_t TrainingSequence::body_chars() const {
  return static_cast<std::size_t>(std::count_if(chars.begin(), chars.end(), [](char c) { return c != kEofChar; }));
}

CharVocab::CharVocab(std::vector<char> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2 || symbols_.back() != kEofChar)
    throw std::invalid_argument("char vocabulary needs >= 1 symbol plus the separator");
  index_.fill(-1);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto& slot = index_[static_cast<unsigned char>(symbols_[i])];
    if (slot >= 0) throw std::invalid_argument("duplicate symbol in char vocabulary");
    slot = static_cast<int>(i);
  }
}

int CharVocab::index(char c) const {
  const int i = index_[static_cast<unsigned char>(c)];
  if (i < 0) throw std::out_of_range("character not in vocabulary: " + std::to_string(static_cast<unsigned char>(c)));
  return i;
}

std::vector<int> CharVocab::encode(std::string_view text) const {
  std::vector<int> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(index(c));
  return out;
}

std::string CharVocab::decode(std::span<const int> indices) const {
  std::string out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(symbol(i));
  return out;
}

std::vector<TermSpan> extract_windows(std::span<const corpus::Term> doc_terms,
                                      const std::set<corpus::Term, std::less<>>& query_terms, int radius) {
  if (radius < 1) throw std::invalid_argument("window radius must be >= 1");
  std::vector<TermSpan> spans;
  const std::size_t n = doc_terms.size();
  const auto r = static_cast<std::size_t>(radius);
  for (std::size_t i = 0; i < n; ++i) {
    if (!query_terms.contains(doc_terms[i])) continue;
    const TermSpan w{i > r ? i - r : 0, std::min(n - 1, i + r)};
    // Matches are visited left to right, so only the last span can touch w.
    if (!spans.empty() && w.first <= spans.back().last + 1)
      spans.back().last = std::max(spans.back().last, w.last);
    else
      spans.push_back(w);
  }
  return spans;
}

std::set<corpus::Term, std::less<>> query_terms(const corpus::Topic& topic, const corpus::StopwordList* stop) {
  std::set<corpus::Term, std::less<>> terms;
  for (auto& t : corpus::tokenize(topic.title))
    if (!stop || !stop->contains(t)) terms.insert(std::move(t));
  return terms;
}

std::string render_windows(std::span<const corpus::Term> doc_terms, std::span<const TermSpan> spans) {
  std::string out;
  for (const auto& s : spans) {
    for (std::size_t i = s.first; i <= s.last; ++i) {
      if (!out.empty()) out.push_back(' ');
      out += doc_terms[i];
    }
  }
  return out;
}

TrainingSequence build_training_sequence(const corpus::Topic& query, std::span<const corpus::Document> rel_docs,
                                         const WindowConfig& cfg, const corpus::StopwordList* stop) {
  cfg.validate();
  const auto qterms = query_terms(query, stop);
  TrainingSequence seq;
  seq.query_id = query.id;
  for (const auto& doc : rel_docs) {
    const auto terms = corpus::tokenize(doc.text);
    const auto spans = extract_windows(terms, qterms, cfg.radius);
    auto text = render_windows(terms, spans);
    if (text.empty()) continue;
    const auto begin = seq.chars.size();
    seq.chars += text;
    seq.doc_spans.emplace_back(begin, seq.chars.size());
    seq.chars.push_back(kEofChar);
    seq.docnos.push_back(doc.docno);
  }
  if (seq.doc_spans.empty()) throw NoTrainingData(query.id);
  return seq;
}

bool check_sufficiency(const TrainingSequence& seq, const WindowConfig& cfg) {
  return seq.body_chars() >= cfg.min_training_chars;
}

CharVocab build_char_vocab(const TrainingSequence& seq) {
  if (seq.chars.empty()) throw std::invalid_argument("cannot build a char vocabulary from an empty sequence");
  std::array<bool, 256> present{};
  for (char c : seq.chars) present[static_cast<unsigned char>(c)] = true;
  std::vector<char> symbols;
  for (int b = 0; b < 256; ++b)
    if (present[b] && static_cast<char>(b) != kEofChar) symbols.push_back(static_cast<char>(b));
  symbols.push_back(kEofChar);
  return CharVocab(std::move(symbols));
}

void save_training_sequence(const TrainingSequence& seq, const std::filesystem::path& file) {
  nlohmann::json spans = nlohmann::json::array();
  for (auto [b, e] : seq.doc_spans) spans.push_back({b, e});
  const nlohmann::json j{{"query_id", seq.query_id}, {"docnos", seq.docnos}, {"doc_spans", spans}, {"chars", seq.chars}};
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump() << '\n';
}

TrainingSequence load_training_sequence(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  const auto j = nlohmann::json::parse(in);
  TrainingSequence seq;
  seq.query_id = j.at("query_id");
  seq.chars = j.at("chars");
  seq.docnos = j.at("docnos").get<std::vector<std::string>>();
  for (const auto& s : j.at("doc_spans")) seq.doc_spans.emplace_back(s.at(0), s.at(1));
  for (auto [b, e] : seq.doc_spans)
    if (e >= seq.chars.size() || b > e || seq.chars[e] != kEofChar)
      throw std::runtime_error("corrupt training sequence: bad span in " + file.string());
  return seq;
}

}  // namespace synthdoc::windowing
