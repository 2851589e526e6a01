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

#include "synthdoc/synth.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <stdexcept>

namespace synthdoc::synth {

using nlohmann::json;

bool WordCloud::contains(std::string_view term) const {
  return std::any_of(entries.begin(), entries.end(), [&](const CloudEntry& e) { return e.term == term; });
}

std::vector<corpus::Term> filter_terms(std::string_view text, const corpus::Vocabulary& vocab,
                                       const corpus::StopwordList& stop) {
  auto terms = corpus::tokenize(text);
  std::erase_if(terms, [&](const corpus::Term& t) { return stop.contains(t) || !vocab.contains(t); });
  return terms;
}

std::vector<corpus::Term> content_terms(std::string_view text, const corpus::StopwordList& stop) {
  auto terms = corpus::tokenize(text);
  std::erase_if(terms, [&](const corpus::Term& t) { return stop.contains(t); });
  return terms;
}

WordCloud top_k_frequencies(std::span<const corpus::Term> terms, std::size_t k, std::string doc_ref) {
  std::map<std::string_view, std::uint64_t> counts;
  for (const auto& t : terms) ++counts[t];

  std::vector<std::pair<std::string_view, std::uint64_t>> ranked(counts.begin(), counts.end());
  const auto keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });

  WordCloud cloud;
  cloud.doc_ref = std::move(doc_ref);
  if (keep == 0) return cloud;
  const auto top = static_cast<double>(ranked.front().second);
  for (std::size_t i = 0; i < keep; ++i)
    cloud.entries.push_back({std::string(ranked[i].first), ranked[i].second, static_cast<double>(ranked[i].second) / top});
  return cloud;
}

double dominance_ratio(const WordCloud& cloud) {
  if (cloud.empty()) throw std::invalid_argument("dominance ratio of an empty cloud");
  std::vector<double> f;
  for (const auto& e : cloud.entries) f.push_back(static_cast<double>(e.freq));
  std::sort(f.begin(), f.end());
  const auto n = f.size();
  const double median = n % 2 ? f[n / 2] : 0.5 * (f[n / 2 - 1] + f[n / 2]);
  return f.back() / median;
}

SyntheticDocument make_synthetic_document(int query_id, std::string raw_text, const corpus::Vocabulary& vocab,
                                          const corpus::StopwordList& stop) {
  SyntheticDocument d;
  d.query_id = query_id;
  d.filtered_terms = filter_terms(raw_text, vocab, stop);
  d.raw_text = std::move(raw_text);
  return d;
}

json to_json(const WordCloud& cloud) {
  json entries = json::array();
  for (const auto& e : cloud.entries) entries.push_back({{"term", e.term}, {"freq", e.freq}, {"weight", e.weight}});
  return {{"doc_ref", cloud.doc_ref}, {"entries", entries}};
}

WordCloud cloud_from_json(const json& j) {
  WordCloud c;
  c.doc_ref = j.at("doc_ref").get<std::string>();
  for (const auto& e : j.at("entries"))
    c.entries.push_back({e.at("term").get<std::string>(), e.at("freq").get<std::uint64_t>(), e.at("weight").get<double>()});
  return c;
}

void save_cloud(const WordCloud& cloud, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << to_json(cloud).dump(2) << '\n';
}

WordCloud load_cloud(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return cloud_from_json(json::parse(in));
}

json to_json(const SyntheticDocument& doc) {
  return {{"query_id", doc.query_id},
          {"doc_ref", doc.doc_ref()},
          {"raw_text", doc.raw_text},
          {"filtered_terms", doc.filtered_terms},
          {"provenance", {{"checkpoint", doc.checkpoint_id}, {"seed", doc.sample_seed}, {"temperature", doc.temperature}}}};
}

SyntheticDocument synthetic_from_json(const json& j) {
  SyntheticDocument d;
  d.query_id = j.at("query_id");
  d.raw_text = j.at("raw_text");
  d.filtered_terms = j.at("filtered_terms").get<std::vector<std::string>>();
  const auto& p = j.at("provenance");
  d.checkpoint_id = p.at("checkpoint");
  d.sample_seed = p.at("seed");
  d.temperature = p.at("temperature");
  return d;
}

std::string cloud_file_stem(std::string_view doc_ref) {
  std::string s(doc_ref);
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  return s;
}

}  // namespace synthdoc::synth
