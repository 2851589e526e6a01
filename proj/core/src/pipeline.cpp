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

#include "synthdoc/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace synthdoc::pipeline {

namespace fs = std::filesystem;

fs::path training_file(const fs::path& dir, int query_id) { return dir / (std::to_string(query_id) + ".json"); }

fs::path cloud_file(const fs::path& dir, std::string_view doc_ref) {
  return dir / (synth::cloud_file_stem(doc_ref) + ".json");
}

std::vector<SufficiencyRow> extract_training(const corpus::Corpus& corpus, const std::vector<int>& query_ids,
                                             const windowing::WindowConfig& cfg, const fs::path& out) {
  cfg.validate();
  fs::create_directories(out);
  std::vector<int> ids = query_ids;
  if (ids.empty())
    for (const auto& t : corpus.topics) ids.push_back(t.id);

  const corpus::StopwordList* stop = corpus.stopwords ? &*corpus.stopwords : nullptr;
  std::vector<SufficiencyRow> rows;
  for (int id : ids) {
    const auto* topic = corpus.topic(id);
    if (!topic) throw std::invalid_argument("unknown query id " + std::to_string(id));
    std::vector<corpus::Document> rel;
    for (const auto& docno : corpus::relevant_docnos(corpus.qrels, id))
      if (const auto* d = corpus.find(docno)) rel.push_back(*d);

    SufficiencyRow row{id, rel.size(), 0, false};
    try {
      const auto seq = windowing::build_training_sequence(*topic, rel, cfg, stop);
      row.body_chars = seq.body_chars();
      row.sufficient = windowing::check_sufficiency(seq, cfg);
      if (row.sufficient) windowing::save_training_sequence(seq, training_file(out, id));
    } catch (const windowing::NoTrainingData&) {
    }
    rows.push_back(row);
  }

  std::ofstream report(out / "sufficiency.tsv");
  report << "query_id\trelevant_docs\tchars\tstatus\n";
  for (const auto& r : rows)
    report << r.query_id << '\t' << r.relevant_docs << '\t' << r.body_chars << '\t'
           << (r.sufficient ? "pass" : "fail") << '\n';
  return rows;
}

synth::WordCloud relevant_cloud(const corpus::Document& doc, const corpus::StopwordList& stop, std::size_t k) {
  const auto terms = synth::content_terms(doc.text, stop);
  return synth::top_k_frequencies(terms, k, doc.docno);
}

synth::WordCloud synthetic_cloud(const synth::SyntheticDocument& doc, std::size_t k) {
  return synth::top_k_frequencies(doc.filtered_terms, k, doc.doc_ref());
}

std::size_t write_relevant_clouds(const corpus::Corpus& corpus, int query_id, const fs::path& dir, std::size_t k) {
  if (!corpus.stopwords) throw std::runtime_error("corpus has no stopword list");
  fs::create_directories(dir);
  std::size_t n = 0;
  for (const auto& docno : corpus::relevant_docnos(corpus.qrels, query_id)) {
    const auto* d = corpus.find(docno);
    if (!d) continue;
    synth::save_cloud(relevant_cloud(*d, *corpus.stopwords, k), cloud_file(dir, docno));
    ++n;
  }
  return n;
}

AssembleResult assemble(const fs::path& clouds_dir, const std::vector<corpus::QrelEntry>& qrels,
                        const std::vector<corpus::Topic>& topics, std::uint64_t seed) {
  AssembleResult result;
  struct Candidate {
    const corpus::Topic* topic;
    synth::WordCloud synthetic;
    std::vector<synth::WordCloud> relevant;
  };
  std::vector<Candidate> candidates;

  std::vector<const corpus::Topic*> ordered;
  for (const auto& t : topics) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });

  for (const auto* topic : ordered) {
    const auto syn_path = cloud_file(clouds_dir, synth::SyntheticDocument::synthetic_ref(topic->id));
    if (!fs::exists(syn_path)) continue;
    auto syn = synth::load_cloud(syn_path);
    if (syn.empty()) {
      result.excluded.push_back(std::to_string(topic->id) + "\tempty synthetic cloud");
      continue;
    }
    auto has_cloud = [&](const std::string& docno) {
      const auto p = cloud_file(clouds_dir, docno);
      return fs::exists(p) && !synth::load_cloud(p).empty();
    };
    try {
      const auto picked = experiment::select_relevant_docs(qrels, topic->id, 3, seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(topic->id)), has_cloud);
      Candidate c{topic, std::move(syn), {}};
      for (const auto& docno : picked) c.relevant.push_back(synth::load_cloud(cloud_file(clouds_dir, docno)));
      candidates.push_back(std::move(c));
    } catch (const experiment::InsufficientRelevant& e) {
      result.excluded.push_back(std::to_string(topic->id) + "\t" + e.what());
    }
  }

  std::vector<int> ids;
  for (const auto& c : candidates) ids.push_back(c.topic->id);
  result.schedule = experiment::assign_positions(ids, seed);
  for (const auto& c : candidates)
    result.tasks.push_back(experiment::build_task(*c.topic, c.relevant, c.synthetic, result.schedule, seed));
  return result;
}

std::vector<corpus::Topic> load_topics_any(const fs::path& file) {
  if (file.extension() == ".jsonl") {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::vector<corpus::Topic> out;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("id").get<int>(), j.at("title").get<std::string>()});
    }
    return out;
  }
  auto in = corpus::open_input(file.string());
  return corpus::parse_topics(*in);
}

std::vector<corpus::QrelEntry> load_qrels_any(const fs::path& file) {
  if (file.extension() == ".jsonl") {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::vector<corpus::QrelEntry> out;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("topic_id").get<int>(), j.at("docno").get<std::string>(), j.at("relevance").get<int>()});
    }
    return out;
  }
  auto in = corpus::open_input(file.string());
  return corpus::parse_qrels(*in);
}

}  // namespace synthdoc::pipeline
