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

// synthdoc command line: one subcommand per pipeline stage.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <pthread.h>

#include "CLI11.hpp"
#include "synthdoc/aggregate.hpp"
#include "synthdoc/assessment_service.hpp"
#include "synthdoc/lstm/checkpoint.hpp"
#include "synthdoc/lstm/gradcheck.hpp"
#include "synthdoc/lstm/sample.hpp"
#include "synthdoc/pipeline.hpp"

using namespace synthdoc;
namespace fs = std::filesystem;

namespace {

std::string default_stopwords() {
  if (const char* env = std::getenv("SYNTHDOC_STOPWORDS")) return env;
  for (const char* p : {SYNTHDOC_INSTALLED_STOPWORDS, SYNTHDOC_SOURCE_STOPWORDS})
    if (fs::exists(p)) return p;
  throw std::runtime_error("no stopword list found; pass --stopwords or set SYNTHDOC_STOPWORDS");
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

// ------------------------------------------------------------------ ingest
struct IngestArgs {
  std::vector<std::string> docs;
  std::string topics, qrels, out, stopwords;
  std::vector<std::string> exclude;
};

int run_ingest(const IngestArgs& a) {
  corpus::IngestOptions o;
  for (const auto& pattern : a.docs) {
    auto files = corpus::expand_glob(pattern);
    if (files.empty()) throw std::runtime_error("no files match " + pattern);
    o.doc_files.insert(o.doc_files.end(), files.begin(), files.end());
  }
  o.topics_file = a.topics;
  o.qrels_file = a.qrels;
  o.exclude_sources = a.exclude;
  o.stopwords_file = a.stopwords.empty() ? default_stopwords() : a.stopwords;
  corpus::IngestReport rep;
  const auto c = corpus::ingest(o, &rep);
  corpus::save_corpus(c, a.out);
  std::cout << "documents " << rep.documents << ", excluded " << rep.excluded << ", empty text " << rep.empty_text
            << ", duplicates " << rep.duplicates << ", topics " << c.topics.size() << ", qrels " << c.qrels.size()
            << ", vocabulary " << c.vocabulary.size() << "\n";
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

// ----------------------------------------------------------------- extract
struct ExtractArgs {
  std::string corpus, query = "all", out;
  int radius = 30;
  std::size_t min_chars = 2000;
};

int run_extract(const ExtractArgs& a) {
  const auto c = corpus::load_corpus(a.corpus);
  std::vector<int> ids;
  if (a.query != "all") ids.push_back(std::stoi(a.query));
  windowing::WindowConfig cfg;
  cfg.radius = a.radius;
  cfg.min_training_chars = a.min_chars;
  const auto rows = pipeline::extract_training(c, ids, cfg, a.out);
  int pass = 0;
  for (const auto& r : rows) {
    std::cout << r.query_id << "\t" << r.relevant_docs << " docs\t" << r.body_chars << " chars\t"
              << (r.sufficient ? "pass" : "fail") << "\n";
    pass += r.sufficient ? 1 : 0;
  }
  std::cout << pass << "/" << rows.size() << " queries have enough training text\n";
  return 0;
}

// ------------------------------------------------------------------- train
struct TrainArgs {
  std::string seq, out, resume;
  lstm::TrainConfig cfg;
  std::int64_t checkpoint_every = 0;
  std::int64_t max_steps = -1;
  int log_every = 10;
  bool epochs_given = false;
};

int run_train(TrainArgs a) {
  const auto seq = windowing::load_training_sequence(a.seq);
  if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
  std::optional<lstm::Trainer> trainer;
  if (!a.resume.empty()) {
    // The stored budget stands unless --epochs was given.
    trainer.emplace(lstm::resume_trainer(a.resume, seq, a.epochs_given ? std::optional<int>(a.cfg.epochs) : std::nullopt));
    std::cerr << "resumed at step " << trainer->steps_done() << "\n";
  } else {
    trainer.emplace(seq, a.cfg);
  }
  std::cerr << "vocab " << trainer->vocab().size() << ", " << trainer->data().size() << " chars, "
            << trainer->schedule().streams() << " streams, " << trainer->schedule().windows_per_epoch()
            << " windows/epoch, " << trainer->total_steps() << " steps\n";
  trainer->run(a.max_steps, [&](const lstm::TrainProgress& p) {
    if (a.log_every > 0 && p.step % a.log_every == 0)
      std::cerr << "step " << p.step << " epoch " << p.epoch << " loss " << p.loss << "\n";
    if (a.checkpoint_every > 0 && p.step % a.checkpoint_every == 0) lstm::save_checkpoint(*trainer, a.out);
  });
  lstm::save_checkpoint(*trainer, a.out);
  const auto& h = trainer->loss_history();
  std::cout << "trained " << trainer->steps_done() << " steps; batch loss " << (h.empty() ? 0.0 : h.front()) << " -> "
            << (h.empty() ? 0.0 : h.back()) << "; checkpoint " << a.out << "\n";
  return 0;
}

// ------------------------------------------------------------------ sample
struct SampleArgs {
  std::string ckpt, out, corpus;
  lstm::SampleConfig cfg;
  int query = 0;
};

int run_sample(const SampleArgs& a) {
  const auto model = lstm::load_model(a.ckpt);
  const auto text = lstm::sample(model.params, model.vocab, a.cfg);
  write_text(a.out, text);
  std::cout << "sampled " << text.size() << " chars to " << a.out << "\n";
  if (!a.corpus.empty()) {
    // With a corpus the filtered synthetic document is written alongside.
    if (a.query <= 0) throw CLI::ValidationError("--query", "required with --corpus");
    const auto c = corpus::load_corpus(a.corpus);
    if (!c.stopwords) throw std::runtime_error("corpus has no stopword list");
    auto doc = synth::make_synthetic_document(a.query, text, c.vocabulary, *c.stopwords);
    doc.checkpoint_id = fs::path(a.ckpt).filename().string();
    doc.sample_seed = a.cfg.rng_seed;
    doc.temperature = a.cfg.temperature;
    const auto doc_path = fs::path(a.out).replace_extension(".json");
    write_text(doc_path, synth::to_json(doc).dump(2));
    std::cout << doc.filtered_terms.size() << " in-vocabulary content terms; document " << doc_path.string() << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- gradcheck
struct GradcheckArgs {
  std::vector<int> layers = {1, 2, 3};
  int hidden = 8, vocab = 30, length = 24;
  double eps = 1e-5, scale = 0.5, tolerance = 1e-4;
  std::uint64_t seed = 1;
};

int run_gradcheck(const GradcheckArgs& a) {
  bool ok = true;
  for (int L : a.layers) {
    const lstm::LstmShape sh{a.vocab, a.hidden, a.hidden, L};
    const auto p = lstm::LstmParams<double>::random(sh, a.seed + static_cast<std::uint64_t>(L), a.scale);
    std::mt19937_64 rng(a.seed);
    std::vector<int> seq;
    for (int i = 0; i < a.length; ++i) seq.push_back(static_cast<int>(rng() % static_cast<unsigned>(a.vocab - 1)));
    seq[static_cast<std::size_t>(a.length / 2)] = a.vocab - 1;
    const auto rep = lstm::gradient_check(p, seq, a.eps, a.vocab - 1);
    const bool pass = rep.max_relative_error < a.tolerance && rep.zero_blocks.empty();
    ok = ok && pass;
    std::cout << "L=" << L << " checked " << rep.checked << " parameters, max relative error "
              << rep.max_relative_error << " at " << rep.worst_block << "(" << rep.worst_row << "," << rep.worst_col
              << ") " << (pass ? "PASS" : "FAIL") << "\n";
    for (const auto& [block, err] : rep.block_max_error) std::cout << "  " << block << "\t" << err << "\n";
    for (const auto& z : rep.zero_blocks) std::cout << "  zero gradient block: " << z << "\n";
  }
  return ok ? 0 : 1;
}

// ------------------------------------------------------------------- cloud
struct CloudArgs {
  std::string in, corpus, out;
  std::size_t k = synth::kCloudTerms;
  int query = 0;
  int relevant_for = 0;
};

int run_cloud(const CloudArgs& a) {
  const auto c = corpus::load_corpus(a.corpus);
  if (!c.stopwords) throw std::runtime_error("corpus has no stopword list");
  if (a.relevant_for > 0) {
    const auto n = pipeline::write_relevant_clouds(c, a.relevant_for, a.out, a.k);
    std::cout << "wrote " << n << " relevant clouds for query " << a.relevant_for << " to " << a.out << "\n";
    return 0;
  }
  if (a.in.empty()) throw CLI::ValidationError("--in", "required unless --relevant-for is given");

  synth::WordCloud cloud;
  if (fs::is_regular_file(a.in) && fs::path(a.in).extension() == ".json") {
    cloud = pipeline::synthetic_cloud(synth::synthetic_from_json(nlohmann::json::parse(read_text(a.in))), a.k);
  } else if (fs::is_regular_file(a.in)) {
    if (a.query <= 0) throw CLI::ValidationError("--query", "required for a raw text input");
    const auto doc = synth::make_synthetic_document(a.query, read_text(a.in), c.vocabulary, *c.stopwords);
    cloud = pipeline::synthetic_cloud(doc, a.k);
  } else if (const auto* d = c.find(a.in)) {
    cloud = pipeline::relevant_cloud(*d, *c.stopwords, a.k);
  } else {
    throw std::runtime_error(a.in + " is neither a file nor a document number in the corpus");
  }
  // A directory target gets the canonical file name for the cloud's doc ref.
  fs::path out = a.out;
  if (fs::is_directory(out) || a.out.ends_with("/")) out = pipeline::cloud_file(out, cloud.doc_ref);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  synth::save_cloud(cloud, out);
  std::cout << cloud.doc_ref << ": " << cloud.entries.size() << " entries";
  if (!cloud.empty()) std::cout << ", dominance ratio " << synth::dominance_ratio(cloud);
  std::cout << " -> " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- assemble
struct AssembleArgs {
  std::string clouds, qrels, topics, out;
  std::uint64_t seed = 0;
};

int run_assemble(const AssembleArgs& a) {
  const auto r = pipeline::assemble(a.clouds, pipeline::load_qrels_any(a.qrels), pipeline::load_topics_any(a.topics),
                                    a.seed);
  experiment::save_tasks(r.tasks, a.out);
  const auto c = r.schedule.counts();
  std::cout << r.tasks.size() << " tasks -> " << a.out << "; synthetic positions A/B/C/D " << c[0] << "/" << c[1]
            << "/" << c[2] << "/" << c[3] << "\n";
  for (const auto& e : r.excluded) std::cerr << "excluded " << e << "\n";
  return 0;
}

// ------------------------------------------------------------------- serve
struct ServeArgs {
  std::string tasks, host = "127.0.0.1", responses, static_dir;
  int port = 8080;
  experiment::ServiceConfig cfg;
};

int run_serve(const ServeArgs& a) {
  auto tasks = experiment::load_tasks(a.tasks);
  const fs::path log = a.responses.empty() ? fs::path(a.tasks).replace_filename("responses.jsonl") : fs::path(a.responses);
  experiment::AssessmentService svc(std::move(tasks), a.cfg, log);
  experiment::HttpFrontend front(svc, a.static_dir);

  // Signals go to a waiting thread so the server stops cleanly.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    front.stop();
  });

  const int port = front.bind(a.host, a.port);
  if (port < 0) {
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    throw std::runtime_error("cannot bind " + a.host + ":" + std::to_string(a.port));
  }
  std::cout << "serving " << svc.progress().at("total_tasks") << " tasks on http://" << a.host << ":" << port
            << " (responses: " << log.string() << ")" << std::endl;
  front.listen_after_bind();
  waiter.join();
  std::cout << svc.progress().dump() << std::endl;
  return 0;
}

// --------------------------------------------------------------- aggregate
struct AggregateArgs {
  std::string responses, tasks, out;
  double min_seconds = 20.0;
};

int run_aggregate(const AggregateArgs& a) {
  const auto tasks = experiment::load_tasks(a.tasks);
  const auto log = experiment::read_response_log(a.responses);
  std::vector<std::string> excluded;
  const auto summaries = aggregate::summarize_log(tasks, log, {a.min_seconds}, &excluded);
  auto rep = aggregate::report(summaries, tasks);
  for (const auto& t : excluded) rep.warnings.push_back("task " + t + " has no valid responses");
  aggregate::write_report(rep, a.out);
  std::cout << read_text(fs::path(a.out) / "summary.txt");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthdoc: synthetic relevant documents from a character-level LSTM"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ing = app.add_subcommand("ingest", "parse TREC documents, topics and qrels into a corpus directory");
  ing->add_option("--docs", ingest.docs, "document file glob (repeatable)")->required();
  ing->add_option("--topics", ingest.topics, "TREC topic file")->required();
  ing->add_option("--qrels", ingest.qrels, "4-column qrels file")->required();
  ing->add_option("--exclude-source", ingest.exclude, "source tag to drop, e.g. CR (repeatable)");
  ing->add_option("--stopwords", ingest.stopwords, "stopword list (default: bundled SMART list)");
  ing->add_option("--out", ingest.out, "corpus directory")->required();

  ExtractArgs extract;
  auto* ext = app.add_subcommand("extract", "build per-query character training sequences");
  ext->add_option("--corpus", extract.corpus)->required();
  ext->add_option("--query", extract.query, "query id or 'all'")->capture_default_str();
  ext->add_option("--radius", extract.radius)->capture_default_str();
  ext->add_option("--min-chars", extract.min_chars)->capture_default_str();
  ext->add_option("--out", extract.out, "training directory")->required();

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "train a character LSTM on one training sequence");
  tr->add_option("--seq", train.seq, "training sequence file")->required();
  tr->add_option("--out", train.out, "checkpoint file")->required();
  tr->add_option("--layers", train.cfg.layers)->capture_default_str();
  tr->add_option("--hidden", train.cfg.hidden)->capture_default_str();
  tr->add_option("--embed", train.cfg.embed_dim, "embedding size (0: same as hidden)")->capture_default_str();
  tr->add_option("--seq-length", train.cfg.seq_length)->capture_default_str();
  tr->add_option("--batch-size", train.cfg.batch_size)->capture_default_str();
  tr->add_option("--learning-rate", train.cfg.learning_rate)->capture_default_str();
  tr->add_option("--grad-clip", train.cfg.grad_clip)->capture_default_str();
  auto* epochs_opt = tr->add_option("--epochs", train.cfg.epochs)->capture_default_str();
  tr->add_option("--seed", train.cfg.rng_seed)->capture_default_str();
  tr->add_option("--checkpoint-every", train.checkpoint_every, "also checkpoint every N steps");
  tr->add_option("--max-steps", train.max_steps, "stop after N total steps (resumable)");
  tr->add_option("--resume", train.resume, "continue from this checkpoint");
  tr->add_option("--log-every", train.log_every)->capture_default_str();

  SampleArgs smp;
  auto* sa = app.add_subcommand("sample", "sample a synthetic document from a checkpoint");
  sa->add_option("--ckpt", smp.ckpt)->required();
  sa->add_option("--temperature", smp.cfg.temperature)->capture_default_str();
  sa->add_option("--seed", smp.cfg.rng_seed)->capture_default_str();
  sa->add_option("--max-len", smp.cfg.max_len)->capture_default_str();
  sa->add_flag("--greedy", smp.cfg.greedy, "argmax instead of sampling");
  sa->add_option("--corpus", smp.corpus, "corpus directory; also writes the filtered document as JSON");
  sa->add_option("--query", smp.query, "query id of the synthetic document");
  sa->add_option("--out", smp.out, "output text file")->required();

  GradcheckArgs gc;
  auto* gca = app.add_subcommand("gradcheck", "compare backpropagation with finite differences");
  gca->add_option("--layers", gc.layers)->capture_default_str();
  gca->add_option("--hidden", gc.hidden)->capture_default_str();
  gca->add_option("--vocab", gc.vocab)->capture_default_str()->check(CLI::Range(2, 256));
  gca->add_option("--length", gc.length)->capture_default_str()->check(CLI::Range(2, 10000));
  gca->add_option("--eps", gc.eps)->capture_default_str();
  gca->add_option("--scale", gc.scale, "uniform init range")->capture_default_str();
  gca->add_option("--tolerance", gc.tolerance)->capture_default_str();
  gca->add_option("--seed", gc.seed)->capture_default_str();

  CloudArgs cl;
  auto* cla = app.add_subcommand("cloud", "build a word cloud from a synthetic document or a corpus document");
  cla->add_option("--in", cl.in, "synthetic .json, raw text file, or docno");
  cla->add_option("--corpus", cl.corpus)->required();
  cla->add_option("--k", cl.k)->capture_default_str();
  cla->add_option("--query", cl.query, "query id for a raw text input");
  cla->add_option("--relevant-for", cl.relevant_for, "write clouds for every relevant document of this query");
  cla->add_option("--out", cl.out, "output file or directory")->required();

  AssembleArgs as;
  auto* asa = app.add_subcommand("assemble", "assemble assessment tasks from clouds");
  asa->add_option("--clouds", as.clouds)->required();
  asa->add_option("--qrels", as.qrels, "qrels file or corpus qrels.jsonl")->required();
  asa->add_option("--topics", as.topics, "topic file or corpus topics.jsonl")->required();
  asa->add_option("--seed", as.seed)->capture_default_str();
  asa->add_option("--out", as.out, "tasks file (JSON lines)")->required();

  ServeArgs sv;
  auto* sva = app.add_subcommand("serve", "run the assessment task service");
  sva->add_option("--tasks", sv.tasks)->required();
  sva->add_option("--host", sv.host)->capture_default_str();
  sva->add_option("--port", sv.port, "0 picks a free port")->capture_default_str();
  sva->add_option("--min-seconds", sv.cfg.min_seconds)->capture_default_str();
  sva->add_option("--target-responses", sv.cfg.target_responses)->capture_default_str();
  sva->add_option("--responses", sv.responses, "response log (default: responses.jsonl next to the tasks)");
  sva->add_option("--static", sv.static_dir, "directory served at / (assessment UI)");

  AggregateArgs ag;
  auto* aga = app.add_subcommand("aggregate", "summarize responses into rank statistics");
  aga->add_option("--responses", ag.responses)->required();
  aga->add_option("--tasks", ag.tasks)->required();
  aga->add_option("--min-seconds", ag.min_seconds)->capture_default_str();
  aga->add_option("--out", ag.out, "report directory")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*ing) return run_ingest(ingest);
    if (*ext) return run_extract(extract);
    if (*tr) {
      train.epochs_given = epochs_opt->count() > 0;
      return run_train(train);
    }
    if (*sa) return run_sample(smp);
    if (*gca) return run_gradcheck(gc);
    if (*cla) return run_cloud(cl);
    if (*asa) return run_assemble(as);
    if (*sva) return run_serve(sv);
    if (*aga) return run_aggregate(ag);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "synthdoc: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
