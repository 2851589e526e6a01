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

#include "doctest.h"
#include "json.hpp"
#include "synthdoc/lstm/checkpoint.hpp"
#include "test_util.hpp"

using namespace synthdoc;
using namespace synthdoc::lstm;

namespace {

windowing::TrainingSequence text_sequence() {
  windowing::TrainingSequence s;
  s.chars = "storms hit the coast. rain fell all night.";
  s.chars.push_back(windowing::kEofChar);
  s.chars += "the euro lost ground again.";
  s.chars.push_back(windowing::kEofChar);
  return s;
}

TrainConfig small_config() {
  TrainConfig c;
  c.layers = 2;
  c.hidden = 10;
  c.embed_dim = 6;
  c.seq_length = 8;
  c.batch_size = 3;
  c.epochs = 4;
  c.rng_seed = 2024;
  return c;
}

}  // namespace

TEST_SUITE("checkpoint") {

TEST_CASE("model round trip is exact") {
  testutil::TempDir tmp("ckpt");
  Trainer t(text_sequence(), small_config());
  t.run(5);
  save_checkpoint(t, tmp / "m.json");
  const auto m = load_model(tmp / "m.json");
  CHECK(m.vocab == t.vocab());
  CHECK(m.step == 5);
  CHECK(m.config.hidden == 10);
  CHECK(m.config.embed_dim == 6);
  CHECK(m.params.shape == t.params().shape);
  std::vector<const Matrix<float>*> a, b;
  t.params().for_each_block([&](const std::string&, const Matrix<float>& x) { a.push_back(&x); });
  m.params.for_each_block([&](const std::string&, const Matrix<float>& x) { b.push_back(&x); });
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(*a[k] == *b[k]);

  const auto j = nlohmann::json::parse(testutil::slurp(tmp / "m.json"));
  CHECK(j.at("format") == "synthdoc-lstm-checkpoint");
  CHECK(j.at("precision") == "float32");
  CHECK(j.at("params").at("layer1.W").at("rows") == 40);
  CHECK(j.at("params").at("layer1.W").at("cols") == 6);
}

TEST_CASE("resume equals an uninterrupted run") {
  testutil::TempDir tmp("resume");
  const auto seq = text_sequence();
  Trainer full(seq, small_config());
  full.run();

  // Stop mid-epoch so the carried state matters too.
  Trainer half(seq, small_config());
  const auto stop_at = full.total_steps() / 2 + 1;
  half.run(stop_at);
  save_checkpoint(half, tmp / "half.json");
  auto resumed = resume_trainer(tmp / "half.json", seq);
  CHECK(resumed.steps_done() == stop_at);
  CHECK(resumed.carried_state() == half.carried_state());
  resumed.run();

  CHECK(resumed.steps_done() == full.steps_done());
  CHECK(resumed.loss_history() == full.loss_history());
  CHECK(resumed.params().out_w == full.params().out_w);
  CHECK(resumed.params().layers[0].W == full.params().layers[0].W);
  CHECK(resumed.optimizer().t == full.optimizer().t);
  CHECK(resumed.optimizer().v.out_b == full.optimizer().v.out_b);
}

TEST_CASE("same seed and data give byte-identical checkpoints") {
  testutil::TempDir tmp("det");
  Trainer a(text_sequence(), small_config()), b(text_sequence(), small_config());
  a.run();
  b.run();
  save_checkpoint(a, tmp / "a.json");
  save_checkpoint(b, tmp / "b.json");
  CHECK(testutil::slurp(tmp / "a.json") == testutil::slurp(tmp / "b.json"));
}

TEST_CASE("resume refuses different training data and honours an epoch override") {
  testutil::TempDir tmp("fp");
  const auto seq = text_sequence();
  Trainer t(seq, small_config());
  t.run(3);
  save_checkpoint(t, tmp / "c.json");
  auto other = seq;
  std::swap(other.chars[0], other.chars[1]);
  CHECK_THROWS(resume_trainer(tmp / "c.json", other));
  auto more = resume_trainer(tmp / "c.json", seq, 10);
  CHECK(more.config().epochs == 10);
  CHECK(more.total_steps() == 10 * more.schedule().windows_per_epoch());
  CHECK_THROWS(load_model(tmp / "missing.json"));
  testutil::write_file(tmp / "bad.json", R"({"format":"something-else"})");
  CHECK_THROWS(load_model(tmp / "bad.json"));
}

}  // TEST_SUITE
