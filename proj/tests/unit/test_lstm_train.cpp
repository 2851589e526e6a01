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

#include <cmath>
#include <random>

#include "doctest.h"
#include "synthdoc/lstm/train.hpp"

using namespace synthdoc;
using namespace synthdoc::lstm;

namespace {

windowing::TrainingSequence repeated(const std::string& unit, int times) {
  windowing::TrainingSequence s;
  for (int i = 0; i < times; ++i) s.chars += unit;
  s.doc_spans.emplace_back(0, s.chars.size());
  s.chars.push_back(windowing::kEofChar);
  return s;
}

SequenceBatch tiny_batch() {
  SequenceBatch b{IndexMatrix(6, 2), IndexMatrix(6, 2)};
  const int in[2][7] = {{0, 1, 2, 0, 1, 2, 0}, {2, 2, 1, 1, 0, 0, 2}};
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 6; ++t) {
      b.inputs(t, s) = in[s][t];
      b.targets(t, s) = in[s][t + 1];
    }
  return b;
}

}  // namespace

TEST_SUITE("lstm_train") {

TEST_CASE("default configuration") {
  TrainConfig c;
  CHECK(c.layers == 3);
  CHECK(c.hidden == 512);
  CHECK(c.embed() == 512);
  CHECK(c.seq_length == 50);
  CHECK(c.batch_size == 50);
  CHECK(c.learning_rate == 2e-3);
  CHECK(c.beta1 == 0.9);
  CHECK(c.beta2 == 0.999);
  CHECK(c.epsilon == 1e-8);
  CHECK(c.grad_clip == 5.0);
  CHECK(c.epochs == 50);
  CHECK_NOTHROW(c.validate());
  c.hidden = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.learning_rate = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.beta2 = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("one step at lr 1e-2 lowers the loss on the same batch") {
  const LstmShape sh{3, 4, 6, 2};
  auto p = LstmParams<float>::random(sh, 1);
  auto opt = AdamState<float>::zeros(sh);
  TrainConfig cfg;
  cfg.learning_rate = 1e-2;
  const auto batch = tiny_batch();
  const auto s0 = LstmState<float>::zeros(sh, 2);
  auto carried = s0;
  const float before = train_step(p, batch, opt, carried, -1, cfg);
  const float after = forward_backward<float>(p, batch, s0, -1, nullptr);
  CHECK(before == doctest::Approx(forward_backward<float>(LstmParams<float>::random(sh, 1), batch, s0, -1, nullptr)));
  CHECK(after < before - 1e-4f);
  CHECK(opt.t == 1);
  CHECK_FALSE(carried == s0);  // state advanced to the end of the window
}

TEST_CASE("zero gradient leaves parameters unchanged") {
  const LstmShape sh{4, 3, 3, 1};
  auto p = LstmParams<double>::random(sh, 2);
  const auto orig = p;
  auto opt = AdamState<double>::zeros(sh);
  const auto zero = LstmParams<double>::zeros(sh);
  adam_update(p, zero, opt, TrainConfig{});
  CHECK(p.embedding == orig.embedding);
  CHECK(p.layers[0].W == orig.layers[0].W);
  CHECK(p.out_b == orig.out_b);
  CHECK(opt.t == 1);

  // With nonzero first moments the zero-gradient step moves by the decayed
  // moment only.
  auto g = LstmParams<double>::zeros(sh);
  g.out_b(0, 0) = 1.0;
  auto p2 = orig;
  auto opt2 = AdamState<double>::zeros(sh);
  TrainConfig cfg;
  adam_update(p2, g, opt2, cfg);
  const double m1 = 0.1, v1 = 0.001;
  CHECK(p2.out_b(0, 0) == doctest::Approx(orig.out_b(0, 0) - cfg.learning_rate * (m1 / 0.1) / (std::sqrt(v1 / 0.001) + cfg.epsilon)));
  const double x = p2.out_b(0, 0);
  adam_update(p2, zero, opt2, cfg);
  const double m2 = 0.9 * m1, v2 = 0.999 * v1;
  const double bc1 = 1 - 0.9 * 0.9, bc2 = 1 - 0.999 * 0.999;
  CHECK(p2.out_b(0, 0) == doctest::Approx(x - cfg.learning_rate * (m2 / bc1) / (std::sqrt(v2 / bc2) + cfg.epsilon)));
  CHECK(p2.out_b(1, 0) == orig.out_b(1, 0));
}

TEST_CASE("gradients are clamped elementwise") {
  const LstmShape sh{3, 2, 2, 1};
  auto g = LstmParams<float>::zeros(sh);
  g.out_w(0, 0) = 12.f;
  g.out_w(1, 1) = -7.f;
  g.layers[0].b(3, 0) = 4.5f;
  clip_gradients(g, 5.f);
  CHECK(g.out_w(0, 0) == 5.f);
  CHECK(g.out_w(1, 1) == -5.f);
  CHECK(g.layers[0].b(3, 0) == 4.5f);
}

TEST_CASE("non-finite loss aborts with step and block") {
  const LstmShape sh{3, 2, 2, 1};
  auto p = LstmParams<float>::random(sh, 3);
  p.out_b(1, 0) = std::numeric_limits<float>::infinity();
  auto opt = AdamState<float>::zeros(sh);
  auto st = LstmState<float>::zeros(sh, 2);
  try {
    train_step(p, tiny_batch(), opt, st, -1, TrainConfig{});
    FAIL("expected TrainingError");
  } catch (const TrainingError& e) {
    CHECK(e.step() == 1);
    CHECK(e.block() == "loss");
  }
  auto q = LstmParams<float>::random(sh, 3);
  q.layers[0].U(0, 0) = std::nanf("");
  try {
    train_step(q, tiny_batch(), opt, st, -1, TrainConfig{});
    FAIL("expected TrainingError");
  } catch (const TrainingError& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("batch schedule geometry") {
  BatchSchedule a(2001, 50, 50);
  CHECK(a.streams() == 40);
  CHECK(a.steps() == 50);
  CHECK(a.windows_per_epoch() == 1);
  BatchSchedule b(1001, 50, 8);
  CHECK(b.streams() == 8);
  CHECK(b.steps() == 50);
  CHECK(b.windows_per_epoch() == 2);
  BatchSchedule c(10, 50, 50);
  CHECK(c.streams() == 1);
  CHECK(c.steps() == 9);
  CHECK(c.windows_per_epoch() == 1);
  CHECK_THROWS_AS(BatchSchedule(1, 5, 5), std::invalid_argument);

  std::vector<int> data(41);
  for (int i = 0; i < 41; ++i) data[static_cast<std::size_t>(i)] = i;
  BatchSchedule d(41, 5, 2);  // 2 streams of 20, 4 windows of 5
  REQUIRE(d.windows_per_epoch() == 4);
  const auto w = d.window(data, 3);
  CHECK(w.inputs(0, 0) == 15);
  CHECK(w.targets(4, 0) == 20);
  CHECK(w.inputs(0, 1) == 35);
  CHECK(w.targets(4, 1) == 40);
  CHECK_THROWS_AS(d.window(data, 4), std::out_of_range);
}

TEST_CASE("trainer rejects seq_length beyond the text") {
  TrainConfig cfg;
  cfg.layers = 1;
  cfg.hidden = 4;
  cfg.seq_length = 100;
  CHECK_THROWS_AS(Trainer(repeated("ab", 10), cfg), std::invalid_argument);
}

TEST_CASE("trainer is deterministic and resets carried state each epoch") {
  TrainConfig cfg;
  cfg.layers = 2;
  cfg.hidden = 8;
  cfg.seq_length = 10;
  cfg.batch_size = 3;
  cfg.epochs = 3;
  cfg.rng_seed = 17;
  const auto seq = repeated("hello world. ", 8);
  Trainer a(seq, cfg), b(seq, cfg);
  a.run();
  b.run();
  CHECK(a.finished());
  CHECK(a.steps_done() == a.total_steps());
  CHECK(a.loss_history() == b.loss_history());
  CHECK(a.params().out_w == b.params().out_w);
  CHECK(a.params().layers[1].U == b.params().layers[1].U);
  CHECK(a.epoch() == 3);

  // Replaying the first epoch by hand from the initial parameters matches.
  auto p = LstmParams<float>::random(a.params().shape, cfg.rng_seed, static_cast<float>(cfg.init_scale));
  auto opt = AdamState<float>::zeros(p.shape);
  const auto& sch = a.schedule();
  std::vector<double> losses;
  for (int e = 0; e < 2; ++e) {
    auto st = LstmState<float>::zeros(p.shape, sch.streams());
    for (int w = 0; w < sch.windows_per_epoch(); ++w)
      losses.push_back(train_step(p, sch.window(a.data(), w), opt, st, a.vocab().eof_index(), cfg));
  }
  for (std::size_t i = 0; i < losses.size(); ++i) CHECK(losses[i] == a.loss_history()[i]);
}

TEST_CASE("full-batch gradient descent with a small step decreases loss monotonically") {
  const LstmShape sh{5, 4, 6, 2};
  auto p = LstmParams<double>::random(sh, 31, 0.3);
  const std::vector<int> seq = {0, 1, 2, 3, 4, 0, 1, 2, 3, 4, 0, 2, 4, 1, 3};
  double prev = loss(p, seq);
  for (int it = 0; it < 30; ++it) {
    LstmParams<double> g;
    loss_and_gradient(p, seq, -1, g);
    std::vector<Matrix<double>*> P;
    std::vector<const Matrix<double>*> G;
    p.for_each_block([&](const std::string&, Matrix<double>& m) { P.push_back(&m); });
    g.for_each_block([&](const std::string&, const Matrix<double>& m) { G.push_back(&m); });
    for (std::size_t k = 0; k < P.size(); ++k) *P[k] -= 0.05 * *G[k];
    const double cur = loss(p, seq);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("200 steps on a repeated 50-character string drive loss below 0.1 nats") {
  const std::string unit = "the quick brown fox jumps over the lazy dog again!";
  REQUIRE(unit.size() == 50);
  TrainConfig cfg;
  cfg.layers = 1;
  cfg.hidden = 64;
  cfg.seq_length = 50;
  cfg.batch_size = 4;
  cfg.learning_rate = 1e-2;
  cfg.epochs = 40;
  cfg.rng_seed = 5;
  Trainer t(repeated(unit, 20), cfg);
  REQUIRE(t.total_steps() == 200);
  t.run();
  MESSAGE("final batch loss " << t.loss_history().back() << ", first " << t.loss_history().front());
  CHECK(t.loss_history().back() < 0.1);
}

}  // TEST_SUITE
