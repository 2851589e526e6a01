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
#include "oracles.hpp"
#include "synthdoc/lstm/model.hpp"

using namespace synthdoc::lstm;

namespace {

oracle::TinyLstm to_tiny(const LstmParams<double>& p) {
  oracle::TinyLstm m;
  m.V = p.shape.vocab;
  m.E = p.shape.embed;
  for (int v = 0; v < m.V; ++v) {
    m.emb.emplace_back();
    for (int k = 0; k < m.E; ++k) m.emb.back().push_back(p.embedding(v, k));
  }
  for (int r = 0; r < 8; ++r) {
    m.W.emplace_back();
    for (int k = 0; k < m.E; ++k) m.W.back().push_back(p.layers[0].W(r, k));
    m.U.push_back({p.layers[0].U(r, 0), p.layers[0].U(r, 1)});
    m.b.push_back(p.layers[0].b(r, 0));
  }
  for (int v = 0; v < m.V; ++v) {
    m.Vo.push_back({p.out_w(v, 0), p.out_w(v, 1)});
    m.c.push_back(p.out_b(v, 0));
  }
  return m;
}

std::vector<int> random_sequence(std::mt19937_64& rng, int len, int vocab) {
  std::vector<int> s;
  for (int i = 0; i < len; ++i) s.push_back(static_cast<int>(rng() % static_cast<unsigned>(vocab)));
  return s;
}

}  // namespace

TEST_SUITE("lstm_model") {

TEST_CASE("zero parameters give zero logits and a uniform softmax") {
  const LstmShape sh{7, 4, 5, 2};
  const auto p = LstmParams<double>::zeros(sh);
  const auto s0 = LstmState<double>::zeros(sh);
  for (int x = 0; x < sh.vocab; ++x) {
    const auto out = forward_step(p, x, s0);
    CHECK(out.logits.isZero());
    const auto pr = softmax<double>(out.logits);
    for (int v = 0; v < sh.vocab; ++v) CHECK(pr[v] == doctest::Approx(1.0 / sh.vocab));
  }
}

TEST_CASE("initial state is the zero vector") {
  const LstmShape sh{5, 3, 4, 3};
  const auto s = LstmState<float>::zeros(sh, 2);
  CHECK(s.h.size() == 3);
  for (int l = 0; l < 3; ++l) {
    CHECK(s.h[l].isZero());
    CHECK(s.c[l].isZero());
    CHECK(s.h[l].rows() == 4);
    CHECK(s.h[l].cols() == 2);
  }
}

TEST_CASE("H=2, V=3 step matches the hand-unrolled oracle") {
  const LstmShape sh{3, 2, 2, 1};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = LstmParams<double>::random(sh, seed, 1.5);
    const auto m = to_tiny(p);
    auto state = LstmState<double>::zeros(sh);
    double h[2] = {0, 0}, c[2] = {0, 0};
    for (int x : {0, 2, 1, 1, 0}) {
      const auto out = forward_step(p, x, state);
      const auto ref = oracle::tiny_step(m, x, h, c);
      for (int v = 0; v < 3; ++v) CHECK(out.logits[v] == doctest::Approx(ref.logits[static_cast<std::size_t>(v)]).epsilon(1e-12));
      for (int u = 0; u < 2; ++u) {
        CHECK(out.state.h[0](u, 0) == doctest::Approx(ref.h[u]).epsilon(1e-12));
        CHECK(out.state.c[0](u, 0) == doctest::Approx(ref.c[u]).epsilon(1e-12));
        h[u] = ref.h[u];
        c[u] = ref.c[u];
      }
      state = out.state;
    }
  }
}

TEST_CASE("forward_step is pure and rejects bad input") {
  const LstmShape sh{6, 4, 4, 2};
  const auto p = LstmParams<float>::random(sh, 3);
  auto s = LstmState<float>::zeros(sh);
  s = forward_step(p, 2, s).state;
  const auto a = forward_step(p, 4, s);
  const auto b = forward_step(p, 4, s);
  CHECK(a.logits == b.logits);
  CHECK(a.state == b.state);
  CHECK_THROWS_AS(forward_step(p, 6, s), std::invalid_argument);
  CHECK_THROWS_AS(forward_step(p, -1, s), std::invalid_argument);
  CHECK_THROWS_AS(forward_step(p, 0, LstmState<float>::zeros({6, 4, 5, 2})), std::invalid_argument);
  CHECK_THROWS_AS(forward_step(p, 0, LstmState<float>::zeros(sh, 2)), std::invalid_argument);
}

TEST_CASE("property: h stays in (-1, 1) and c stays finite") {
  const LstmShape sh{10, 8, 8, 2};
  const auto p = LstmParams<float>::random(sh, 9, 3.0f);
  auto s = LstmState<float>::zeros(sh);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 2000; ++t) {
    s = forward_step(p, static_cast<int>(rng() % 10), s).state;
    for (int l = 0; l < 2; ++l) {
      CHECK(s.h[l].cwiseAbs().maxCoeff() < 1.0f);
      CHECK(s.c[l].allFinite());
    }
  }
}

TEST_CASE("random-init loss is close to ln V") {
  for (int V : {5, 20, 60}) {
    const LstmShape sh{V, 16, 16, 2};
    const auto p = LstmParams<double>::random(sh, static_cast<std::uint64_t>(V));
    std::mt19937_64 rng(static_cast<std::uint64_t>(V));
    const auto seq = random_sequence(rng, 200, V);
    CHECK(std::abs(loss(p, seq) - std::log(static_cast<double>(V))) < 0.1);
  }
}

TEST_CASE("a +10 bias on the always-correct next character drives loss near 0") {
  const LstmShape sh{4, 3, 3, 1};
  auto p = LstmParams<double>::zeros(sh);
  p.out_b(2, 0) = 10.0;
  const std::vector<int> seq(30, 2);
  const double l = loss(p, seq);
  CHECK(l < 1e-3);
  CHECK(l == doctest::Approx(std::log(1 + 3 * std::exp(-10.0))).epsilon(1e-9));
}

TEST_CASE("loss is invariant to a constant shift of all logits") {
  const LstmShape sh{8, 5, 6, 2};
  auto p = LstmParams<double>::random(sh, 4, 0.5);
  std::mt19937_64 rng(4);
  const auto seq = random_sequence(rng, 40, 8);
  const double before = loss(p, seq);
  p.out_b.array() += 3.25;
  CHECK(loss(p, seq) == doctest::Approx(before).epsilon(1e-12));
  CHECK_THROWS_AS(loss(p, std::vector<int>{1}), std::invalid_argument);
}

TEST_CASE("softmax: sums to one, positive, argmax invariant under temperature") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0, 5);
  for (int i = 0; i < 200; ++i) {
    Vector<double> z(12);
    for (int k = 0; k < 12; ++k) z[k] = n(rng);
    Eigen::Index arg = 0;
    z.maxCoeff(&arg);
    for (double tau : {2.0, 1.0, 0.5, 0.1, 0.01}) {
      const auto p = softmax<double>(z, tau);
      CHECK(std::abs(p.sum() - 1.0) < 1e-9);
      if (tau >= 0.5) CHECK((p.array() > 0).all());
      else CHECK((p.array() >= 0).all());
      Eigen::Index parg = 0;
      p.maxCoeff(&parg);
      CHECK(parg == arg);
    }
  }
  Vector<double> z(3);
  z << 1, 2, 3;
  CHECK(softmax<double>(z, 1e-4)[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(softmax<double>(z, 0.0), std::invalid_argument);
}

TEST_CASE("batched loss is the mean of per-stream losses") {
  const LstmShape sh{6, 4, 5, 2};
  const auto p = LstmParams<double>::random(sh, 12, 0.5);
  std::mt19937_64 rng(12);
  const int T = 9, B = 3;
  SequenceBatch batch{IndexMatrix(T, B), IndexMatrix(T, B)};
  double sum = 0;
  for (int b = 0; b < B; ++b) {
    const auto s = random_sequence(rng, T + 1, 6);
    for (int t = 0; t < T; ++t) {
      batch.inputs(t, b) = s[static_cast<std::size_t>(t)];
      batch.targets(t, b) = s[static_cast<std::size_t>(t) + 1];
    }
    sum += loss(p, s);
  }
  LstmParams<double> g;
  const double l = forward_backward(p, batch, LstmState<double>::zeros(sh, B), -1, &g);
  CHECK(l == doctest::Approx(sum / B).epsilon(1e-12));
}

TEST_CASE("separator resets state and blocks gradient") {
  // seq = a + [sep] + b: with the reset, the part after the separator is
  // scored exactly as a fresh sequence starting at b[0].
  const LstmShape sh{5, 4, 4, 2};
  const int sep = 4;
  const auto p = LstmParams<double>::random(sh, 21, 0.7);
  const std::vector<int> a = {0, 1, 2, 3, 1};
  const std::vector<int> b = {2, 2, 0, 1, 3, 0};
  std::vector<int> whole = a;
  whole.push_back(sep);
  whole.insert(whole.end(), b.begin(), b.end());
  std::vector<int> head = a;
  head.push_back(sep);
  head.push_back(b[0]);

  const double t_head = static_cast<double>(head.size() - 1);
  const double t_tail = static_cast<double>(b.size() - 1);
  LstmParams<double> gw, gh, gt;
  const double lw = loss_and_gradient(p, whole, sep, gw);
  const double lh = loss_and_gradient(p, head, sep, gh);
  const double lt = loss_and_gradient(p, b, sep, gt);
  CHECK(lw == doctest::Approx((lh * t_head + lt * t_tail) / (t_head + t_tail)).epsilon(1e-12));

  // Gradients combine the same way.
  std::vector<const Matrix<double>*> W, H, T;
  gw.for_each_block([&](const std::string&, const Matrix<double>& m) { W.push_back(&m); });
  gh.for_each_block([&](const std::string&, const Matrix<double>& m) { H.push_back(&m); });
  gt.for_each_block([&](const std::string&, const Matrix<double>& m) { T.push_back(&m); });
  for (std::size_t k = 0; k < W.size(); ++k) {
    const Matrix<double> expect = ((*H[k]) * t_head + (*T[k]) * t_tail) / (t_head + t_tail);
    CHECK(((*W[k]) - expect).cwiseAbs().maxCoeff() < 1e-12);
  }

  // Without the reset the tail depends on the head.
  CHECK(std::abs(loss(p, whole) - lw) > 1e-9);
}

TEST_CASE("parameter containers") {
  const LstmShape sh{7, 3, 4, 2};
  auto p = LstmParams<float>::random(sh, 1);
  const std::size_t expect = 7 * 3 + (16 * 3 + 16 * 4 + 16) + (16 * 4 + 16 * 4 + 16) + 7 * 4 + 7;
  CHECK(p.parameter_count() == expect);
  std::vector<std::string> names;
  p.for_each_block([&](const std::string& n, const Matrix<float>& m) {
    names.push_back(n);
    CHECK(m.cwiseAbs().maxCoeff() <= 0.08f);
  });
  CHECK(names == std::vector<std::string>{"embedding", "layer1.W", "layer1.U", "layer1.b", "layer2.W", "layer2.U",
                                          "layer2.b", "output.W", "output.b"});
  CHECK(p.all_finite());
  p.layers[1].U(0, 0) = std::nanf("");
  CHECK_FALSE(p.all_finite());
  p.set_zero();
  CHECK(p.all_finite());
  CHECK(LstmParams<float>::random(sh, 5).embedding == LstmParams<float>::random(sh, 5).embedding);
  CHECK_THROWS_AS(LstmParams<float>::zeros({1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(LstmParams<float>::zeros({3, 1, 0, 1}), std::invalid_argument);
}

}  // TEST_SUITE
