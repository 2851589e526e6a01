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

#include "synthdoc/lstm/sample.hpp"

#include <stdexcept>

namespace synthdoc::lstm {

void SampleConfig::validate() const {
  if (!(temperature > 0)) throw std::invalid_argument("temperature must be > 0");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
}

int draw_index(const Vector<double>& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng) * probs.sum();
  double acc = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (r < acc) return static_cast<int>(i);
  }
  // Rounding left r at the very top; take the last positive entry.
  for (Eigen::Index i = probs.size() - 1; i >= 0; --i)
    if (probs[i] > 0) return static_cast<int>(i);
  return static_cast<int>(probs.size()) - 1;
}

Sampler::Sampler(const LstmParams<float>& params, const windowing::CharVocab& vocab, SampleConfig cfg)
    : params_(params), vocab_(vocab), cfg_(cfg), rng_(cfg.rng_seed), state_(LstmState<float>::zeros(params.shape)) {
  cfg_.validate();
  if (params.shape.vocab != static_cast<int>(vocab.size()))
    throw std::invalid_argument("model vocabulary size does not match the char vocabulary");
}

int Sampler::first() {
  std::uniform_int_distribution<int> pick(0, vocab_.eof_index() - 1);
  return pick(rng_);
}

Vector<double> Sampler::next_distribution(int prev) {
  auto out = forward_step(params_, prev, state_);
  state_ = std::move(out.state);
  return softmax<double>(out.logits.cast<double>(), cfg_.temperature);
}

int Sampler::next(int prev) {
  if (cfg_.greedy) {
    auto out = forward_step(params_, prev, state_);
    state_ = std::move(out.state);
    Eigen::Index best = 0;
    out.logits.maxCoeff(&best);
    return static_cast<int>(best);
  }
  return draw_index(next_distribution(prev), rng_);
}

std::string sample(const LstmParams<float>& params, const windowing::CharVocab& vocab, const SampleConfig& cfg) {
  Sampler s(params, vocab, cfg);
  std::string text;
  int cur = s.first();
  text.push_back(vocab.symbol(cur));
  while (text.size() < cfg.max_len) {
    cur = s.next(cur);
    if (cur == vocab.eof_index()) break;
    text.push_back(vocab.symbol(cur));
  }
  return text;
}

}  // namespace synthdoc::lstm
