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

#ifndef SYNTHDOC_LSTM_SAMPLE_HPP_
#define SYNTHDOC_LSTM_SAMPLE_HPP_

#include <cstdint>
#include <random>
#include <string>

#include "synthdoc/lstm/model.hpp"
#include "synthdoc/windowing.hpp"

namespace synthdoc::lstm {

struct SampleConfig {
  double temperature = 1.0;
  std::size_t max_len = 20000;
  std::uint64_t rng_seed = 0;
  bool greedy = false;

  void validate() const;
};

/// Draws an index from a probability vector by inverse CDF.
int draw_index(const Vector<double>& probs, std::mt19937_64& rng);

/// Character-by-character generator. Starts from the zero state and a
/// uniformly drawn non-separator character.
class Sampler {
public:
  Sampler(const LstmParams<float>& params, const windowing::CharVocab& vocab, SampleConfig cfg);

  /// The priming character (uniform over non-separator symbols).
  int first();
  /// Feeds `prev` and returns the next symbol index.
  int next(int prev);
  /// Next-symbol distribution after feeding `prev`; advances the state.
  Vector<double> next_distribution(int prev);

private:
  const LstmParams<float>& params_;
  const windowing::CharVocab& vocab_;
  SampleConfig cfg_;
  std::mt19937_64 rng_;
  LstmState<float> state_;
};

/// Generates until the separator is drawn or `max_len` characters exist.
/// The separator is never part of the result.
std::string sample(const LstmParams<float>& params, const windowing::CharVocab& vocab, const SampleConfig& cfg);

}  // namespace synthdoc::lstm

#endif  // SYNTHDOC_LSTM_SAMPLE_HPP_
