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

#ifndef SYNTHDOC_LSTM_TRAIN_HPP_
#define SYNTHDOC_LSTM_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "synthdoc/lstm/model.hpp"
#include "synthdoc/windowing.hpp"

namespace synthdoc::lstm {

/// Training hyper-parameters. Defaults follow the torch-rnn command line
/// defaults except for the network size.
struct TrainConfig {
  int layers = 3;
  int hidden = 512;
  int embed_dim = 0;  // 0 means "same as hidden"
  int seq_length = 50;
  int batch_size = 50;
  double learning_rate = 2e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double grad_clip = 5.0;
  int epochs = 50;
  std::uint64_t rng_seed = 0;
  double init_scale = 0.08;

  int embed() const { return embed_dim > 0 ? embed_dim : hidden; }
  void validate() const;
};

template <typename Scalar>
struct AdamState {
  LstmParams<Scalar> m;
  LstmParams<Scalar> v;
  std::int64_t t = 0;

  static AdamState zeros(const LstmShape& shape) {
    return {LstmParams<Scalar>::zeros(shape), LstmParams<Scalar>::zeros(shape), 0};
  }
};

/// Non-finite loss or gradient.
class TrainingError : public std::runtime_error {
public:
  TrainingError(std::int64_t step, std::string block, const std::string& what)
      : std::runtime_error(what), step_(step), block_(std::move(block)) {}
  std::int64_t step() const { return step_; }
  const std::string& block() const { return block_; }

private:
  std::int64_t step_;
  std::string block_;
};

/// Elementwise clamp to [-limit, limit].
template <typename Scalar>
void clip_gradients(LstmParams<Scalar>& grads, Scalar limit);

template <typename Scalar>
void adam_update(LstmParams<Scalar>& params, const LstmParams<Scalar>& grads, AdamState<Scalar>& opt,
                 const TrainConfig& cfg);

/// One optimisation step on `batch`: BPTT from `state`, clip, Adam update.
/// `state` is advanced to the end of the window. Returns the pre-update loss.
template <typename Scalar>
Scalar train_step(LstmParams<Scalar>& params, const SequenceBatch& batch, AdamState<Scalar>& opt,
                  LstmState<Scalar>& state, int reset_index, const TrainConfig& cfg);

/// Cuts an encoded text into `streams` contiguous slices that are walked in
/// lock-step, `steps` symbols per window.
class BatchSchedule {
public:
  BatchSchedule(std::size_t data_size, int seq_length, int batch_size);

  int streams() const { return streams_; }
  int steps() const { return steps_; }
  int windows_per_epoch() const { return windows_; }
  SequenceBatch window(std::span<const int> data, int index) const;

private:
  int streams_ = 1;
  int steps_ = 1;
  int windows_ = 1;
  std::size_t stream_len_ = 0;
};

struct TrainProgress {
  std::int64_t step = 0;
  int epoch = 0;
  double loss = 0;
};

/// Stateful single-precision training loop over one training sequence.
class Trainer {
public:
  Trainer(const windowing::TrainingSequence& seq, TrainConfig cfg);
  /// Restores a trainer from checkpointed parts.
  Trainer(windowing::CharVocab vocab, std::vector<int> data, TrainConfig cfg, LstmParams<float> params,
          AdamState<float> opt, LstmState<float> state, std::int64_t step, std::vector<double> loss_history);

  /// Runs one window; throws TrainingError on non-finite values.
  double step();
  /// Runs until `epochs` are complete or `max_steps` total steps are reached.
  void run(std::int64_t max_steps = -1, const std::function<void(const TrainProgress&)>& on_step = {});

  bool finished() const { return step_ >= total_steps(); }
  std::int64_t total_steps() const;
  std::int64_t steps_done() const { return step_; }
  int epoch() const;

  const TrainConfig& config() const { return cfg_; }
  const windowing::CharVocab& vocab() const { return vocab_; }
  const std::vector<int>& data() const { return data_; }
  const LstmParams<float>& params() const { return params_; }
  const AdamState<float>& optimizer() const { return opt_; }
  const LstmState<float>& carried_state() const { return state_; }
  const BatchSchedule& schedule() const { return schedule_; }
  const std::vector<double>& loss_history() const { return loss_history_; }

  /// Loss over the whole training sequence from the zero state.
  double full_loss() const;

private:
  windowing::CharVocab vocab_;
  std::vector<int> data_;
  TrainConfig cfg_;
  BatchSchedule schedule_;
  LstmParams<float> params_;
  AdamState<float> opt_;
  LstmState<float> state_;
  std::int64_t step_ = 0;
  std::vector<double> loss_history_;
};

struct TrainResult {
  LstmParams<float> params;
  windowing::CharVocab vocab;
  std::vector<double> loss_history;
};

TrainResult train(const windowing::TrainingSequence& seq, const TrainConfig& cfg);

}  // namespace synthdoc::lstm

#endif  // SYNTHDOC_LSTM_TRAIN_HPP_
