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

#ifndef SYNTHDOC_LSTM_MODEL_HPP_
#define SYNTHDOC_LSTM_MODEL_HPP_

#include <span>

#include "synthdoc/lstm/params.hpp"

namespace synthdoc::lstm {

/// Time-major index matrix: row t holds the symbol of every stream at step t.
using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct StepOutput {
  Vector<Scalar> logits;
  LstmState<Scalar> state;
};

/// One recurrence step for a single stream. Pure.
/// Throws std::invalid_argument on out-of-range input or mismatched state.
template <typename Scalar>
StepOutput<Scalar> forward_step(const LstmParams<Scalar>& params, int char_index, const LstmState<Scalar>& state);

/// Numerically stable softmax of logits / temperature.
template <typename Scalar>
Vector<Scalar> softmax(const Vector<Scalar>& logits, Scalar temperature = Scalar(1));

/// Inputs and next-symbol targets for a window of `steps` x `streams`.
struct SequenceBatch {
  IndexMatrix inputs;
  IndexMatrix targets;

  int steps() const { return static_cast<int>(inputs.rows()); }
  int streams() const { return static_cast<int>(inputs.cols()); }
};

/// Mean next-symbol cross-entropy (nats) over the batch, starting from
/// `state`. When `grads` is non-null it receives d(loss)/d(params) by
/// backpropagation through the window. When `state_out` is non-null it
/// receives the state after the last step.
///
/// A stream's state is zeroed after it consumes `reset_index`, and no
/// gradient flows across that reset. Pass -1 to disable resets.
template <typename Scalar>
Scalar forward_backward(const LstmParams<Scalar>& params, const SequenceBatch& batch, const LstmState<Scalar>& state,
                        int reset_index, LstmParams<Scalar>* grads, LstmState<Scalar>* state_out = nullptr);

/// Mean next-character cross-entropy of a single sequence from the zero state.
/// Requires at least two symbols.
template <typename Scalar>
Scalar loss(const LstmParams<Scalar>& params, std::span<const int> sequence, int reset_index = -1);

/// Loss and its gradient for a single sequence from the zero state.
template <typename Scalar>
Scalar loss_and_gradient(const LstmParams<Scalar>& params, std::span<const int> sequence, int reset_index,
                         LstmParams<Scalar>& grads);

SequenceBatch single_stream_batch(std::span<const int> sequence);

}  // namespace synthdoc::lstm

#endif  // SYNTHDOC_LSTM_MODEL_HPP_
