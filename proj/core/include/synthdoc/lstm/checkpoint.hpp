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

#ifndef SYNTHDOC_LSTM_CHECKPOINT_HPP_
#define SYNTHDOC_LSTM_CHECKPOINT_HPP_

#include <filesystem>
#include <optional>

#include "synthdoc/lstm/train.hpp"

namespace synthdoc::lstm {

// JSON container:
//   format "synthdoc-lstm-checkpoint", version 1, precision "float32",
//   shape, vocab (byte values, separator last), config, step,
//   data_size + data_fnv1a (fingerprint of the encoded training text),
//   params / adam.m / adam.v: {block: {rows, cols, data (row-major)}},
//   adam.t, state.h / state.c (per layer, row-major H x streams),
//   loss_history.

/// Model-only view of a checkpoint, enough for sampling.
struct ModelCheckpoint {
  LstmParams<float> params;
  windowing::CharVocab vocab;
  TrainConfig config;
  std::int64_t step = 0;
};

void save_checkpoint(const Trainer& trainer, const std::filesystem::path& file);

ModelCheckpoint load_model(const std::filesystem::path& file);

/// Rebuilds a trainer that continues exactly where the checkpoint stopped.
/// `seq` must be the same training sequence (checked by fingerprint).
/// `epochs_override` replaces the stored epoch budget when set.
Trainer resume_trainer(const std::filesystem::path& file, const windowing::TrainingSequence& seq,
                       std::optional<int> epochs_override = std::nullopt);

std::uint64_t fnv1a(std::span<const int> data);

}  // namespace synthdoc::lstm

#endif  // SYNTHDOC_LSTM_CHECKPOINT_HPP_
