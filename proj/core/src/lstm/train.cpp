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

#include "synthdoc/lstm/train.hpp"

#include <algorithm>
#include <cmath>

namespace synthdoc::lstm {

void TrainConfig::validate() const {
  if (layers < 1 || hidden < 1 || embed_dim < 0 || seq_length < 1 || batch_size < 1 || epochs < 1)
    throw std::invalid_argument("training sizes must be positive");
  if (!(learning_rate > 0) || !(epsilon > 0) || !(grad_clip > 0) || !(init_scale > 0))
    throw std::invalid_argument("learning rate, epsilon, clip and init scale must be positive");
  if (!(beta1 > 0 && beta1 < 1) || !(beta2 > 0 && beta2 < 1))
    throw std::invalid_argument("moment decays must lie in (0, 1)");
}

template <typename Scalar>
void clip_gradients(LstmParams<Scalar>& grads, Scalar limit) {
  grads.for_each_block([&](const std::string&, Matrix<Scalar>& g) { g = g.cwiseMax(-limit).cwiseMin(limit); });
}

template <typename Scalar>
void adam_update(LstmParams<Scalar>& params, const LstmParams<Scalar>& grads, AdamState<Scalar>& opt,
                 const TrainConfig& cfg) {
  ++opt.t;
  const auto b1 = static_cast<Scalar>(cfg.beta1);
  const auto b2 = static_cast<Scalar>(cfg.beta2);
  const auto lr = static_cast<Scalar>(cfg.learning_rate);
  const auto eps = static_cast<Scalar>(cfg.epsilon);
  const auto bc1 = static_cast<Scalar>(1.0 - std::pow(cfg.beta1, static_cast<double>(opt.t)));
  const auto bc2 = static_cast<Scalar>(1.0 - std::pow(cfg.beta2, static_cast<double>(opt.t)));

  std::vector<Matrix<Scalar>*> p, m, v;
  std::vector<const Matrix<Scalar>*> g;
  params.for_each_block([&](const std::string&, Matrix<Scalar>& x) { p.push_back(&x); });
  opt.m.for_each_block([&](const std::string&, Matrix<Scalar>& x) { m.push_back(&x); });
  opt.v.for_each_block([&](const std::string&, Matrix<Scalar>& x) { v.push_back(&x); });
  grads.for_each_block([&](const std::string&, const Matrix<Scalar>& x) { g.push_back(&x); });

  for (std::size_t k = 0; k < p.size(); ++k) {
    auto ga = g[k]->array();
    m[k]->array() = b1 * m[k]->array() + (Scalar(1) - b1) * ga;
    v[k]->array() = b2 * v[k]->array() + (Scalar(1) - b2) * ga.square();
    p[k]->array() -= lr * (m[k]->array() / bc1) / ((v[k]->array() / bc2).sqrt() + eps);
  }
}

template <typename Scalar>
Scalar train_step(LstmParams<Scalar>& params, const SequenceBatch& batch, AdamState<Scalar>& opt,
                  LstmState<Scalar>& state, int reset_index, const TrainConfig& cfg) {
  const std::int64_t step = opt.t + 1;
  LstmParams<Scalar> grads;
  LstmState<Scalar> next;
  const Scalar loss_value = forward_backward(params, batch, state, reset_index, &grads, &next);
  if (!std::isfinite(static_cast<double>(loss_value)))
    throw TrainingError(step, "loss", "non-finite loss at step " + std::to_string(step));
  grads.for_each_block([&](const std::string& name, const Matrix<Scalar>& g) {
    if (!g.allFinite())
      throw TrainingError(step, name, "non-finite gradient in " + name + " at step " + std::to_string(step));
  });
  clip_gradients(grads, static_cast<Scalar>(cfg.grad_clip));
  adam_update(params, grads, opt, cfg);
  params.for_each_block([&](const std::string& name, const Matrix<Scalar>& w) {
    if (!w.allFinite())
      throw TrainingError(step, name, "non-finite parameter in " + name + " after step " + std::to_string(step));
  });
  state = std::move(next);
  return loss_value;
}

// ------------------------------------------------------------ BatchSchedule

BatchSchedule::BatchSchedule(std::size_t data_size, int seq_length, int batch_size) {
  if (data_size < 2) throw std::invalid_argument("training data needs at least 2 symbols");
  if (seq_length < 1 || batch_size < 1) throw std::invalid_argument("seq_length and batch_size must be positive");
  const std::size_t usable = data_size - 1;
  // Fewer streams than requested when the text cannot fill a full window per stream.
  streams_ = static_cast<int>(std::clamp<std::size_t>(usable / static_cast<std::size_t>(seq_length), 1,
                                                      static_cast<std::size_t>(batch_size)));
  stream_len_ = usable / static_cast<std::size_t>(streams_);
  steps_ = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(seq_length), stream_len_));
  windows_ = static_cast<int>(stream_len_ / static_cast<std::size_t>(steps_));
}

SequenceBatch BatchSchedule::window(std::span<const int> data, int index) const {
  if (index < 0 || index >= windows_) throw std::out_of_range("window index out of range");
  SequenceBatch b{IndexMatrix(steps_, streams_), IndexMatrix(steps_, streams_)};
  for (int s = 0; s < streams_; ++s) {
    const std::size_t base = static_cast<std::size_t>(s) * stream_len_ + static_cast<std::size_t>(index) * steps_;
    for (int t = 0; t < steps_; ++t) {
      b.inputs(t, s) = data[base + static_cast<std::size_t>(t)];
      b.targets(t, s) = data[base + static_cast<std::size_t>(t) + 1];
    }
  }
  return b;
}

// ------------------------------------------------------------------ Trainer

namespace {

std::vector<int> encode_checked(const windowing::CharVocab& vocab, const std::string& chars,
                                const TrainConfig& cfg) {
  cfg.validate();
  if (chars.size() < static_cast<std::size_t>(cfg.seq_length))
    throw std::invalid_argument("seq_length " + std::to_string(cfg.seq_length) + " exceeds training text length " +
                                std::to_string(chars.size()));
  return vocab.encode(chars);
}

LstmShape shape_for(const windowing::CharVocab& vocab, const TrainConfig& cfg) {
  return {static_cast<int>(vocab.size()), cfg.embed(), cfg.hidden, cfg.layers};
}

}  // namespace

Trainer::Trainer(const windowing::TrainingSequence& seq, TrainConfig cfg)
    : vocab_(windowing::build_char_vocab(seq)),
      data_(encode_checked(vocab_, seq.chars, cfg)),
      cfg_(cfg),
      schedule_(data_.size(), cfg_.seq_length, cfg_.batch_size),
      params_(LstmParams<float>::random(shape_for(vocab_, cfg_), cfg_.rng_seed, static_cast<float>(cfg_.init_scale))),
      opt_(AdamState<float>::zeros(params_.shape)),
      state_(LstmState<float>::zeros(params_.shape, schedule_.streams())) {}

Trainer::Trainer(windowing::CharVocab vocab, std::vector<int> data, TrainConfig cfg, LstmParams<float> params,
                 AdamState<float> opt, LstmState<float> state, std::int64_t step, std::vector<double> loss_history)
    : vocab_(std::move(vocab)),
      data_(std::move(data)),
      cfg_(cfg),
      schedule_(data_.size(), cfg_.seq_length, cfg_.batch_size),
      params_(std::move(params)),
      opt_(std::move(opt)),
      state_(std::move(state)),
      step_(step),
      loss_history_(std::move(loss_history)) {
  cfg_.validate();
  if (!(params_.shape == shape_for(vocab_, cfg_))) throw std::invalid_argument("checkpoint shape mismatch");
  if (state_.streams() != schedule_.streams()) throw std::invalid_argument("checkpoint state stream count mismatch");
}

std::int64_t Trainer::total_steps() const {
  return static_cast<std::int64_t>(cfg_.epochs) * schedule_.windows_per_epoch();
}

int Trainer::epoch() const { return static_cast<int>(step_ / schedule_.windows_per_epoch()); }

double Trainer::step() {
  const int w = static_cast<int>(step_ % schedule_.windows_per_epoch());
  if (w == 0) state_ = LstmState<float>::zeros(params_.shape, schedule_.streams());
  const auto batch = schedule_.window(data_, w);
  const double l = train_step(params_, batch, opt_, state_, vocab_.eof_index(), cfg_);
  ++step_;
  loss_history_.push_back(l);
  return l;
}

void Trainer::run(std::int64_t max_steps, const std::function<void(const TrainProgress&)>& on_step) {
  const std::int64_t stop = max_steps < 0 ? total_steps() : std::min(total_steps(), max_steps);
  while (step_ < stop) {
    const double l = step();
    if (on_step) on_step({step_, epoch(), l});
  }
}

double Trainer::full_loss() const { return loss<float>(params_, data_, vocab_.eof_index()); }

TrainResult train(const windowing::TrainingSequence& seq, const TrainConfig& cfg) {
  Trainer t(seq, cfg);
  t.run();
  return {t.params(), t.vocab(), t.loss_history()};
}

template void clip_gradients<float>(LstmParams<float>&, float);
template void clip_gradients<double>(LstmParams<double>&, double);
template void adam_update<float>(LstmParams<float>&, const LstmParams<float>&, AdamState<float>&, const TrainConfig&);
template void adam_update<double>(LstmParams<double>&, const LstmParams<double>&, AdamState<double>&,
                                  const TrainConfig&);
template float train_step<float>(LstmParams<float>&, const SequenceBatch&, AdamState<float>&, LstmState<float>&, int,
                                 const TrainConfig&);
template double train_step<double>(LstmParams<double>&, const SequenceBatch&, AdamState<double>&, LstmState<double>&,
                                   int, const TrainConfig&);

}  // namespace synthdoc::lstm
