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

#include "synthdoc/lstm/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace synthdoc::lstm {

namespace {

template <typename Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& z) {
  using S = typename Derived::Scalar;
  return z.unaryExpr([](S v) { return S(1) / (S(1) + std::exp(-v)); });
}

template <typename Derived>
auto tanh_of(const Eigen::MatrixBase<Derived>& z) {
  using S = typename Derived::Scalar;
  return z.unaryExpr([](S v) { return std::tanh(v); });
}

template <typename Scalar>
void check_state(const LstmParams<Scalar>& params, const LstmState<Scalar>& state, int streams) {
  const auto& sh = params.shape;
  if (static_cast<int>(state.h.size()) != sh.layers || static_cast<int>(state.c.size()) != sh.layers)
    throw std::invalid_argument("state layer count does not match params");
  for (int l = 0; l < sh.layers; ++l) {
    if (state.h[l].rows() != sh.hidden || state.c[l].rows() != sh.hidden || state.h[l].cols() != streams ||
        state.c[l].cols() != streams)
      throw std::invalid_argument("state dimensions do not match params");
  }
}

// Activations of one layer at one step, kept for the backward pass.
template <typename Scalar>
struct LayerCache {
  Matrix<Scalar> x;       // in_dim x B
  Matrix<Scalar> h_prev;  // after any reset
  Matrix<Scalar> c_prev;
  Matrix<Scalar> i, f, o, g;
  Matrix<Scalar> c, tc, h;
};

template <typename Scalar>
void layer_forward(const LayerParams<Scalar>& lp, int H, LayerCache<Scalar>& k) {
  Matrix<Scalar> z = lp.W * k.x + lp.U * k.h_prev;
  z.colwise() += lp.b.col(0);
  k.i = sigmoid(z.topRows(H));
  k.f = sigmoid(z.middleRows(H, H));
  k.o = sigmoid(z.middleRows(2 * H, H));
  k.g = tanh_of(z.bottomRows(H));
  k.c = k.f.cwiseProduct(k.c_prev) + k.i.cwiseProduct(k.g);
  k.tc = tanh_of(k.c);
  k.h = k.o.cwiseProduct(k.tc);
}

}  // namespace

template <typename Scalar>
Vector<Scalar> softmax(const Vector<Scalar>& logits, Scalar temperature) {
  if (!(temperature > Scalar(0))) throw std::invalid_argument("temperature must be > 0");
  Vector<Scalar> z = logits / temperature;
  z.array() -= z.maxCoeff();
  z = z.array().exp().matrix();
  return z / z.sum();
}

template <typename Scalar>
StepOutput<Scalar> forward_step(const LstmParams<Scalar>& params, int char_index, const LstmState<Scalar>& state) {
  const auto& sh = params.shape;
  if (char_index < 0 || char_index >= sh.vocab)
    throw std::invalid_argument("character index " + std::to_string(char_index) + " out of range");
  check_state(params, state, 1);

  StepOutput<Scalar> out;
  out.state = state;
  LayerCache<Scalar> k;
  k.x = params.embedding.row(char_index).transpose();
  for (int l = 0; l < sh.layers; ++l) {
    k.h_prev = state.h[l];
    k.c_prev = state.c[l];
    layer_forward(params.layers[l], sh.hidden, k);
    out.state.h[l] = k.h;
    out.state.c[l] = k.c;
    k.x = k.h;
  }
  out.logits = params.out_w * k.x.col(0) + params.out_b.col(0);
  return out;
}

template <typename Scalar>
Scalar forward_backward(const LstmParams<Scalar>& params, const SequenceBatch& batch, const LstmState<Scalar>& state,
                        int reset_index, LstmParams<Scalar>* grads, LstmState<Scalar>* state_out) {
  const auto& sh = params.shape;
  const int T = batch.steps();
  const int B = batch.streams();
  const int H = sh.hidden;
  const int L = sh.layers;
  if (T < 1 || B < 1) throw std::invalid_argument("empty batch");
  if (batch.targets.rows() != T || batch.targets.cols() != B)
    throw std::invalid_argument("targets shape does not match inputs");
  if ((batch.inputs.array() < 0).any() || (batch.inputs.array() >= sh.vocab).any() ||
      (batch.targets.array() < 0).any() || (batch.targets.array() >= sh.vocab).any())
    throw std::invalid_argument("symbol index out of range");
  check_state(params, state, B);

  std::vector<std::vector<LayerCache<Scalar>>> cache(static_cast<std::size_t>(T),
                                                     std::vector<LayerCache<Scalar>>(static_cast<std::size_t>(L)));
  std::vector<Matrix<Scalar>> probs(static_cast<std::size_t>(T));
  LstmState<Scalar> cur = state;
  const Scalar norm = Scalar(1) / static_cast<Scalar>(T * B);
  Scalar total = 0;

  for (int t = 0; t < T; ++t) {
    Matrix<Scalar> x(sh.embed, B);
    for (int b = 0; b < B; ++b) x.col(b) = params.embedding.row(batch.inputs(t, b)).transpose();
    for (int l = 0; l < L; ++l) {
      auto& k = cache[t][l];
      k.x = std::move(x);
      k.h_prev = cur.h[l];
      k.c_prev = cur.c[l];
      layer_forward(params.layers[l], H, k);
      cur.h[l] = k.h;
      cur.c[l] = k.c;
      x = k.h;
    }
    Matrix<Scalar> logits = params.out_w * x;
    logits.colwise() += params.out_b.col(0);
    auto& p = probs[t];
    p.resize(sh.vocab, B);
    for (int b = 0; b < B; ++b) {
      const Scalar m = logits.col(b).maxCoeff();
      auto e = (logits.col(b).array() - m).exp();
      const Scalar sum = e.sum();
      p.col(b) = (e / sum).matrix();
      total -= logits(batch.targets(t, b), b) - m - std::log(sum);
    }
    if (reset_index >= 0)
      for (int b = 0; b < B; ++b)
        if (batch.inputs(t, b) == reset_index) cur.reset_stream(b);
  }
  if (state_out) *state_out = cur;
  const Scalar mean_loss = total * norm;
  if (!grads) return mean_loss;

  *grads = LstmParams<Scalar>::zeros(sh);
  auto& gr = *grads;
  std::vector<Matrix<Scalar>> dh_next(L, Matrix<Scalar>::Zero(H, B));
  std::vector<Matrix<Scalar>> dc_next(L, Matrix<Scalar>::Zero(H, B));

  for (int t = T - 1; t >= 0; --t) {
    Matrix<Scalar> dlogits = probs[t];
    for (int b = 0; b < B; ++b) dlogits(batch.targets(t, b), b) -= Scalar(1);
    dlogits *= norm;

    const auto& top = cache[t][L - 1];
    gr.out_w.noalias() += dlogits * top.h.transpose();
    gr.out_b.col(0) += dlogits.rowwise().sum();
    Matrix<Scalar> dh_above = params.out_w.transpose() * dlogits;

    for (int l = L - 1; l >= 0; --l) {
      const auto& k = cache[t][l];
      const auto& lp = params.layers[l];
      Matrix<Scalar> dh = dh_above + dh_next[l];
      Matrix<Scalar> dc = dh.cwiseProduct(k.o).cwiseProduct((Scalar(1) - k.tc.array().square()).matrix()) + dc_next[l];

      Matrix<Scalar> dz(4 * H, B);
      dz.topRows(H) = dc.cwiseProduct(k.g).cwiseProduct(k.i.cwiseProduct((Scalar(1) - k.i.array()).matrix()));
      dz.middleRows(H, H) =
          dc.cwiseProduct(k.c_prev).cwiseProduct(k.f.cwiseProduct((Scalar(1) - k.f.array()).matrix()));
      dz.middleRows(2 * H, H) =
          dh.cwiseProduct(k.tc).cwiseProduct(k.o.cwiseProduct((Scalar(1) - k.o.array()).matrix()));
      dz.bottomRows(H) = dc.cwiseProduct(k.i).cwiseProduct((Scalar(1) - k.g.array().square()).matrix());

      auto& gl = gr.layers[l];
      gl.W.noalias() += dz * k.x.transpose();
      gl.U.noalias() += dz * k.h_prev.transpose();
      gl.b.col(0) += dz.rowwise().sum();

      dh_next[l].noalias() = lp.U.transpose() * dz;
      dc_next[l] = dc.cwiseProduct(k.f);
      dh_above = lp.W.transpose() * dz;
    }
    for (int b = 0; b < B; ++b) gr.embedding.row(batch.inputs(t, b)) += dh_above.col(b).transpose();

    // The state entering step t was zeroed for streams that consumed a reset symbol at t-1.
    if (reset_index >= 0 && t > 0)
      for (int b = 0; b < B; ++b)
        if (batch.inputs(t - 1, b) == reset_index)
          for (int l = 0; l < L; ++l) {
            dh_next[l].col(b).setZero();
            dc_next[l].col(b).setZero();
          }
  }
  return mean_loss;
}

SequenceBatch single_stream_batch(std::span<const int> sequence) {
  if (sequence.size() < 2) throw std::invalid_argument("loss needs a sequence of at least 2 symbols");
  const auto T = static_cast<Eigen::Index>(sequence.size() - 1);
  SequenceBatch b{IndexMatrix(T, 1), IndexMatrix(T, 1)};
  for (Eigen::Index t = 0; t < T; ++t) {
    b.inputs(t, 0) = sequence[static_cast<std::size_t>(t)];
    b.targets(t, 0) = sequence[static_cast<std::size_t>(t) + 1];
  }
  return b;
}

template <typename Scalar>
Scalar loss(const LstmParams<Scalar>& params, std::span<const int> sequence, int reset_index) {
  return forward_backward<Scalar>(params, single_stream_batch(sequence), LstmState<Scalar>::zeros(params.shape),
                                  reset_index, nullptr);
}

template <typename Scalar>
Scalar loss_and_gradient(const LstmParams<Scalar>& params, std::span<const int> sequence, int reset_index,
                         LstmParams<Scalar>& grads) {
  return forward_backward<Scalar>(params, single_stream_batch(sequence), LstmState<Scalar>::zeros(params.shape),
                                  reset_index, &grads);
}

#define SYNTHDOC_INSTANTIATE(S)                                                                                  \
  template Vector<S> softmax<S>(const Vector<S>&, S);                                                            \
  template StepOutput<S> forward_step<S>(const LstmParams<S>&, int, const LstmState<S>&);                       \
  template S forward_backward<S>(const LstmParams<S>&, const SequenceBatch&, const LstmState<S>&, int,          \
                                 LstmParams<S>*, LstmState<S>*);                                                 \
  template S loss<S>(const LstmParams<S>&, std::span<const int>, int);                                           \
  template S loss_and_gradient<S>(const LstmParams<S>&, std::span<const int>, int, LstmParams<S>&);

SYNTHDOC_INSTANTIATE(float)
SYNTHDOC_INSTANTIATE(double)
SYNTHDOC_INSTANTIATE(long double)

#undef SYNTHDOC_INSTANTIATE

}  // namespace synthdoc::lstm
