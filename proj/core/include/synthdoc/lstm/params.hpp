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

#ifndef SYNTHDOC_LSTM_PARAMS_HPP_
#define SYNTHDOC_LSTM_PARAMS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace synthdoc::lstm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct LstmShape {
  int vocab = 0;
  int embed = 0;
  int hidden = 0;
  int layers = 0;

  void validate() const;
  int input_dim(int layer) const { return layer == 0 ? embed : hidden; }
  bool operator==(const LstmShape&) const = default;
};

/// One recurrent layer. Gate rows are stacked as [input; forget; output; candidate],
/// each block `hidden` rows tall.
template <typename Scalar>
struct LayerParams {
  Matrix<Scalar> W;  // 4H x in_dim
  Matrix<Scalar> U;  // 4H x H
  Matrix<Scalar> b;  // 4H x 1
};

/// All learnable weights. Also used as the container for gradients and
/// optimizer moments, which share its layout.
template <typename Scalar>
struct LstmParams {
  LstmShape shape;
  Matrix<Scalar> embedding;  // vocab x embed
  std::vector<LayerParams<Scalar>> layers;
  Matrix<Scalar> out_w;  // vocab x H
  Matrix<Scalar> out_b;  // vocab x 1

  static LstmParams zeros(const LstmShape& shape);
  /// Entries drawn uniformly from [-scale, scale].
  static LstmParams random(const LstmShape& shape, std::uint64_t seed, Scalar scale = Scalar(0.08));

  /// Visits every parameter block in a fixed order with a stable name
  /// ("embedding", "layer1.W", ..., "output.W", "output.b").
  template <typename F>
  void for_each_block(F&& f) {
    f(std::string("embedding"), embedding);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto p = "layer" + std::to_string(l + 1) + ".";
      f(p + "W", layers[l].W);
      f(p + "U", layers[l].U);
      f(p + "b", layers[l].b);
    }
    f(std::string("output.W"), out_w);
    f(std::string("output.b"), out_b);
  }
  template <typename F>
  void for_each_block(F&& f) const {
    const_cast<LstmParams*>(this)->for_each_block(
        [&](const std::string& name, Matrix<Scalar>& m) { f(name, static_cast<const Matrix<Scalar>&>(m)); });
  }

  std::size_t parameter_count() const;
  bool all_finite() const;
  void set_zero();

  template <typename To>
  LstmParams<To> cast() const {
    LstmParams<To> out;
    out.shape = shape;
    out.embedding = embedding.template cast<To>();
    for (const auto& l : layers)
      out.layers.push_back({l.W.template cast<To>(), l.U.template cast<To>(), l.b.template cast<To>()});
    out.out_w = out_w.template cast<To>();
    out.out_b = out_b.template cast<To>();
    return out;
  }
};

/// Per-layer recurrent state, one column per stream.
template <typename Scalar>
struct LstmState {
  std::vector<Matrix<Scalar>> h;  // H x streams
  std::vector<Matrix<Scalar>> c;

  static LstmState zeros(const LstmShape& shape, int streams = 1);
  int streams() const { return h.empty() ? 0 : static_cast<int>(h.front().cols()); }
  void reset_stream(int column);
  bool operator==(const LstmState& o) const { return h == o.h && c == o.c; }
};

}  // namespace synthdoc::lstm

#endif  // SYNTHDOC_LSTM_PARAMS_HPP_
