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

#include "synthdoc/lstm/params.hpp"

#include <random>
#include <stdexcept>

namespace synthdoc::lstm {

void LstmShape::validate() const {
  if (vocab < 2 || embed < 1 || hidden < 1 || layers < 1)
    throw std::invalid_argument("invalid LSTM shape: vocab=" + std::to_string(vocab) + " embed=" +
                                std::to_string(embed) + " hidden=" + std::to_string(hidden) +
                                " layers=" + std::to_string(layers));
}

template <typename Scalar>
LstmParams<Scalar> LstmParams<Scalar>::zeros(const LstmShape& shape) {
  shape.validate();
  LstmParams p;
  p.shape = shape;
  const int H = shape.hidden;
  p.embedding = Matrix<Scalar>::Zero(shape.vocab, shape.embed);
  for (int l = 0; l < shape.layers; ++l)
    p.layers.push_back({Matrix<Scalar>::Zero(4 * H, shape.input_dim(l)), Matrix<Scalar>::Zero(4 * H, H),
                        Matrix<Scalar>::Zero(4 * H, 1)});
  p.out_w = Matrix<Scalar>::Zero(shape.vocab, H);
  p.out_b = Matrix<Scalar>::Zero(shape.vocab, 1);
  return p;
}

template <typename Scalar>
LstmParams<Scalar> LstmParams<Scalar>::random(const LstmShape& shape, std::uint64_t seed, Scalar scale) {
  auto p = zeros(shape);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  p.for_each_block([&](const std::string&, Matrix<Scalar>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<Scalar>(scale * u(rng));
  });
  return p;
}

template <typename Scalar>
std::size_t LstmParams<Scalar>::parameter_count() const {
  std::size_t n = 0;
  for_each_block([&](const std::string&, const Matrix<Scalar>& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

template <typename Scalar>
bool LstmParams<Scalar>::all_finite() const {
  bool ok = true;
  for_each_block([&](const std::string&, const Matrix<Scalar>& m) { ok = ok && m.allFinite(); });
  return ok;
}

template <typename Scalar>
void LstmParams<Scalar>::set_zero() {
  for_each_block([](const std::string&, Matrix<Scalar>& m) { m.setZero(); });
}

template <typename Scalar>
LstmState<Scalar> LstmState<Scalar>::zeros(const LstmShape& shape, int streams) {
  LstmState s;
  for (int l = 0; l < shape.layers; ++l) {
    s.h.push_back(Matrix<Scalar>::Zero(shape.hidden, streams));
    s.c.push_back(Matrix<Scalar>::Zero(shape.hidden, streams));
  }
  return s;
}

template <typename Scalar>
void LstmState<Scalar>::reset_stream(int column) {
  for (auto& m : h) m.col(column).setZero();
  for (auto& m : c) m.col(column).setZero();
}

template struct LstmParams<float>;
template struct LstmParams<double>;
template struct LstmState<float>;
template struct LstmState<double>;
template struct LstmParams<long double>;
template struct LstmState<long double>;

}  // namespace synthdoc::lstm
