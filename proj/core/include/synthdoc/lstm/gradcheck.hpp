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

#ifndef SYNTHDOC_LSTM_GRADCHECK_HPP_
#define SYNTHDOC_LSTM_GRADCHECK_HPP_

#include <functional>
#include <map>
#include <span>
#include <string>

#include "synthdoc/lstm/model.hpp"

namespace synthdoc::lstm {

/// Computes loss and analytic gradient for a sequence.
using GradientFn = std::function<double(const LstmParams<double>&, std::span<const int>, LstmParams<double>&)>;

struct GradCheckReport {
  double max_relative_error = 0;
  std::string worst_block;
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
  std::map<std::string, double> block_max_error;
  /// Blocks whose analytic gradient is identically zero.
  std::vector<std::string> zero_blocks;
  std::size_t checked = 0;
};

/// Compares `grad_fn` (backpropagation by default) against central finite
/// differences of the loss on every parameter, evaluated in long double.
/// Per entry the error is
/// |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport gradient_check(const LstmParams<double>& params, std::span<const int> sequence, double eps = 1e-5,
                               int reset_index = -1, const GradientFn& grad_fn = {});

}  // namespace synthdoc::lstm

#endif  // SYNTHDOC_LSTM_GRADCHECK_HPP_
