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

#include "synthdoc/lstm/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace synthdoc::lstm {

GradCheckReport gradient_check(const LstmParams<double>& params, std::span<const int> sequence, double eps,
                               int reset_index, const GradientFn& grad_fn) {
  LstmParams<double> analytic;
  if (grad_fn)
    grad_fn(params, sequence, analytic);
  else
    loss_and_gradient<double>(params, sequence, reset_index, analytic);

  GradCheckReport report;
  // The finite-difference oracle runs in extended precision so its roundoff
  // (~u * |loss| / eps) stays far below the smallest gradient entries.
  using Wide = long double;
  LstmParams<Wide> probe = params.cast<Wide>();

  std::vector<Matrix<Wide>*> probe_blocks;
  probe.for_each_block([&](const std::string&, Matrix<Wide>& m) { probe_blocks.push_back(&m); });
  std::size_t k = 0;
  analytic.for_each_block([&](const std::string& name, const Matrix<double>& g) {
    Matrix<Wide>& w = *probe_blocks[k++];
    double block_max = 0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const Wide saved = w(i, j);
        const Wide step = static_cast<Wide>(eps);
        w(i, j) = saved + step;
        const Wide up = loss<Wide>(probe, sequence, reset_index);
        w(i, j) = saved - step;
        const Wide down = loss<Wide>(probe, sequence, reset_index);
        w(i, j) = saved;
        const double numeric = static_cast<double>((up - down) / (2 * step));
        const double a = g(i, j);
        const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
        ++report.checked;
        block_max = std::max(block_max, err);
        if (err > report.max_relative_error) {
          report.max_relative_error = err;
          report.worst_block = name;
          report.worst_row = i;
          report.worst_col = j;
        }
      }
    }
    report.block_max_error[name] = block_max;
    if (g.isZero(0)) report.zero_blocks.push_back(name);
  });
  return report;
}

}  // namespace synthdoc::lstm
