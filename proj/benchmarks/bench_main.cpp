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

#include <benchmark/benchmark.h>

#include <random>

#include "synthdoc/lstm/train.hpp"
#include "synthdoc/windowing.hpp"

using namespace synthdoc;

namespace {

// Args: hidden, layers. Vocabulary sized like an English training text.
void BM_ForwardStep(benchmark::State& st) {
  const int H = static_cast<int>(st.range(0)), L = static_cast<int>(st.range(1));
  const lstm::LstmShape sh{70, H, H, L};
  const auto p = lstm::LstmParams<float>::random(sh, 1);
  auto s = lstm::LstmState<float>::zeros(sh, 1);
  int x = 0;
  for (auto _ : st) {
    auto out = lstm::forward_step(p, x, s);
    s = std::move(out.state);
    x = (x + 7) % 70;
    benchmark::DoNotOptimize(out.logits.data());
  }
  st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_ForwardStep)->Args({64, 1})->Args({128, 2})->Args({512, 3});

// Args: hidden, layers, batch. One seq_length=50 window with BPTT and Adam.
void BM_TrainStep(benchmark::State& st) {
  const int H = static_cast<int>(st.range(0)), L = static_cast<int>(st.range(1)), B = static_cast<int>(st.range(2));
  const lstm::LstmShape sh{70, H, H, L};
  auto p = lstm::LstmParams<float>::random(sh, 2);
  auto opt = lstm::AdamState<float>::zeros(sh);
  auto s = lstm::LstmState<float>::zeros(sh, B);
  std::mt19937 rng(3);
  lstm::SequenceBatch batch{lstm::IndexMatrix(50, B), lstm::IndexMatrix(50, B)};
  for (int t = 0; t < 50; ++t)
    for (int b = 0; b < B; ++b) {
      batch.inputs(t, b) = static_cast<int>(rng() % 69);
      batch.targets(t, b) = static_cast<int>(rng() % 69);
    }
  lstm::TrainConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(lstm::train_step(p, batch, opt, s, 69, cfg));
  st.SetItemsProcessed(st.iterations() * 50 * B);
}
BENCHMARK(BM_TrainStep)->Args({64, 1, 8})->Args({128, 2, 16})->Args({256, 3, 50})->Unit(benchmark::kMillisecond);

// Arg: document length in tokens; a sparse scattering of query matches.
void BM_ExtractWindows(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::mt19937 rng(4);
  std::vector<corpus::Term> doc;
  doc.reserve(n);
  for (std::size_t i = 0; i < n; ++i) doc.push_back(rng() % 200 == 0 ? "storm" : "w" + std::to_string(rng() % 5000));
  const std::set<corpus::Term, std::less<>> q = {"storm", "coast"};
  for (auto _ : st) benchmark::DoNotOptimize(windowing::extract_windows(doc, q, 30));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ExtractWindows)->Range(1 << 10, 1 << 18);

}  // namespace

BENCHMARK_MAIN();
