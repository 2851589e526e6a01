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

// Independent reference implementations used only by tests. None of these
// call into the library code they check; they are deliberately naive.

#ifndef SYNTHDOC_TESTS_ORACLES_HPP_
#define SYNTHDOC_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {

// ---------------------------------------------------------------- tokenizer
// Character class by explicit ranges, no <cctype>.
inline std::vector<std::string> tokens(const std::string& text) {
  std::vector<std::string> out(1);
  for (char ch : text) {
    const bool digit = ch >= '0' && ch <= '9';
    const bool low = ch >= 'a' && ch <= 'z';
    const bool up = ch >= 'A' && ch <= 'Z';
    if (digit || low) out.back() += ch;
    else if (up) out.back() += static_cast<char>(ch - 'A' + 'a');
    else if (!out.back().empty()) out.emplace_back();
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

// Single-pass recount: one flat counter over every token of every text.
inline std::map<std::string, std::uint64_t> recount(const std::vector<std::string>& texts) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : texts)
    for (const auto& w : tokens(t)) counts[w] += 1;
  return counts;
}

// ------------------------------------------------------------------ windows
// Mark every position within `radius` of a match, then read off maximal runs.
inline std::vector<std::pair<std::size_t, std::size_t>> windows(const std::vector<std::string>& doc,
                                                                const std::set<std::string>& query, int radius) {
  const long n = static_cast<long>(doc.size());
  std::vector<char> mark(doc.size(), 0);
  for (long i = 0; i < n; ++i) {
    if (!query.count(doc[static_cast<std::size_t>(i)])) continue;
    for (long j = i - radius; j <= i + radius; ++j)
      if (j >= 0 && j < n) mark[static_cast<std::size_t>(j)] = 1;
  }
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  long i = 0;
  while (i < n) {
    if (!mark[static_cast<std::size_t>(i)]) { ++i; continue; }
    long j = i;
    while (j + 1 < n && mark[static_cast<std::size_t>(j + 1)]) ++j;
    runs.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    i = j + 1;
  }
  return runs;
}

// -------------------------------------------------------------- LSTM, H=2
// Hand-unrolled single step for hidden size 2, one layer, written with
// scalar loops over explicit row indices (gate blocks i, f, o, g).
struct TinyLstm {
  int V = 3, E = 2;
  std::vector<std::vector<double>> emb;  // V x E
  std::vector<std::vector<double>> W;    // 8 x E
  std::vector<std::vector<double>> U;    // 8 x 2
  std::vector<double> b;                 // 8
  std::vector<std::vector<double>> Vo;   // V x 2
  std::vector<double> c;                 // V
};

inline double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct TinyStep {
  std::vector<double> logits;
  double h[2];
  double c[2];
};

inline TinyStep tiny_step(const TinyLstm& m, int x, const double h0[2], const double c0[2]) {
  double z[8];
  for (int r = 0; r < 8; ++r) {
    double acc = m.b[static_cast<std::size_t>(r)];
    for (int k = 0; k < m.E; ++k) acc += m.W[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] * m.emb[static_cast<std::size_t>(x)][static_cast<std::size_t>(k)];
    acc += m.U[static_cast<std::size_t>(r)][0] * h0[0] + m.U[static_cast<std::size_t>(r)][1] * h0[1];
    z[r] = acc;
  }
  TinyStep s;
  for (int u = 0; u < 2; ++u) {
    const double ig = sig(z[0 + u]);
    const double fg = sig(z[2 + u]);
    const double og = sig(z[4 + u]);
    const double gg = std::tanh(z[6 + u]);
    s.c[u] = fg * c0[u] + ig * gg;
    s.h[u] = og * std::tanh(s.c[u]);
  }
  for (int v = 0; v < m.V; ++v)
    s.logits.push_back(m.Vo[static_cast<std::size_t>(v)][0] * s.h[0] + m.Vo[static_cast<std::size_t>(v)][1] * s.h[1] +
                       m.c[static_cast<std::size_t>(v)]);
  return s;
}

// -------------------------------------------------------------------- top-k
// Count, fully sort by (-freq, term), cut at k.
inline std::vector<std::pair<std::string, std::uint64_t>> topk(const std::vector<std::string>& terms, std::size_t k) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : terms) counts[t]++;
  std::vector<std::pair<std::string, std::uint64_t>> all(counts.begin(), counts.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

// ------------------------------------------------------------------ binning
// Round-half-down to the nearest integer rank: 1.5 -> 1, 1.55 -> 2.
inline int bin(double avg) { return std::max(1, static_cast<int>(std::ceil(avg - 0.5))); }

// ------------------------------------------------------------- chi-square
inline double chi_square_stat(const std::vector<long>& observed, const std::vector<double>& expected) {
  double s = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = static_cast<double>(observed[i]) - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

// Upper critical value at significance `alpha` with `dof` degrees of freedom.
inline double chi_square_critical(double dof, double alpha) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

}  // namespace oracle

#endif  // SYNTHDOC_TESTS_ORACLES_HPP_
