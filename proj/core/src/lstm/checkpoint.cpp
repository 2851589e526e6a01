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

#include "synthdoc/lstm/checkpoint.hpp"

#include <fstream>

#include "json.hpp"

namespace synthdoc::lstm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kFormat = "synthdoc-lstm-checkpoint";
constexpr int kVersion = 1;

json matrix_to_json(const Matrix<float>& m) {
  std::vector<float> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

void matrix_from_json(const json& j, Matrix<float>& m, const std::string& name) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  if (rows != m.rows() || cols != m.cols()) throw std::runtime_error("checkpoint block " + name + " has wrong shape");
  const auto& data = j.at("data");
  if (data.size() != static_cast<std::size_t>(rows * cols))
    throw std::runtime_error("checkpoint block " + name + " has wrong length");
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = data[k++].get<float>();
}

json params_to_json(const LstmParams<float>& p) {
  json j = json::object();
  p.for_each_block([&](const std::string& name, const Matrix<float>& m) { j[name] = matrix_to_json(m); });
  return j;
}

LstmParams<float> params_from_json(const json& j, const LstmShape& shape) {
  auto p = LstmParams<float>::zeros(shape);
  p.for_each_block([&](const std::string& name, Matrix<float>& m) { matrix_from_json(j.at(name), m, name); });
  return p;
}

json config_to_json(const TrainConfig& c) {
  return {{"layers", c.layers},         {"hidden", c.hidden},         {"embed_dim", c.embed_dim},
          {"seq_length", c.seq_length}, {"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
          {"beta1", c.beta1},           {"beta2", c.beta2},           {"epsilon", c.epsilon},
          {"grad_clip", c.grad_clip},   {"epochs", c.epochs},         {"rng_seed", c.rng_seed},
          {"init_scale", c.init_scale}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.layers = j.at("layers");
  c.hidden = j.at("hidden");
  c.embed_dim = j.at("embed_dim");
  c.seq_length = j.at("seq_length");
  c.batch_size = j.at("batch_size");
  c.learning_rate = j.at("learning_rate");
  c.beta1 = j.at("beta1");
  c.beta2 = j.at("beta2");
  c.epsilon = j.at("epsilon");
  c.grad_clip = j.at("grad_clip");
  c.epochs = j.at("epochs");
  c.rng_seed = j.at("rng_seed");
  c.init_scale = j.at("init_scale");
  return c;
}

json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open checkpoint " + file.string());
  auto j = json::parse(in);
  if (j.value("format", "") != kFormat) throw std::runtime_error(file.string() + " is not a synthdoc checkpoint");
  if (j.at("version").get<int>() != kVersion) throw std::runtime_error("unsupported checkpoint version");
  if (j.at("precision").get<std::string>() != "float32") throw std::runtime_error("unsupported checkpoint precision");
  return j;
}

LstmShape shape_from_json(const json& s) {
  LstmShape shape{s.at("vocab"), s.at("embed"), s.at("hidden"), s.at("layers")};
  shape.validate();
  return shape;
}

windowing::CharVocab vocab_from_json(const json& j) {
  std::vector<char> symbols;
  for (const auto& v : j) symbols.push_back(static_cast<char>(v.get<int>()));
  return windowing::CharVocab(std::move(symbols));
}

}  // namespace

std::uint64_t fnv1a(std::span<const int> data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (int v : data) {
    for (int b = 0; b < 4; ++b) {
      h ^= static_cast<std::uint64_t>((static_cast<unsigned>(v) >> (8 * b)) & 0xFFu);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

void save_checkpoint(const Trainer& trainer, const fs::path& file) {
  const auto& p = trainer.params();
  json vocab = json::array();
  for (char c : trainer.vocab().symbols()) vocab.push_back(static_cast<int>(static_cast<unsigned char>(c)));
  json h = json::array(), c = json::array();
  for (const auto& m : trainer.carried_state().h) h.push_back(matrix_to_json(m));
  for (const auto& m : trainer.carried_state().c) c.push_back(matrix_to_json(m));

  const json j{{"format", kFormat},
               {"version", kVersion},
               {"precision", "float32"},
               {"shape",
                {{"vocab", p.shape.vocab}, {"embed", p.shape.embed}, {"hidden", p.shape.hidden},
                 {"layers", p.shape.layers}}},
               {"vocab", vocab},
               {"config", config_to_json(trainer.config())},
               {"step", trainer.steps_done()},
               {"data_size", trainer.data().size()},
               {"data_fnv1a", fnv1a(trainer.data())},
               {"params", params_to_json(p)},
               {"adam", {{"m", params_to_json(trainer.optimizer().m)},
                         {"v", params_to_json(trainer.optimizer().v)},
                         {"t", trainer.optimizer().t}}},
               {"state", {{"h", h}, {"c", c}}},
               {"loss_history", trainer.loss_history()}};

  // Write-then-rename so an interrupted save never leaves a torn checkpoint.
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << j.dump();
  }
  fs::rename(tmp, file);
}

ModelCheckpoint load_model(const fs::path& file) {
  const auto j = read_json(file);
  const auto shape = shape_from_json(j.at("shape"));
  return {params_from_json(j.at("params"), shape), vocab_from_json(j.at("vocab")), config_from_json(j.at("config")),
          j.at("step").get<std::int64_t>()};
}

Trainer resume_trainer(const fs::path& file, const windowing::TrainingSequence& seq, std::optional<int> epochs_override) {
  const auto j = read_json(file);
  const auto shape = shape_from_json(j.at("shape"));
  auto vocab = vocab_from_json(j.at("vocab"));
  auto cfg = config_from_json(j.at("config"));
  if (epochs_override) cfg.epochs = *epochs_override;
  auto data = vocab.encode(seq.chars);
  if (data.size() != j.at("data_size").get<std::size_t>() || fnv1a(data) != j.at("data_fnv1a").get<std::uint64_t>())
    throw std::runtime_error("training sequence does not match the checkpoint");

  AdamState<float> opt{params_from_json(j.at("adam").at("m"), shape), params_from_json(j.at("adam").at("v"), shape),
                       j.at("adam").at("t").get<std::int64_t>()};
  LstmState<float> state;
  const auto& hs = j.at("state").at("h");
  const auto& cs = j.at("state").at("c");
  for (std::size_t l = 0; l < hs.size(); ++l) {
    Matrix<float> h(hs[l].at("rows").get<Eigen::Index>(), hs[l].at("cols").get<Eigen::Index>());
    Matrix<float> c(h.rows(), h.cols());
    matrix_from_json(hs[l], h, "state.h");
    matrix_from_json(cs[l], c, "state.c");
    state.h.push_back(std::move(h));
    state.c.push_back(std::move(c));
  }
  return Trainer(std::move(vocab), std::move(data), cfg, params_from_json(j.at("params"), shape), std::move(opt),
                 std::move(state), j.at("step").get<std::int64_t>(),
                 j.at("loss_history").get<std::vector<double>>());
}

}  // namespace synthdoc::lstm
