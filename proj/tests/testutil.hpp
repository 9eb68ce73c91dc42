/* Copyright 2026 RNNAccel SDK Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RNNACCEL_TESTS_TESTUTIL_HPP_
#define RNNACCEL_TESTS_TESTUTIL_HPP_

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rnnaccel/loadable.hpp"
#include "rnnaccel/reference.hpp"
#include "rnnaccel/rng.hpp"

namespace testutil {

namespace model = rnnaccel::model;

// Synthetic layer data with fan-in scaled uniform weights.
inline model::LayerWeights synth_layer(rnnaccel::Rng& rng, model::LayerType type,
                                       std::uint32_t in, std::uint32_t out,
                                       double weight_scale = 0.0) {
  const std::uint32_t cols = in + (type == model::LayerType::fc ? 0 : out);
  const double w0 =
      weight_scale > 0.0 ? weight_scale : 1.0 / std::sqrt(static_cast<double>(cols));
  model::LayerWeights lw;
  for (int g = 0; g < model::gate_count(type); ++g) {
    std::vector<double> w(static_cast<std::size_t>(out) * cols);
    for (double& v : w) v = rng.uniform(-w0, w0);
    std::vector<double> b(out);
    for (double& v : b) v = rng.uniform(-0.05, 0.05);
    lw.gates.push_back(std::move(w));
    lw.biases.push_back(std::move(b));
  }
  return lw;
}

inline model::ManifestLayer meta_layer(model::LayerType type, std::uint32_t in,
                                       std::uint32_t out,
                                       rnnaccel::act::Kind activation =
                                           rnnaccel::act::Kind::identity) {
  model::ManifestLayer l;
  l.type = type;
  l.input_dim = in;
  l.output_dim = out;
  l.activation = activation;
  const auto gates = static_cast<std::size_t>(model::gate_count(type));
  l.weight_files.assign(gates, "synthetic");
  l.bias_files.assign(gates, "synthetic");
  return l;
}

struct SynthModel {
  model::Manifest manifest;
  std::vector<model::LayerWeights> data;
};

// Random small recurrent net: one GRU or LSTM plus an identity FC head.
inline SynthModel random_small_net(std::uint64_t seed, bool lstm) {
  rnnaccel::Rng rng(seed);
  const auto in = static_cast<std::uint32_t>(rng.uniform_int(1, 8));
  const auto hidden = static_cast<std::uint32_t>(rng.uniform_int(1, 8));
  const auto out = static_cast<std::uint32_t>(rng.uniform_int(1, 8));
  const auto seq = static_cast<std::uint32_t>(rng.uniform_int(1, 4));
  SynthModel s;
  s.manifest.network = lstm ? "tiny-lstm" : "tiny-gru";
  s.manifest.seq_len = seq;
  s.manifest.exec_mode = model::ExecMode::streaming;
  s.manifest.weight_bits = 8;
  s.manifest.compression_b = 0;
  const auto rec = lstm ? model::LayerType::lstm : model::LayerType::gru;
  s.manifest.layers.push_back(meta_layer(rec, in, hidden));
  s.manifest.layers.push_back(meta_layer(model::LayerType::fc, hidden, out));
  s.data.push_back(synth_layer(rng, rec, in, hidden));
  s.data.push_back(synth_layer(rng, model::LayerType::fc, hidden, out));
  return s;
}

// All-constant layer data (zero weights unless filled by the caller).
inline model::LayerWeights zero_layer(model::LayerType type, std::uint32_t in,
                                      std::uint32_t out) {
  const std::uint32_t cols = in + (type == model::LayerType::fc ? 0 : out);
  model::LayerWeights lw;
  for (int g = 0; g < model::gate_count(type); ++g) {
    lw.gates.emplace_back(static_cast<std::size_t>(out) * cols, 0.0);
    lw.biases.emplace_back(out, 0.0);
  }
  return lw;
}

inline std::vector<std::int16_t> random_q14(std::uint64_t seed, std::size_t n) {
  rnnaccel::Rng rng(seed);
  std::vector<std::int16_t> v(n);
  for (auto& x : v)
    x = static_cast<std::int16_t>(
        rnnaccel::fxp::round_half_even(rng.uniform(-1.0, 1.0) * 16384.0));
  return v;
}

// Scratch directory under the build tree.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("rnnaccel_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

inline void write_f32_file(const std::filesystem::path& path,
                           const std::vector<double>& vals) {
  std::ofstream os(path, std::ios::binary);
  for (double v : vals) {
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    const std::uint8_t b[4] = {
        static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(u >> 8),
        static_cast<std::uint8_t>(u >> 16), static_cast<std::uint8_t>(u >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
}

// On-disk KWS fixture: GRU(10->154) + FC(154->12), manifest + weight files.
inline std::filesystem::path write_kws_fixture(const TempDir& dir,
                                               std::uint64_t seed = 99) {
  rnnaccel::Rng rng(seed);
  const std::uint32_t h = 154, in = 10, out = 12, cols = h + in;
  auto uniform_vec = [&](std::size_t n, double s) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-s, s);
    return v;
  };
  const double ws = 1.0 / std::sqrt(static_cast<double>(cols));
  for (const char* g : {"z", "r", "h"}) {
    write_f32_file(dir.path() / (std::string("w") + g + ".bin"),
                   uniform_vec(static_cast<std::size_t>(h) * cols, ws));
    write_f32_file(dir.path() / (std::string("b") + g + ".bin"),
                   uniform_vec(h, 0.05));
  }
  write_f32_file(dir.path() / "fc_w.bin",
                 uniform_vec(static_cast<std::size_t>(out) * h,
                             1.0 / std::sqrt(static_cast<double>(h))));
  write_f32_file(dir.path() / "fc_b.bin", uniform_vec(out, 0.05));
  const std::string manifest = R"({
  "network": "kws-gru",
  "seq_len": 10,
  "exec_mode": "streaming",
  "weight_bits": 8,
  "compression": "none",
  "layers": [
    {"type": "GRU", "input_dim": 10, "output_dim": 154,
     "weights": ["wz.bin", "wr.bin", "wh.bin"],
     "bias": ["bz.bin", "br.bin", "bh.bin"]},
    {"type": "FC", "input_dim": 154, "output_dim": 12, "activation": "identity",
     "weights": ["fc_w.bin"], "bias": ["fc_b.bin"]}
  ]
})";
  const auto path = dir.path() / "manifest.json";
  write_text(path, manifest);
  return path;
}

}  // namespace testutil

#endif  // RNNACCEL_TESTS_TESTUTIL_HPP_
