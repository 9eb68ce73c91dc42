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
#ifndef RNNACCEL_LOADABLE_HPP_
#define RNNACCEL_LOADABLE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rnnaccel/activation.hpp"
#include "rnnaccel/codec.hpp"
#include "rnnaccel/fxp.hpp"

namespace rnnaccel::model {

// Model ingestion and compilation. A JSON manifest plus raw float32 weight
// files go in; a self-contained binary loadable comes out. The loadable is
// little-endian and versioned; see README for the byte-exact layout.

enum class LayerType : std::uint8_t { fc = 0, lstm = 1, gru = 2 };
enum class ExecMode : std::uint8_t { batch = 0, streaming = 1 };

const char* layer_type_name(LayerType t);
int gate_count(LayerType t);  // FC 1, GRU 3 (z,r,h~), LSTM 4 (i,f,g,o)

struct ManifestLayer {
  LayerType type = LayerType::fc;
  std::uint32_t input_dim = 0;
  std::uint32_t output_dim = 0;
  act::Kind activation = act::Kind::identity;  // FC only
  // One fused matrix per gate: output_dim x (input_dim [+ output_dim for
  // recurrent layers]), input columns first. One bias vector per gate.
  std::vector<std::string> weight_files;
  std::vector<std::string> bias_files;
};

struct Manifest {
  std::string network;
  std::vector<ManifestLayer> layers;
  std::uint32_t seq_len = 1;
  ExecMode exec_mode = ExecMode::batch;
  int weight_bits = 8;      // 8 or 16
  int compression_b = 0;    // 0 = none, else 2/4/6
  std::filesystem::path base_dir;  // weight file paths resolve against this
};

// Parse + validate. File references are checked to exist with byte length
// 4*rows*cols unless check_files is false (in-memory compilation paths).
Manifest parse_manifest(const std::string& json_text,
                        const std::filesystem::path& base_dir,
                        bool check_files = true);
Manifest parse_manifest_file(const std::filesystem::path& path);

// Closed-form: FC o*i+o; GRU 3*(h*(h+i)+h); LSTM 4*(h*(h+i)+h).
std::uint64_t parameter_count(const Manifest& m);

// Per-layer real-valued gate data in gate order (fused matrices row-major).
struct LayerWeights {
  std::vector<std::vector<double>> gates;   // gate_count x (out x fused_cols)
  std::vector<std::vector<double>> biases;  // gate_count x out
};

struct CompiledTensor {
  fxp::QTensor q;                       // decoded integers (weights/biases)
  std::vector<std::uint8_t> stored;     // exact blob-section bytes (re-emit)
  bool compressed = false;
  std::uint8_t kind = 0;                // 0 weight, 1 bias
};

struct CompiledLayer {
  LayerType type = LayerType::fc;
  act::Kind activation = act::Kind::identity;
  std::uint32_t input_dim = 0;
  std::uint32_t output_dim = 0;
  std::vector<CompiledTensor> weights;  // per gate
  std::vector<CompiledTensor> biases;   // per gate
  std::uint32_t fused_cols() const {
    return input_dim + (type == LayerType::fc ? 0 : output_dim);
  }
};

struct CompiledModel {
  std::uint16_t version = 1;
  int weight_bits = 8;
  int compression_b = 0;
  std::uint32_t seq_len = 1;
  ExecMode exec_mode = ExecMode::batch;
  std::vector<CompiledLayer> layers;

  std::uint32_t input_dim() const { return layers.front().input_dim; }
  std::uint32_t output_dim() const { return layers.back().output_dim; }
  std::uint64_t state_bytes() const;  // persistent h/c residency
};

// Reads the referenced weight files (float32 LE row-major).
LayerWeights read_layer_weights(const Manifest& m, std::size_t layer_idx);

// Quantize/compress per manifest and emit loadable bytes. Deterministic:
// identical manifest+weights give identical bytes.
std::vector<std::uint8_t> compile(const Manifest& m);
// Same, with weights supplied in memory (bench profiles, tests).
std::vector<std::uint8_t> compile_from_data(const Manifest& m,
                                            const std::vector<LayerWeights>& data);

// Full validation, then decode (decompressing weight blobs). Distinct error
// codes per failure class; never crashes on arbitrary bytes.
CompiledModel load(std::span<const std::uint8_t> bytes);

// Byte-exact writer from the in-memory form; emit(load(b)) == b.
std::vector<std::uint8_t> emit(const CompiledModel& m);

// Per-tensor exponent summary (CLI output).
struct TensorInfo {
  std::string name;
  std::uint32_t rows, cols;
  int exponent;
  bool compressed;
  std::uint64_t stored_bytes;
};
std::vector<TensorInfo> tensor_summary(const CompiledModel& m);

}  // namespace rnnaccel::model

#endif  // RNNACCEL_LOADABLE_HPP_
