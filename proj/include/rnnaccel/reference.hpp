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
#ifndef RNNACCEL_REFERENCE_HPP_
#define RNNACCEL_REFERENCE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rnnaccel/engine.hpp"
#include "rnnaccel/loadable.hpp"

namespace rnnaccel::ref {

// Double-precision oracle with the exact gate conventions of the engine
// (GRU h' = (1-z)(.)h~ + z(.)h; LSTM i,f,g,o with c' = f(.)c + i(.)g), but no
// fixed-point rounding and no Q2.13 cell clip: clip-induced divergence is a
// real fidelity cost and must show up in validation error.

inline constexpr double kDefaultTolerance = 0.01;

struct FloatLayer {
  model::LayerType type = model::LayerType::fc;
  act::Kind activation = act::Kind::identity;
  std::uint32_t input_dim = 0;
  std::uint32_t output_dim = 0;
  std::vector<std::vector<double>> gates;   // fused matrices, row-major
  std::vector<std::vector<double>> biases;  // per gate
};

struct FloatModel {
  std::vector<FloatLayer> layers;
  std::uint32_t seq_len = 1;
  model::ExecMode exec_mode = model::ExecMode::batch;
};

FloatModel from_manifest(const model::Manifest& m);
FloatModel from_data(const model::Manifest& m,
                     const std::vector<model::LayerWeights>& data);
// Dequantized view of a compiled model (weights-only quantization oracle).
FloatModel from_compiled(const model::CompiledModel& m);

struct ForwardResult {
  // Emitted outputs, matching engine semantics: streaming (or FC-only) one
  // row per timestep, batch a single row.
  std::vector<std::vector<double>> outputs;
  // Per-layer output trajectory: [layer][step][element].
  std::vector<std::vector<std::vector<double>>> layer_traj;
};

// Optional warm start (convention-lock tests): per-layer initial h and c,
// empty vectors for layers without that state.
struct InitialState {
  std::vector<std::vector<double>> h;
  std::vector<std::vector<double>> c;
};

// inputs = T x input_dim, row-major. Throws Errc::non_finite if any
// intermediate diverges.
ForwardResult forward(const FloatModel& m, std::span<const double> inputs,
                      const InitialState* init = nullptr);

struct LayerError {
  std::string name;
  double max_abs_err = 0.0;
  double rms_err = 0.0;
};

struct ValidationReport {
  bool pass = false;
  double tolerance = kDefaultTolerance;
  double final_max_abs_err = 0.0;
  double final_rms_err = 0.0;
  std::uint64_t elements_compared = 0;
  std::vector<LayerError> layers;
  // Worst final-output deviation location.
  std::size_t worst_step = 0;
  std::size_t worst_index = 0;
};

// Runs engine and oracle on the same input (engine input Q1.14; the oracle
// consumes its exact dequantization) and compares dequantized trajectories.
// pass == (final_max_abs_err <= tolerance). Deterministic.
ValidationReport validate(const model::CompiledModel& compiled,
                          const FloatModel& oracle,
                          std::span<const std::int16_t> input_q14,
                          const engine::EngineConfig& cfg,
                          double tolerance = kDefaultTolerance);

}  // namespace rnnaccel::ref

#endif  // RNNACCEL_REFERENCE_HPP_
