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
#ifndef RNNACCEL_BENCH_HPP_
#define RNNACCEL_BENCH_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rnnaccel/engine.hpp"
#include "rnnaccel/loadable.hpp"
#include "rnnaccel/reference.hpp"

namespace rnnaccel::bench {

// Benchmark profiles with seeded synthetic weights (performance numbers are
// weight-independent; accuracy columns are validation errors vs the oracle).
//
//   kws-gru      GRU(10 -> 154) + FC(154 -> 12, identity), streaming, 10
//                frames per sequence; 78090 parameters.
//   afib-bilstm  forward + backward LSTM(1 -> 69) over a 32-sample window
//                plus FC(138 -> 2); 39470 parameters. The published topology
//                gives only the parameter count, so this profile is a
//                synthetic stand-in of matching size.

inline constexpr std::uint64_t kDefaultSeed = 20260101;

struct SynthSpec {
  model::Manifest manifest;                 // check_files-free topology
  std::vector<model::LayerWeights> data;    // synthetic float weights
};

SynthSpec make_kws(std::uint64_t seed);
SynthSpec make_afib_lstm(std::uint64_t seed, bool backward);
SynthSpec make_afib_head(std::uint64_t seed);  // FC(138 -> 2)

// Seeded Q1.14 input frames, uniform in [-1, 1].
std::vector<std::int16_t> random_input_q14(std::uint64_t seed, std::size_t count);

struct ModeRow {
  std::string mode;  // none | 5.3x | 8x | 16x
  int b = 0;
  double cycles_per_inference = 0.0;
  double utilization = 0.0;
  double inferences_per_second = 0.0;
  std::uint64_t weight_bytes_per_inference = 0;
  double nominal_ratio = 1.0;
  double actual_ratio = 1.0;
  double val_max_err = 0.0;
};

struct BenchResult {
  std::string profile;
  std::uint64_t params = 0;
  std::uint32_t n_macs = 32;
  double clock_mhz = 250.0;
  double peak_gops = 0.0;
  bool synthetic_standin = false;
  std::vector<ModeRow> rows;
};

// modes: compression b per row, 0 = uncompressed.
BenchResult run_kws(const engine::EngineConfig& cfg, std::span<const int> modes,
                    std::uint64_t seed = kDefaultSeed);
BenchResult run_afib(const engine::EngineConfig& cfg, std::span<const int> modes,
                     std::uint64_t seed = kDefaultSeed);
BenchResult run_custom(const model::Manifest& manifest,
                       const engine::EngineConfig& cfg, std::span<const int> modes,
                       std::uint64_t seed = kDefaultSeed);

std::string to_table(const BenchResult& r);

}  // namespace rnnaccel::bench

#endif  // RNNACCEL_BENCH_HPP_
