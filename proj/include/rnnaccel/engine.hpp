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
#ifndef RNNACCEL_ENGINE_HPP_
#define RNNACCEL_ENGINE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rnnaccel/activation.hpp"
#include "rnnaccel/fxp.hpp"
#include "rnnaccel/loadable.hpp"

namespace rnnaccel::engine {

// Behavior simulator: executes a CompiledModel bit-exactly on an N-MAC array
// model and accounts cycles, utilization and byte traffic deterministically.
//
// Cycle model: a mat-vec streams one column per cycle into ceil(R/n) row
// tiles (n_macs halves in w16 mode, two 8-bit units pairing up), plus p_drain
// cycles per tile pass. Activation and element-wise units are pipelined
// behind the MAC array and charged only at data-dependency boundaries
// (d_dep): two inside every recurrent step, one between executed layers and,
// in batch mode, one between consecutive timesteps.

struct EngineConfig {
  std::uint32_t n_macs = 32;        // power of two, >= 8
  double clock_mhz = 250.0;         // reporting only
  std::uint32_t pool_bytes = 12288; // local memory pool capacity
  fxp::WeightMode weight_mode = fxp::WeightMode::w8;  // follows the model
  std::uint32_t p_drain = 4;        // drain cycles per mat-vec tile pass
  std::uint32_t d_dep = 12;         // cycles per data-dependency boundary
  // Optional sensitivity knob: extra cycles per tile pass when the layer's
  // weights stream through the decompressor (default: decompression keeps
  // pace with the MAC array).
  std::uint32_t decompress_stall_cycles = 0;
  bool record_trace = false;

  void validate() const;  // throws Errc::bad_argument
};

struct LayerReport {
  std::string name;
  std::uint64_t cycles = 0;
  std::uint64_t useful_mac_ops = 0;
  std::uint64_t weight_bytes_read = 0;
  std::uint64_t input_bytes_read = 0;
  std::uint64_t output_bytes_written = 0;
  std::uint64_t saturation_events = 0;
};

struct SimReport {
  std::uint32_t n_macs = 32;
  double clock_mhz = 250.0;
  std::uint64_t total_cycles = 0;
  std::uint64_t useful_mac_ops = 0;
  std::uint64_t n_inferences = 0;
  double utilization = 0.0;           // useful / (n_macs * total_cycles)
  double cycles_per_inference = 0.0;
  double inferences_per_second = 0.0;
  double peak_gops = 0.0;             // n_macs * clock * 2 / 1000
  double achieved_gops = 0.0;
  std::uint64_t weight_bytes_read = 0;
  std::uint64_t input_bytes_read = 0;
  std::uint64_t output_bytes_written = 0;
  std::uint64_t saturation_events = 0;
  std::vector<LayerReport> layers;
};

// Residency accounting for several models sharing one local memory pool.
class MemoryPool {
 public:
  explicit MemoryPool(std::uint32_t budget) : budget_(budget) {}
  void reserve(std::uint64_t bytes);  // throws Errc::pool_overflow
  void release(std::uint64_t bytes);
  std::uint64_t used() const { return used_; }
  std::uint32_t budget() const { return budget_; }

 private:
  std::uint32_t budget_;
  std::uint64_t used_ = 0;
};

// Per-step, per-layer Q1.14 outputs (recurrent layers: the new h).
struct Trace {
  std::vector<std::vector<std::vector<std::int16_t>>> per_layer;  // [layer][step]
};

class Session {
 public:
  // Validates dims and state residency (against pool when given, else
  // config.pool_bytes). The MAC weight mode follows the model.
  Session(const model::CompiledModel& m, const EngineConfig& cfg,
          MemoryPool* pool = nullptr);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void reset_state();
  // Overwrite persistent state (convention-lock tests, warm starts).
  void set_hidden(std::size_t layer, std::span<const std::int16_t> h);
  void set_cell(std::size_t layer, std::span<const std::int16_t> c);
  std::span<const std::int16_t> hidden(std::size_t layer) const { return h_[layer]; }
  std::span<const std::int16_t> cell(std::size_t layer) const { return c_[layer]; }

  // One streaming inference: one recurrent timestep through the recurrent
  // prefix plus the trailing FC layers. x = one input frame (Q1.14).
  std::vector<std::int16_t> step(std::span<const std::int16_t> x);

  // Full run per the model exec_mode over T = len/input_dim timesteps.
  // Streaming: step() per frame, outputs concatenated (T x output_dim).
  // Batch: T recurrent steps then the FC suffix once (1 x output_dim).
  // Models with no recurrent layer treat every frame as one inference.
  std::vector<std::int16_t> run(std::span<const std::int16_t> xs);

  // Raw accumulators of the final FC layer from the last executed step,
  // exposed at their accumulator exponents (one per output row).
  std::span<const std::int64_t> last_logits() const { return last_logits_; }
  std::int32_t last_logits_exponent() const { return last_logits_exp_; }

  SimReport report() const;
  const Trace& trace() const { return trace_; }
  const EngineConfig& config() const { return cfg_; }

 private:
  struct MatvecOut {
    std::vector<std::int64_t> acc;
    bool any_saturation = false;
  };

  std::uint32_t effective_macs() const;
  std::uint64_t matvec_cycles(std::uint32_t rows, std::uint32_t cols,
                              bool compressed) const;
  MatvecOut matvec(const model::CompiledLayer& l, std::size_t gate,
                   std::span<const std::int16_t> invec, LayerReport& lr);
  std::int16_t requant_acc(std::int64_t acc, int shift_right, LayerReport& lr);
  std::vector<std::int16_t> gate_activation(const MatvecOut& mv, act::Kind kind,
                                            std::int32_t e_acc, LayerReport& lr);
  void step_gru(std::size_t li, std::span<const std::int16_t> x,
                std::vector<std::int16_t>& out);
  void step_lstm(std::size_t li, std::span<const std::int16_t> x,
                 std::vector<std::int16_t>& out);
  void run_fc(std::size_t li, std::span<const std::int16_t> x,
              std::vector<std::int16_t>& out, bool final_layer);
  void charge_boundary(std::size_t li);
  std::vector<std::int16_t> forward_once(std::span<const std::int16_t> x,
                                         bool recurrent_only);
  std::vector<std::int16_t> fc_suffix(std::span<const std::int16_t> x);

  const model::CompiledModel& model_;
  EngineConfig cfg_;
  MemoryPool* pool_;
  std::uint64_t reserved_bytes_ = 0;
  std::vector<std::vector<std::int16_t>> h_;  // per layer (empty for FC)
  std::vector<std::vector<std::int16_t>> c_;  // per layer (LSTM only)
  std::vector<LayerReport> layer_reports_;
  std::uint64_t n_inferences_ = 0;
  bool first_op_in_pass_ = true;
  std::vector<std::int64_t> last_logits_;
  std::int32_t last_logits_exp_ = 0;
  Trace trace_;
};

// Convenience single-shot run.
struct InferenceResult {
  std::vector<std::int16_t> outputs;
  SimReport report;
  Trace trace;
};
InferenceResult run_inference(const model::CompiledModel& m,
                              std::span<const std::int16_t> input_q14,
                              const EngineConfig& cfg);

}  // namespace rnnaccel::engine

#endif  // RNNACCEL_ENGINE_HPP_
