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
#include "rnnaccel/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rnnaccel/errors.hpp"
#include "rnnaccel/rng.hpp"

namespace rnnaccel::bench {
namespace {

// Fan-in scaled uniform weights; biases stay small.
model::LayerWeights synth_layer(Rng& rng, model::LayerType type, std::uint32_t in,
                                std::uint32_t out) {
  const std::uint32_t cols = in + (type == model::LayerType::fc ? 0 : out);
  const double w0 = 1.0 / std::sqrt(static_cast<double>(cols));
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

model::ManifestLayer meta_layer(model::LayerType type, std::uint32_t in,
                                std::uint32_t out, act::Kind activation) {
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

const char* mode_name(int b) {
  switch (b) {
    case 0: return "none";
    case 2: return "16x";
    case 4: return "8x";
    case 6: return "5.3x";
  }
  return "?";
}

// Aggregate compression accounting over the weight tensors of a model.
void ratio_of(const model::CompiledModel& cm, double* nominal, double* actual) {
  std::uint64_t original = 0, stored = 0;
  for (const auto& l : cm.layers) {
    for (const auto& t : l.weights) {
      original += 4ull * t.q.data.size();
      stored += t.stored.size();
    }
  }
  *nominal = cm.compression_b == 0 ? 1.0 : 32.0 / cm.compression_b;
  *actual = cm.compression_b == 0
                ? 1.0
                : static_cast<double>(original) / static_cast<double>(stored);
}

ModeRow mode_row(const model::Manifest& base,
                 const std::vector<model::LayerWeights>& data,
                 const ref::FloatModel& oracle, std::span<const std::int16_t> input,
                 const engine::EngineConfig& cfg, int b) {
  model::Manifest m = base;
  m.compression_b = b;
  const auto bytes = model::compile_from_data(m, data);
  const model::CompiledModel cm = model::load(bytes);

  const engine::InferenceResult res = engine::run_inference(cm, input, cfg);
  const ref::ValidationReport val = ref::validate(cm, oracle, input, cfg);

  ModeRow row;
  row.mode = mode_name(b);
  row.b = b;
  row.cycles_per_inference = res.report.cycles_per_inference;
  row.utilization = res.report.utilization;
  row.inferences_per_second = res.report.inferences_per_second;
  row.weight_bytes_per_inference = res.report.weight_bytes_read / res.report.n_inferences;
  ratio_of(cm, &row.nominal_ratio, &row.actual_ratio);
  row.val_max_err = val.final_max_abs_err;
  return row;
}

}  // namespace

SynthSpec make_kws(std::uint64_t seed) {
  Rng rng(seed);
  SynthSpec s;
  s.manifest.network = "kws-gru";
  s.manifest.seq_len = 10;
  s.manifest.exec_mode = model::ExecMode::streaming;
  s.manifest.weight_bits = 8;
  s.manifest.compression_b = 0;
  s.manifest.layers.push_back(
      meta_layer(model::LayerType::gru, 10, 154, act::Kind::identity));
  s.manifest.layers.push_back(
      meta_layer(model::LayerType::fc, 154, 12, act::Kind::identity));
  s.data.push_back(synth_layer(rng, model::LayerType::gru, 10, 154));
  s.data.push_back(synth_layer(rng, model::LayerType::fc, 154, 12));
  return s;
}

SynthSpec make_afib_lstm(std::uint64_t seed, bool backward) {
  Rng rng(seed + (backward ? 1 : 0));
  SynthSpec s;
  s.manifest.network = backward ? "afib-lstm-bwd" : "afib-lstm-fwd";
  s.manifest.seq_len = 32;
  s.manifest.exec_mode = model::ExecMode::batch;
  s.manifest.weight_bits = 8;
  s.manifest.compression_b = 0;
  s.manifest.layers.push_back(
      meta_layer(model::LayerType::lstm, 1, 69, act::Kind::identity));
  s.data.push_back(synth_layer(rng, model::LayerType::lstm, 1, 69));
  return s;
}

SynthSpec make_afib_head(std::uint64_t seed) {
  Rng rng(seed + 7);
  SynthSpec s;
  s.manifest.network = "afib-head";
  s.manifest.seq_len = 1;
  s.manifest.exec_mode = model::ExecMode::batch;
  s.manifest.weight_bits = 8;
  s.manifest.compression_b = 0;
  s.manifest.layers.push_back(
      meta_layer(model::LayerType::fc, 138, 2, act::Kind::identity));
  s.data.push_back(synth_layer(rng, model::LayerType::fc, 138, 2));
  return s;
}

std::vector<std::int16_t> random_input_q14(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<std::int16_t> out(count);
  for (auto& v : out) {
    const double u = rng.uniform(-1.0, 1.0);
    v = fxp::saturate_int16(
            static_cast<std::int64_t>(fxp::round_half_even(u * 16384.0)))
            .value;
  }
  return out;
}

BenchResult run_kws(const engine::EngineConfig& cfg, std::span<const int> modes,
                    std::uint64_t seed) {
  const SynthSpec s = make_kws(seed);
  const ref::FloatModel oracle = ref::from_data(s.manifest, s.data);
  const auto input = random_input_q14(seed ^ 0x5EED, 10u * 10u);

  BenchResult r;
  r.profile = "kws-gru";
  r.params = model::parameter_count(s.manifest);
  r.n_macs = cfg.n_macs;
  r.clock_mhz = cfg.clock_mhz;
  r.peak_gops = cfg.n_macs * cfg.clock_mhz * 2.0 / 1000.0;
  for (int b : modes) r.rows.push_back(mode_row(s.manifest, s.data, oracle, input, cfg, b));
  return r;
}

BenchResult run_afib(const engine::EngineConfig& cfg, std::span<const int> modes,
                     std::uint64_t seed) {
  const SynthSpec fwd = make_afib_lstm(seed, false);
  const SynthSpec bwd = make_afib_lstm(seed, true);
  const SynthSpec head = make_afib_head(seed);
  const auto input = random_input_q14(seed ^ 0xECC, 32);

  std::vector<std::int16_t> reversed(input.rbegin(), input.rend());

  BenchResult r;
  r.profile = "afib-bilstm";
  r.params = model::parameter_count(fwd.manifest) +
             model::parameter_count(bwd.manifest) +
             model::parameter_count(head.manifest);
  r.n_macs = cfg.n_macs;
  r.clock_mhz = cfg.clock_mhz;
  r.peak_gops = cfg.n_macs * cfg.clock_mhz * 2.0 / 1000.0;
  r.synthetic_standin = true;

  for (int b : modes) {
    auto compile_at = [&](const SynthSpec& s) {
      model::Manifest m = s.manifest;
      m.compression_b = b;
      return model::load(model::compile_from_data(m, s.data));
    };
    const auto cm_f = compile_at(fwd);
    const auto cm_b = compile_at(bwd);
    const auto cm_h = compile_at(head);

    // Bi-LSTM composed at the harness level: two sessions over one shared
    // memory pool, final hidden states concatenated into the FC head.
    engine::MemoryPool pool(cfg.pool_bytes);
    engine::Session sf(cm_f, cfg, &pool);
    engine::Session sb(cm_b, cfg, &pool);
    const auto hf = sf.run(input);
    const auto hb = sb.run(reversed);
    std::vector<std::int16_t> concat(hf.begin(), hf.end());
    concat.insert(concat.end(), hb.begin(), hb.end());
    engine::Session sh(cm_h, cfg, &pool);
    const auto logits = sh.run(concat);
    (void)logits;

    const auto rf = sf.report(), rb = sb.report(), rh = sh.report();
    const std::uint64_t cycles = rf.total_cycles + rb.total_cycles + rh.total_cycles;
    const std::uint64_t useful =
        rf.useful_mac_ops + rb.useful_mac_ops + rh.useful_mac_ops;
    const std::uint64_t wbytes =
        rf.weight_bytes_read + rb.weight_bytes_read + rh.weight_bytes_read;

    // Oracle composition mirrors the fixed-point harness.
    const ref::FloatModel of = ref::from_data(fwd.manifest, fwd.data);
    const ref::FloatModel ob = ref::from_data(bwd.manifest, bwd.data);
    const ref::FloatModel oh = ref::from_data(head.manifest, head.data);
    std::vector<double> rin(input.size()), rrev(reversed.size());
    for (std::size_t i = 0; i < input.size(); ++i)
      rin[i] = std::ldexp(static_cast<double>(input[i]), fxp::kQ14Exp);
    for (std::size_t i = 0; i < reversed.size(); ++i)
      rrev[i] = std::ldexp(static_cast<double>(reversed[i]), fxp::kQ14Exp);
    const auto off = ref::forward(of, rin).outputs.back();
    const auto obb = ref::forward(ob, rrev).outputs.back();
    std::vector<double> oc(off.begin(), off.end());
    oc.insert(oc.end(), obb.begin(), obb.end());
    const auto ologits = ref::forward(oh, oc).outputs.back();

    ModeRow row;
    row.mode = mode_name(b);
    row.b = b;
    row.cycles_per_inference = static_cast<double>(cycles);
    row.utilization = static_cast<double>(useful) /
                      (static_cast<double>(cfg.n_macs) * static_cast<double>(cycles));
    row.inferences_per_second = cfg.clock_mhz * 1e6 / static_cast<double>(cycles);
    row.weight_bytes_per_inference = wbytes;
    double nf, af, nb2, ab, nh, ah;
    ratio_of(cm_f, &nf, &af);
    ratio_of(cm_b, &nb2, &ab);
    ratio_of(cm_h, &nh, &ah);
    row.nominal_ratio = nf;
    // Aggregate actual ratio across the three loadables.
    std::uint64_t orig = 0, stored = 0;
    for (const auto* cm : {&cm_f, &cm_b, &cm_h}) {
      for (const auto& l : cm->layers)
        for (const auto& t : l.weights) {
          orig += 4ull * t.q.data.size();
          stored += t.stored.size();
        }
    }
    row.actual_ratio =
        b == 0 ? 1.0 : static_cast<double>(orig) / static_cast<double>(stored);
    double err = 0.0;
    for (std::size_t i = 0; i < ologits.size(); ++i)
      err = std::max(err, std::fabs(std::ldexp(static_cast<double>(logits[i]),
                                               fxp::kQ14Exp) -
                                    ologits[i]));
    row.val_max_err = err;
    r.rows.push_back(row);
  }
  return r;
}

BenchResult run_custom(const model::Manifest& manifest,
                       const engine::EngineConfig& cfg, std::span<const int> modes,
                       std::uint64_t seed) {
  std::vector<model::LayerWeights> data;
  for (std::size_t i = 0; i < manifest.layers.size(); ++i)
    data.push_back(model::read_layer_weights(manifest, i));
  const ref::FloatModel oracle = ref::from_data(manifest, data);
  const auto input = random_input_q14(
      seed ^ 0xC05, static_cast<std::size_t>(manifest.seq_len) *
                        manifest.layers.front().input_dim);

  BenchResult r;
  r.profile = manifest.network;
  r.params = model::parameter_count(manifest);
  r.n_macs = cfg.n_macs;
  r.clock_mhz = cfg.clock_mhz;
  r.peak_gops = cfg.n_macs * cfg.clock_mhz * 2.0 / 1000.0;
  for (int b : modes) r.rows.push_back(mode_row(manifest, data, oracle, input, cfg, b));
  return r;
}

std::string to_table(const BenchResult& r) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line,
                "profile %s: %llu parameters, %u MACs @ %.0f MHz, peak %.3f GOPS\n",
                r.profile.c_str(), static_cast<unsigned long long>(r.params),
                r.n_macs, r.clock_mhz, r.peak_gops);
  os << line;
  if (r.synthetic_standin)
    os << "(synthetic stand-in topology sized to the published parameter count)\n";
  os << "mode   cycles/inf   util    inf/s      wbytes/inf  ratio(actual/nominal)  "
        "max|err| vs oracle\n";
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line,
                  "%-6s %-12.1f %-7.4f %-10.0f %-11llu %5.2f / %-5.2f          %.6f\n",
                  row.mode.c_str(), row.cycles_per_inference, row.utilization,
                  row.inferences_per_second,
                  static_cast<unsigned long long>(row.weight_bytes_per_inference),
                  row.actual_ratio, row.nominal_ratio, row.val_max_err);
    os << line;
  }
  return os.str();
}

}  // namespace rnnaccel::bench
