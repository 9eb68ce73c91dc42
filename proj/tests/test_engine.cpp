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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>

#include "rnnaccel/bench.hpp"
#include "rnnaccel/engine.hpp"
#include "rnnaccel/errors.hpp"
#include "testutil.hpp"

using namespace rnnaccel;
using namespace rnnaccel::model;
using namespace rnnaccel::engine;

namespace {

CompiledModel make_model(Manifest m, std::vector<LayerWeights> data) {
  return load(compile_from_data(m, data));
}

// Independent closed-form recomputation of the cycle model from layer dims.
std::uint64_t expect_cycles(const CompiledModel& m, const EngineConfig& cfg,
                            std::size_t steps) {
  const std::uint32_t n_eff =
      m.weight_bits == 16 ? cfg.n_macs / 2 : cfg.n_macs;
  auto mv = [&](std::uint64_t r, std::uint64_t c) {
    return ((r + n_eff - 1) / n_eff) * (c + cfg.p_drain);
  };
  std::uint64_t rec_ops = 0, fc_ops = 0, l_rec = 0, l_fc = 0;
  for (const auto& l : m.layers) {
    const std::uint64_t fused = l.input_dim + (l.type == LayerType::fc ? 0 : l.output_dim);
    if (l.type == LayerType::gru) {
      rec_ops += 3 * mv(l.output_dim, fused) + 2 * cfg.d_dep;
      ++l_rec;
    } else if (l.type == LayerType::lstm) {
      rec_ops += 4 * mv(l.output_dim, fused) + 2 * cfg.d_dep;
      ++l_rec;
    } else {
      fc_ops += mv(l.output_dim, l.input_dim);
      ++l_fc;
    }
  }
  if (m.exec_mode == ExecMode::streaming || l_rec == 0) {
    const std::uint64_t per_step =
        rec_ops + fc_ops + (l_rec + l_fc - 1) * cfg.d_dep;
    return steps * per_step;
  }
  return steps * rec_ops + (steps * l_rec + l_fc - 1) * cfg.d_dep + fc_ops;
}

}  // namespace

TEST_CASE("1x1 FC mat-vec is exact") {
  Manifest m;
  m.network = "one";
  m.layers.push_back(testutil::meta_layer(LayerType::fc, 1, 1));
  LayerWeights lw = testutil::zero_layer(LayerType::fc, 1, 1);
  lw.gates[0][0] = 2.0;
  const CompiledModel cm = make_model(m, {lw});

  EngineConfig cfg;
  Session s(cm, cfg);
  const std::int16_t x[] = {3};
  const auto out = s.step(x);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == 6);
  CHECK(s.last_logits().size() == 1);
}

TEST_CASE("KWS streaming step: cycles, utilization, traffic") {
  const bench::SynthSpec spec = bench::make_kws(1);
  const CompiledModel cm = make_model(spec.manifest, spec.data);
  EngineConfig cfg;  // 32 MACs, 250 MHz, p_drain 4, d_dep 12
  Session s(cm, cfg);
  const auto x = testutil::random_q14(5, 10);
  (void)s.step(x);
  const SimReport r = s.report();

  // Per-gate mat-vec: ceil(154/32) * (164+4) = 840; step = 3*840 + 2*12.
  CHECK(r.layers[0].cycles == 2544);
  // FC: ceil(12/32) * (154+4) = 158, plus the layer boundary.
  CHECK(r.layers[1].cycles == 158 + 12);
  CHECK(r.total_cycles == 2714);
  CHECK(r.useful_mac_ops == 3 * 154 * 164 + 12 * 154);  // 77616
  CHECK(r.utilization == doctest::Approx(77616.0 / (32.0 * 2714.0)).epsilon(1e-12));
  CHECK(r.utilization == doctest::Approx(0.894).epsilon(0.001));
  CHECK(r.inferences_per_second == doctest::Approx(250e6 / 2714.0).epsilon(1e-12));
  CHECK(r.peak_gops == 16.0);
  CHECK(r.weight_bytes_read == 77616);
  CHECK(r.input_bytes_read == 20);
  CHECK(r.output_bytes_written == 24);
}

TEST_CASE("KWS batch accounting over 10 frames") {
  bench::SynthSpec spec = bench::make_kws(1);
  spec.manifest.exec_mode = ExecMode::batch;
  const CompiledModel cm = make_model(spec.manifest, spec.data);
  EngineConfig cfg;
  Session s(cm, cfg);
  const auto xs = testutil::random_q14(6, 100);
  const auto out = s.run(xs);
  CHECK(out.size() == 12);  // FC suffix once
  const SimReport r = s.report();
  CHECK(r.total_cycles == 10 * 2544 + 10 * 12 + 158);
  CHECK(r.total_cycles == expect_cycles(cm, cfg, 10));
  CHECK(r.n_inferences == 1);
}

TEST_CASE("LSTM step cycle formula at h=64") {
  Manifest m;
  m.network = "lstm64";
  m.layers.push_back(testutil::meta_layer(LayerType::lstm, 10, 64));
  Rng rng(8);
  const CompiledModel cm =
      make_model(m, {testutil::synth_layer(rng, LayerType::lstm, 10, 64)});
  EngineConfig cfg;
  Session s(cm, cfg);
  (void)s.step(testutil::random_q14(7, 10));
  // 4 gates * ceil(64/32)*(74+4) + 2*12 = 4*156 + 24.
  CHECK(s.report().total_cycles == 648);
}

TEST_CASE("GRU closed form: zero weights") {
  Manifest m;
  m.network = "gru0";
  m.layers.push_back(testutil::meta_layer(LayerType::gru, 2, 4));
  const CompiledModel cm = make_model(m, {testutil::zero_layer(LayerType::gru, 2, 4)});
  EngineConfig cfg;
  Session s(cm, cfg);

  // h = 1.0: z = r = 0.5, candidate = 0, h' = 0.5 exactly.
  const std::vector<std::int16_t> ones(4, 16384);
  s.set_hidden(0, ones);
  const std::int16_t x[] = {0, 0};
  auto out = s.step(x);
  for (std::int16_t v : out) CHECK(v == 8192);

  // h = 0 stays 0.
  s.reset_state();
  out = s.step(x);
  for (std::int16_t v : out) CHECK(v == 0);
}

TEST_CASE("LSTM closed form: zero weights, c0 = 1.0") {
  Manifest m;
  m.network = "lstm0";
  m.layers.push_back(testutil::meta_layer(LayerType::lstm, 2, 4));
  const CompiledModel cm = make_model(m, {testutil::zero_layer(LayerType::lstm, 2, 4)});
  EngineConfig cfg;
  Session s(cm, cfg);

  const std::vector<std::int16_t> c0(4, 8192);  // 1.0 in Q2.13
  s.set_cell(0, c0);
  const std::int16_t x[] = {0, 0};
  const auto out = s.step(x);
  // c' = 0.5, h' = 0.5 * tanh(0.5) = 0.2310586 -> 3786 in Q1.14.
  const auto expect = static_cast<std::int16_t>(
      fxp::round_half_even(0.5 * std::tanh(0.5) * 16384.0));
  for (std::int16_t v : out) CHECK(std::abs(v - expect) <= 2);
  for (std::int16_t v : s.cell(0)) CHECK(v == 4096);

  s.reset_state();
  const auto zero_out = s.step(x);
  for (std::int16_t v : zero_out) CHECK(v == 0);
  for (std::int16_t v : s.cell(0)) CHECK(v == 0);
}

TEST_CASE("identity FC passes requantized input through") {
  Manifest m;
  m.network = "ident";
  m.layers.push_back(testutil::meta_layer(LayerType::fc, 6, 6));
  LayerWeights lw = testutil::zero_layer(LayerType::fc, 6, 6);
  for (int i = 0; i < 6; ++i) lw.gates[0][i * 6 + i] = 1.0;
  const CompiledModel cm = make_model(m, {lw});
  EngineConfig cfg;
  Session s(cm, cfg);
  const auto x = testutil::random_q14(11, 6);
  const auto out = s.step(x);
  for (std::size_t i = 0; i < 6; ++i) CHECK(out[i] == x[i]);
}

TEST_CASE("zero-weight FC outputs the requantized bias") {
  Manifest m;
  m.network = "biasonly";
  m.layers.push_back(testutil::meta_layer(LayerType::fc, 3, 2));
  LayerWeights lw = testutil::zero_layer(LayerType::fc, 3, 2);
  lw.biases[0] = {0.25, -0.5};
  const CompiledModel cm = make_model(m, {lw});
  EngineConfig cfg;
  Session s(cm, cfg);
  const std::int16_t x[] = {100, -200, 300};
  const auto out = s.step(x);
  CHECK(out[0] == 4096);   // 0.25 in Q1.14
  CHECK(out[1] == -8192);  // -0.5
}

TEST_CASE("cycle model matches the closed form on random topologies") {
  Rng rng(2718);
  for (int trial = 0; trial < 50; ++trial) {
    Manifest m;
    m.network = "rand";
    const int n_rec = static_cast<int>(rng.uniform_int(0, 2));
    const int n_fc = static_cast<int>(rng.uniform_int(n_rec == 0 ? 1 : 0, 2));
    std::uint32_t dim = static_cast<std::uint32_t>(rng.uniform_int(1, 48));
    std::vector<LayerWeights> data;
    for (int i = 0; i < n_rec; ++i) {
      const auto out = static_cast<std::uint32_t>(rng.uniform_int(1, 48));
      const bool lstm = (rng.next_u64() & 1) != 0;
      const auto type = lstm ? LayerType::lstm : LayerType::gru;
      m.layers.push_back(testutil::meta_layer(type, dim, out));
      data.push_back(testutil::zero_layer(type, dim, out));
      dim = out;
    }
    for (int i = 0; i < n_fc; ++i) {
      const auto out = static_cast<std::uint32_t>(rng.uniform_int(1, 48));
      m.layers.push_back(testutil::meta_layer(LayerType::fc, dim, out));
      data.push_back(testutil::zero_layer(LayerType::fc, dim, out));
      dim = out;
    }
    m.exec_mode = (rng.next_u64() & 1) ? ExecMode::streaming : ExecMode::batch;
    const auto steps = static_cast<std::size_t>(rng.uniform_int(1, 4));
    m.seq_len = static_cast<std::uint32_t>(steps);
    const CompiledModel cm = make_model(m, data);

    EngineConfig cfg;
    cfg.n_macs = static_cast<std::uint32_t>(8u << rng.uniform_int(0, 4));
    const auto xs = testutil::random_q14(trial, steps * cm.input_dim());

    Session s(cm, cfg);
    (void)s.run(xs);
    CHECK(s.report().total_cycles == expect_cycles(cm, cfg, steps));

    // Doubling the MAC count never increases cycles.
    EngineConfig cfg2 = cfg;
    cfg2.n_macs = cfg.n_macs * 2;
    Session s2(cm, cfg2);
    (void)s2.run(xs);
    CHECK(s2.report().total_cycles <= s.report().total_cycles);
  }
}

TEST_CASE("determinism: identical runs give identical outputs and reports") {
  const bench::SynthSpec spec = bench::make_kws(3);
  const CompiledModel cm = make_model(spec.manifest, spec.data);
  EngineConfig cfg;
  const auto xs = testutil::random_q14(77, 30);
  Session a(cm, cfg), b(cm, cfg);
  CHECK(a.run(xs) == b.run(xs));
  const SimReport ra = a.report(), rb = b.report();
  CHECK(ra.total_cycles == rb.total_cycles);
  CHECK(ra.useful_mac_ops == rb.useful_mac_ops);
  CHECK(ra.saturation_events == rb.saturation_events);
  CHECK(ra.weight_bytes_read == rb.weight_bytes_read);
}

TEST_CASE("w16 mode halves the effective MAC count and doubles lane ops") {
  Manifest m;
  m.network = "w16fc";
  m.weight_bits = 16;
  m.layers.push_back(testutil::meta_layer(LayerType::fc, 32, 32));
  Rng rng(12);
  const CompiledModel cm =
      make_model(m, {testutil::synth_layer(rng, LayerType::fc, 32, 32)});
  EngineConfig cfg;
  Session s(cm, cfg);
  (void)s.step(testutil::random_q14(13, 32));
  const SimReport r = s.report();
  CHECK(r.total_cycles == 2 * (32 + 4));       // ceil(32/16) passes
  CHECK(r.useful_mac_ops == 2ull * 32 * 32);   // lane ops
  CHECK(r.weight_bytes_read == 2ull * 32 * 32);
}

TEST_CASE("pool residency") {
  Manifest m;
  m.network = "big";
  m.layers.push_back(testutil::meta_layer(LayerType::lstm, 8, 4096));
  const CompiledModel cm =
      make_model(m, {testutil::zero_layer(LayerType::lstm, 8, 4096)});
  EngineConfig cfg;  // 12288-byte pool; state needs 4 * 4096
  CHECK_THROWS_AS(Session(cm, cfg), Error);

  // Multiple resident models accounted against one pool.
  Manifest m2;
  m2.network = "small";
  m2.layers.push_back(testutil::meta_layer(LayerType::gru, 8, 1024));
  const CompiledModel cm2 =
      make_model(m2, {testutil::zero_layer(LayerType::gru, 8, 1024)});
  MemoryPool pool(12288);
  Session s1(cm2, cfg, &pool);
  Session s2(cm2, cfg, &pool);
  Session s3(cm2, cfg, &pool);
  Session s4(cm2, cfg, &pool);
  Session s5(cm2, cfg, &pool);         // 5 * 2048 = 10240
  Session s6(cm2, cfg, &pool);         // 12288, exactly full
  CHECK(pool.used() == 12288);
  CHECK_THROWS_AS(Session(cm2, cfg, &pool), Error);
}

TEST_CASE("per-layer utilization respects the pad-lane ceiling") {
  const bench::SynthSpec spec = bench::make_kws(9);
  const CompiledModel cm = make_model(spec.manifest, spec.data);
  EngineConfig cfg;
  Session s(cm, cfg);
  (void)s.step(testutil::random_q14(91, 10));
  const SimReport r = s.report();
  for (std::size_t li = 0; li < r.layers.size(); ++li) {
    const double rows = cm.layers[li].output_dim;
    const double ceiling =
        rows / (cfg.n_macs * std::ceil(rows / cfg.n_macs));
    const double util = static_cast<double>(r.layers[li].useful_mac_ops) /
                        (static_cast<double>(cfg.n_macs) * r.layers[li].cycles);
    CHECK(util <= ceiling + 1e-12);
  }
}

TEST_CASE("utilization is invariant to compression; weight traffic is not") {
  bench::SynthSpec spec = bench::make_kws(10);
  const CompiledModel plain = make_model(spec.manifest, spec.data);
  spec.manifest.compression_b = 4;
  const CompiledModel packed = make_model(spec.manifest, spec.data);

  EngineConfig cfg;
  Session a(plain, cfg), b(packed, cfg);
  const auto x = testutil::random_q14(92, 10);
  (void)a.step(x);
  (void)b.step(x);
  const SimReport ra = a.report(), rb = b.report();
  CHECK(ra.total_cycles == rb.total_cycles);
  CHECK(ra.utilization == rb.utilization);
  CHECK(ra.weight_bytes_read == 77616);
  // 3 GRU gate blobs (11 B header + 16 B codebook + 12628 B payload) plus
  // the FC blob (11 + 16 + 924).
  CHECK(rb.weight_bytes_read == 38916);

  // Optional sensitivity knob: one stall cycle per tile pass while streaming
  // through the decompressor.
  EngineConfig stall = cfg;
  stall.decompress_stall_cycles = 1;
  Session c(packed, stall);
  (void)c.step(x);
  CHECK(c.report().total_cycles == rb.total_cycles + 3 * 5 + 1);
}

TEST_CASE("saturating nets record saturation events") {
  Manifest m;
  m.network = "hot";
  m.layers.push_back(testutil::meta_layer(LayerType::fc, 8, 8));
  LayerWeights lw = testutil::zero_layer(LayerType::fc, 8, 8);
  for (auto& v : lw.gates[0]) v = 400.0;  // forces large accumulators
  const CompiledModel cm = make_model(m, {lw});
  EngineConfig cfg;
  Session s(cm, cfg);
  std::vector<std::int16_t> x(8, 16384);
  (void)s.step(x);
  CHECK(s.report().saturation_events > 0);
}

TEST_CASE("concurrent sessions over one immutable model are independent") {
  const bench::SynthSpec spec = bench::make_kws(14);
  const CompiledModel cm = make_model(spec.manifest, spec.data);
  EngineConfig cfg;
  const auto xs = testutil::random_q14(140, 50);

  Session serial(cm, cfg);
  const auto expect_out = serial.run(xs);
  const auto expect_cycles = serial.report().total_cycles;

  std::vector<std::vector<std::int16_t>> outs(4);
  std::vector<std::uint64_t> cycles(4);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      Session s(cm, cfg);
      outs[t] = s.run(xs);
      cycles[t] = s.report().total_cycles;
    });
  }
  for (auto& th : threads) th.join();
  for (int t = 0; t < 4; ++t) {
    CHECK(outs[t] == expect_out);
    CHECK(cycles[t] == expect_cycles);
  }
}

TEST_CASE("bad inputs") {
  const bench::SynthSpec spec = bench::make_kws(4);
  const CompiledModel cm = make_model(spec.manifest, spec.data);
  EngineConfig cfg;
  Session s(cm, cfg);
  const std::int16_t short_x[] = {1, 2, 3};
  CHECK_THROWS_AS((void)s.step(short_x), Error);
  CHECK_THROWS_AS((void)s.run(std::span<const std::int16_t>{}), Error);

  EngineConfig bad = cfg;
  bad.n_macs = 24;
  CHECK_THROWS_AS(Session(cm, bad), Error);
  bad.n_macs = 4;
  CHECK_THROWS_AS(Session(cm, bad), Error);
}
