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

// rnnaccel CLI: compile models to loadables, simulate them on the MAC-array
// model, validate against the double-precision oracle, run benchmark
// profiles and inspect the activation tables.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rnnaccel/bench.hpp"
#include "rnnaccel/engine.hpp"
#include "rnnaccel/errors.hpp"
#include "rnnaccel/loadable.hpp"
#include "rnnaccel/pwl_io.hpp"
#include "rnnaccel/reference.hpp"
#include "rnnaccel/report.hpp"
#include "rnnaccel/rng.hpp"
#include "rnnaccel/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rnnaccel;

std::vector<std::uint8_t> read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(Errc::missing_file, "cannot open " + path);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
}

void write_binary(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(Errc::io_error, "cannot write " + path);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
}

// Tensor files: raw little-endian int16 plus a one-line sidecar
// "<path>.meta" declaring "len=<N> e=<E>".
struct TensorFile {
  std::vector<std::int16_t> values;
  int exponent = fxp::kQ14Exp;
};

TensorFile read_tensor_file(const std::string& path) {
  const auto raw = read_binary(path);
  if (raw.size() % 2 != 0) raise(Errc::bad_file_size, path + ": odd byte count");
  TensorFile tf;
  tf.values.resize(raw.size() / 2);
  for (std::size_t i = 0; i < tf.values.size(); ++i) {
    tf.values[i] = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(raw[2 * i]) |
        (static_cast<std::uint16_t>(raw[2 * i + 1]) << 8));
  }
  std::ifstream meta(path + ".meta");
  if (!meta) raise(Errc::missing_file, "missing sidecar " + path + ".meta");
  std::size_t len = 0;
  int e = 0;
  std::string line;
  std::getline(meta, line);
  if (std::sscanf(line.c_str(), "len=%zu e=%d", &len, &e) != 2)
    raise(Errc::bad_file_size, path + ".meta: expected 'len=<N> e=<E>'");
  if (len != tf.values.size())
    raise(Errc::bad_file_size, path + ": sidecar len " + std::to_string(len) +
                                   " != " + std::to_string(tf.values.size()));
  tf.exponent = e;
  return tf;
}

void write_tensor_file(const std::string& path, std::span<const std::int16_t> v,
                       int exponent) {
  std::vector<std::uint8_t> raw(v.size() * 2);
  for (std::size_t i = 0; i < v.size(); ++i) {
    raw[2 * i] = static_cast<std::uint8_t>(v[i] & 0xFF);
    raw[2 * i + 1] = static_cast<std::uint8_t>((v[i] >> 8) & 0xFF);
  }
  write_binary(path, raw);
  std::ofstream meta(path + ".meta");
  if (!meta) raise(Errc::io_error, "cannot write " + path + ".meta");
  meta << "len=" << v.size() << " e=" << exponent << "\n";
}

// Named compression modes as exposed on the command line.
int compress_mode_to_b(const std::string& mode) {
  if (mode == "none") return 0;
  if (mode == "5.3x") return 6;
  if (mode == "8x") return 4;
  if (mode == "16x") return 2;
  raise(Errc::bad_argument, "compress mode must be none|5.3x|8x|16x");
}

ordered_json envelope(const std::string& command) {
  ordered_json j;
  j["tool"] = "rnnaccel";
  j["version"] = kVersion;
  j["command"] = command;
  return j;
}

void finish_report(ordered_json& j, const std::string& path,
                   std::chrono::steady_clock::time_point t0) {
  const auto dt = std::chrono::steady_clock::now() - t0;
  j["wall_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(dt).count();
  if (!path.empty()) {
    std::ofstream os(path);
    if (!os) raise(Errc::io_error, "cannot write report " + path);
    os << j.dump(2) << "\n";
  }
}

// Requantize an external tensor file into the engine's Q1.14 currency.
std::vector<std::int16_t> ingest_q14(const TensorFile& tf) {
  if (tf.exponent == fxp::kQ14Exp) return tf.values;
  std::vector<std::int16_t> out(tf.values.size());
  const int shift = tf.exponent - fxp::kQ14Exp;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::int64_t v = tf.values[i];
    if (shift >= 0) {
      if (v == 0) {
        out[i] = 0;
      } else if (shift > 30) {
        out[i] = v > 0 ? 32767 : -32768;
      } else {
        out[i] = fxp::saturate_int16(v << shift).value;
      }
    } else {
      out[i] = fxp::saturate_int16(fxp::rhe_shift_right(v, -shift)).value;
    }
  }
  return out;
}

int cmd_compile(const std::string& manifest_path, const std::string& compress,
                int wbits, const std::string& out_path,
                const std::string& report_path) {
  const auto t0 = std::chrono::steady_clock::now();
  model::Manifest m = model::parse_manifest_file(manifest_path);
  if (!compress.empty()) m.compression_b = compress_mode_to_b(compress);
  if (wbits != 0) {
    if (wbits != 8 && wbits != 16) raise(Errc::bad_argument, "--wbits must be 8 or 16");
    m.weight_bits = wbits;
  }
  const auto bytes = model::compile(m);
  write_binary(out_path, bytes);
  const model::CompiledModel cm = model::load(bytes);

  std::printf("network %s: %llu parameters, %zu layers, weight_bits %d\n",
              m.network.c_str(),
              static_cast<unsigned long long>(model::parameter_count(m)),
              m.layers.size(), m.weight_bits);
  ordered_json j = envelope("compile");
  j["network"] = m.network;
  j["params"] = model::parameter_count(m);
  j["loadable_bytes"] = bytes.size();
  j["tensors"] = ordered_json::array();
  for (const auto& t : model::tensor_summary(cm)) {
    std::printf("  %-24s %4ux%-4u e=%-4d %s%llu bytes\n", t.name.c_str(), t.rows,
                t.cols, t.exponent, t.compressed ? "compressed, " : "",
                static_cast<unsigned long long>(t.stored_bytes));
    ordered_json tj;
    tj["name"] = t.name;
    tj["rows"] = t.rows;
    tj["cols"] = t.cols;
    tj["exponent"] = t.exponent;
    tj["compressed"] = t.compressed;
    tj["stored_bytes"] = t.stored_bytes;
    j["tensors"].push_back(tj);
  }
  if (m.compression_b != 0) {
    // Aggregate ratio across all weight tensors.
    std::uint64_t orig = 0, stored = 0;
    for (const auto& l : cm.layers)
      for (const auto& t : l.weights) {
        orig += 4ull * t.q.data.size();
        stored += t.stored.size();
      }
    codec::RatioReport rr;
    rr.nominal_ratio = 32.0 / m.compression_b;
    rr.original_bytes = orig;
    rr.compressed_bytes = stored;
    rr.actual_ratio = static_cast<double>(orig) / static_cast<double>(stored);
    std::printf("compression: nominal %.3fx actual %.3fx (%llu -> %llu weight bytes)\n",
                rr.nominal_ratio, rr.actual_ratio,
                static_cast<unsigned long long>(orig),
                static_cast<unsigned long long>(stored));
    j["ratio"] = report::to_json(rr);
  }
  std::printf("wrote %s (%zu bytes)\n", out_path.c_str(), bytes.size());
  finish_report(j, report_path, t0);
  return 0;
}

int cmd_simulate(const std::string& loadable_path, const std::string& input_path,
                 std::optional<std::uint64_t> random_seed, std::uint32_t macs,
                 double clock, std::uint32_t pool, const std::string& output_path,
                 const std::string& report_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const model::CompiledModel cm = model::load(read_binary(loadable_path));

  engine::EngineConfig cfg;
  cfg.n_macs = macs;
  cfg.clock_mhz = clock;
  cfg.pool_bytes = pool;

  std::vector<std::int16_t> input;
  if (random_seed.has_value()) {
    input = bench::random_input_q14(
        *random_seed, static_cast<std::size_t>(cm.seq_len) * cm.input_dim());
  } else if (!input_path.empty()) {
    input = ingest_q14(read_tensor_file(input_path));
    if (input.empty() || input.size() % cm.input_dim() != 0)
      raise(Errc::dim_mismatch,
            "input length must be a positive multiple of input_dim " +
                std::to_string(cm.input_dim()));
  } else {
    raise(Errc::bad_argument, "one of --input or --random is required");
  }

  const engine::InferenceResult res = engine::run_inference(cm, input, cfg);
  const auto& r = res.report;
  std::printf("cycles %llu (%.1f per inference), utilization %.4f\n",
              static_cast<unsigned long long>(r.total_cycles),
              r.cycles_per_inference, r.utilization);
  std::printf("inferences/s %.0f @ %.0f MHz, peak %.3f GOPS, achieved %.3f GOPS\n",
              r.inferences_per_second, cfg.clock_mhz, r.peak_gops, r.achieved_gops);
  std::printf("traffic: weights %llu B, inputs %llu B, outputs %llu B; "
              "saturation events %llu\n",
              static_cast<unsigned long long>(r.weight_bytes_read),
              static_cast<unsigned long long>(r.input_bytes_read),
              static_cast<unsigned long long>(r.output_bytes_written),
              static_cast<unsigned long long>(r.saturation_events));

  if (!output_path.empty())
    write_tensor_file(output_path, res.outputs, fxp::kQ14Exp);

  ordered_json j = envelope("simulate");
  j["loadable"] = loadable_path;
  j["sim_report"] = report::to_json(r);
  finish_report(j, report_path, t0);
  return 0;
}

int cmd_validate(const std::string& manifest_path, const std::string& loadable_path,
                 int seeds, double tolerance, std::uint32_t macs, double clock,
                 const std::string& report_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const model::Manifest m = model::parse_manifest_file(manifest_path);
  const ref::FloatModel oracle = ref::from_manifest(m);
  const model::CompiledModel cm = model::load(read_binary(loadable_path));

  engine::EngineConfig cfg;
  cfg.n_macs = macs;
  cfg.clock_mhz = clock;

  ordered_json j = envelope("validate");
  j["seeds"] = seeds;
  j["tolerance"] = tolerance;
  j["runs"] = ordered_json::array();

  bool all_pass = true;
  double worst = 0.0;
  int worst_seed = -1;
  ref::ValidationReport worst_rep;
  for (int s = 0; s < seeds; ++s) {
    const auto input = bench::random_input_q14(
        1000 + static_cast<std::uint64_t>(s),
        static_cast<std::size_t>(cm.seq_len) * cm.input_dim());
    const ref::ValidationReport rep =
        ref::validate(cm, oracle, input, cfg, tolerance);
    all_pass = all_pass && rep.pass;
    if (rep.final_max_abs_err > worst) {
      worst = rep.final_max_abs_err;
      worst_seed = s;
      worst_rep = rep;
    }
    ordered_json rj = report::to_json(rep);
    rj["seed"] = s;
    j["runs"].push_back(rj);
  }
  std::printf("validated %d seeds at tolerance %g; worst final max-abs-err %.6g\n",
              seeds, tolerance, worst);
  if (!all_pass && worst_seed >= 0) {
    std::printf("worst case: seed %d step %zu index %zu err %.6g\n", worst_seed,
                worst_rep.worst_step, worst_rep.worst_index, worst);
    for (const auto& l : worst_rep.layers)
      std::printf("  %-12s max %.6g rms %.6g\n", l.name.c_str(), l.max_abs_err,
                  l.rms_err);
  }
  j["pass"] = all_pass;
  j["worst_final_max_abs_err"] = worst;
  finish_report(j, report_path, t0);
  if (!all_pass) {
    std::fprintf(stderr, "error: %s: validation exceeded tolerance %g (worst %.6g)\n",
                 errc_name(Errc::out_of_bounds), tolerance, worst);
    return 1;
  }
  return 0;
}

int cmd_bench(const std::string& profile, const std::string& manifest_path,
              std::uint32_t macs, double clock, const std::string& compress,
              std::uint64_t seed, const std::string& report_path) {
  const auto t0 = std::chrono::steady_clock::now();
  engine::EngineConfig cfg;
  cfg.n_macs = macs;
  cfg.clock_mhz = clock;

  std::vector<int> modes = {0, 6, 4, 2};
  if (!compress.empty()) modes = {compress_mode_to_b(compress)};

  bench::BenchResult result;
  if (profile == "kws-gru") {
    result = bench::run_kws(cfg, modes, seed);
  } else if (profile == "afib-bilstm") {
    result = bench::run_afib(cfg, modes, seed);
  } else if (profile == "custom") {
    if (manifest_path.empty())
      raise(Errc::bad_argument, "custom profile requires --manifest");
    result = bench::run_custom(model::parse_manifest_file(manifest_path), cfg,
                               modes, seed);
  } else {
    raise(Errc::bad_argument, "profile must be kws-gru|afib-bilstm|custom");
  }

  std::fputs(bench::to_table(result).c_str(), stdout);
  ordered_json j = envelope("bench");
  j["bench"] = report::to_json(result);
  finish_report(j, report_path, t0);
  return 0;
}

int cmd_acttable(const std::string& fn, const std::string& emit_path, bool verify) {
  const act::Kind kind = act::kind_from_name(fn);
  if (kind != act::Kind::tanh && kind != act::Kind::softsign)
    raise(Errc::bad_activation, "'" + fn + "' has no table (tanh|softsign only)");
  const act::PWLTable table = act::build_table(kind);

  if (!emit_path.empty()) {
    act::write_table_file(emit_path, table);
    std::printf("wrote %s\n", emit_path.c_str());
  }
  if (!verify) return 0;

  const act::Tables& tables = act::golden_tables();
  // Real-valued PWL against the double-precision function, step 2^-16.
  auto real_sweep = [&](act::Kind k) {
    const double span = (k == act::Kind::sigmoid) ? 16.0 : 8.0;
    double worst = 0.0;
    const long steps = static_cast<long>(span * 65536.0);
    for (long i = -steps; i < steps; ++i) {
      const double x = static_cast<double>(i) * 0x1.0p-16;
      const double approx =
          (k == act::Kind::sigmoid)
              ? (act::eval_table_real(tables.tanh_t, x / 2) + 1.0) / 2.0
              : act::eval_table_real(
                    k == act::Kind::tanh ? tables.tanh_t : tables.softsign_t, x);
      worst = std::max(worst, std::fabs(approx - act::eval_real(k, x)));
    }
    return worst;
  };
  // Fixed-point end to end over every int16 input at the canonical exponent.
  auto fixed_sweep = [&](act::Kind k) {
    double worst = 0.0;
    for (long xi = -32768; xi <= 32767; ++xi) {
      const auto x = static_cast<std::int16_t>(xi);
      const double rx = std::ldexp(static_cast<double>(xi), fxp::kQ12Exp);
      const double got = std::ldexp(
          static_cast<double>(act::eval_fixed(k, x, fxp::kQ12Exp, tables)),
          fxp::kQ14Exp);
      worst = std::max(worst, std::fabs(got - act::eval_real(k, rx)));
    }
    return worst;
  };

  bool ok = true;
  std::vector<act::Kind> kinds = {kind};
  if (kind == act::Kind::tanh) kinds.push_back(act::Kind::sigmoid);
  for (act::Kind k : kinds) {
    const double real_err = real_sweep(k);
    const double fixed_err = fixed_sweep(k);
    std::printf("%-8s real-PWL max err %.6e (bound 2.0e-4), fixed max err %.6e "
                "(bound 2.5e-4)\n",
                act::kind_name(k), real_err, fixed_err);
    ok = ok && real_err <= 2.0e-4 && fixed_err <= 2.5e-4;
  }
  if (!ok) {
    std::fprintf(stderr, "error: %s: activation error bound exceeded\n",
                 errc_name(Errc::out_of_bounds));
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RNN accelerator SDK: model compiler, bit-accurate simulator, "
               "validation tool and benchmarks"};
  app.require_subcommand(1);

  // compile
  std::string manifest_path, compress, out_path = "model.rnna", report_path;
  int wbits = 0;
  auto* compile_cmd = app.add_subcommand("compile", "compile a manifest to a loadable");
  compile_cmd->add_option("manifest", manifest_path, "manifest JSON path")->required();
  compile_cmd->add_option("--compress", compress, "none|5.3x|8x|16x (overrides manifest)");
  compile_cmd->add_option("--wbits", wbits, "weight lane width 8|16 (overrides manifest)");
  compile_cmd->add_option("-o,--output", out_path, "loadable output path");
  compile_cmd->add_option("--report", report_path, "write JSON report");

  // simulate
  std::string sim_loadable, sim_input, sim_output, sim_report;
  std::uint64_t sim_seed = 0;
  std::uint32_t sim_macs = 32, sim_pool = 12288;
  double sim_clock = 250.0;
  auto* sim_cmd = app.add_subcommand("simulate", "run a loadable on the MAC-array model");
  sim_cmd->add_option("loadable", sim_loadable, "loadable path")->required();
  sim_cmd->add_option("--input", sim_input, "raw int16 input (with .meta sidecar)");
  auto* seed_opt = sim_cmd->add_option("--random", sim_seed, "seeded random input");
  sim_cmd->add_option("--macs", sim_macs, "MAC count (power of two >= 8)");
  sim_cmd->add_option("--clock", sim_clock, "clock in MHz");
  sim_cmd->add_option("--pool", sim_pool, "local memory pool bytes");
  sim_cmd->add_option("--output", sim_output, "write outputs (int16 + sidecar)");
  sim_cmd->add_option("--report", sim_report, "write JSON report");

  // validate
  std::string val_manifest, val_loadable, val_report;
  int val_seeds = 10;
  double val_tol = ref::kDefaultTolerance;
  std::uint32_t val_macs = 32;
  double val_clock = 250.0;
  auto* val_cmd =
      app.add_subcommand("validate", "compare simulator against the float oracle");
  val_cmd->add_option("manifest", val_manifest, "manifest JSON path")->required();
  val_cmd->add_option("loadable", val_loadable, "loadable path")->required();
  val_cmd->add_option("--seeds", val_seeds, "number of seeded random inputs");
  val_cmd->add_option("--tolerance", val_tol, "max-abs-error tolerance");
  val_cmd->add_option("--macs", val_macs, "MAC count");
  val_cmd->add_option("--clock", val_clock, "clock in MHz");
  val_cmd->add_option("--report", val_report, "write JSON report");

  // bench
  std::string bench_profile, bench_manifest, bench_compress, bench_report;
  std::uint32_t bench_macs = 32;
  double bench_clock = 250.0;
  std::uint64_t bench_seed = bench::kDefaultSeed;
  auto* bench_cmd = app.add_subcommand("bench", "benchmark profiles");
  bench_cmd->add_option("profile", bench_profile, "kws-gru|afib-bilstm|custom")
      ->required();
  bench_cmd->add_option("--manifest", bench_manifest, "manifest for the custom profile");
  bench_cmd->add_option("--macs", bench_macs, "MAC count");
  bench_cmd->add_option("--clock", bench_clock, "clock in MHz");
  bench_cmd->add_option("--compress", bench_compress,
                        "restrict to one mode none|5.3x|8x|16x");
  bench_cmd->add_option("--seed", bench_seed, "synthetic weight seed");
  bench_cmd->add_option("--report", bench_report, "write JSON report");

  // acttable
  std::string act_fn, act_emit;
  bool act_verify = false;
  auto* act_cmd = app.add_subcommand("acttable", "dump or verify activation tables");
  act_cmd->add_option("--fn", act_fn, "tanh|softsign")->required();
  act_cmd->add_option("--emit", act_emit, "write the table as text");
  act_cmd->add_flag("--verify", act_verify, "run the exhaustive error sweeps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compile_cmd->parsed())
      return cmd_compile(manifest_path, compress, wbits, out_path, report_path);
    if (sim_cmd->parsed())
      return cmd_simulate(sim_loadable, sim_input,
                          seed_opt->count() > 0 ? std::optional<std::uint64_t>(sim_seed)
                                                : std::nullopt,
                          sim_macs, sim_clock, sim_pool, sim_output, sim_report);
    if (val_cmd->parsed())
      return cmd_validate(val_manifest, val_loadable, val_seeds, val_tol, val_macs,
                          val_clock, val_report);
    if (bench_cmd->parsed())
      return cmd_bench(bench_profile, bench_manifest, bench_macs, bench_clock,
                       bench_compress, bench_seed, bench_report);
    if (act_cmd->parsed()) return cmd_acttable(act_fn, act_emit, act_verify);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", errc_name(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: E_UNKNOWN: %s\n", e.what());
    return 1;
  }
  return 0;
}
