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
#include "rnnaccel/loadable.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "rnnaccel/errors.hpp"
#include "rnnaccel/version.hpp"

namespace rnnaccel::model {
namespace {

// Container layout (all little-endian, offsets in bytes):
//   header   16 B : magic u32 ("RNNA"), version u16, weight_bits u8,
//                   compression_b u8, n_layers u16, seq_len u16, exec_mode u8,
//                   reserved u8, n_tensors u16
//   layers   32 B each : type u8, activation u8, input_dim u16,
//                   output_dim u16, tensor indices u16 x 8 (slots 0-3 gate
//                   weights, 4-7 gate biases, 0xFFFF unused), reserved 10 B
//   tensors  14 B each : offset u32 (into blob section), length u32,
//                   rows u16, cols u16, kind u8 (0 weight / 1 bias), e i8
//   blobs    raw LE integers, or codec blobs for compressed weights

constexpr std::uint32_t kMagic = 0x414E4E52u;  // "RNNA"
constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kLayerRecBytes = 32;
constexpr std::size_t kTensorRecBytes = 14;
constexpr std::uint16_t kNoTensor = 0xFFFF;
constexpr std::uint32_t kMaxDim = 4096;
constexpr std::uint32_t kMaxSeqLen = 1024;
constexpr std::size_t kMaxLayers = 256;
constexpr std::uint64_t kMaxDecodedBytes = 256ull << 20;

struct TensorRecRaw {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
  std::uint16_t rows = 0;
  std::uint16_t cols = 0;
  std::uint8_t kind = 0;
  std::int8_t e = 0;
};

struct Writer {
  std::vector<std::uint8_t> out;
  void u8(std::uint8_t v) { out.push_back(v); }
  void i8(std::int8_t v) { out.push_back(static_cast<std::uint8_t>(v)); }
  void u16(std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v));
    u16(static_cast<std::uint16_t>(v >> 16));
  }
  void bytes(std::span<const std::uint8_t> b) { out.insert(out.end(), b.begin(), b.end()); }
};

struct Reader {
  std::span<const std::uint8_t> buf;
  std::size_t at = 0;
  void need(std::size_t n, const char* what) {
    if (at + n > buf.size()) raise(Errc::truncated, std::string("truncated ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return buf[at++];
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    const std::uint16_t v = static_cast<std::uint16_t>(buf[at]) |
                            (static_cast<std::uint16_t>(buf[at + 1]) << 8);
    at += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    const std::uint32_t lo = u16(what);
    return lo | (static_cast<std::uint32_t>(u16(what)) << 16);
  }
};

std::string layer_tag(std::size_t i) { return "layer " + std::to_string(i); }

act::Kind activation_from_byte(std::uint8_t b, std::size_t layer) {
  if (b > 4) raise(Errc::bad_activation, layer_tag(layer) + ": bad activation byte");
  return static_cast<act::Kind>(b);
}

LayerType layer_type_from_byte(std::uint8_t b, std::size_t layer) {
  if (b > 2) raise(Errc::bad_layer_type, layer_tag(layer) + ": bad layer type byte");
  return static_cast<LayerType>(b);
}

void validate_topology(const std::vector<CompiledLayer>& layers) {
  if (layers.empty()) raise(Errc::bad_manifest, "model has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].input_dim < 1 || layers[i].input_dim > kMaxDim ||
        layers[i].output_dim < 1 || layers[i].output_dim > kMaxDim)
      raise(Errc::dim_mismatch, layer_tag(i) + ": dims out of range");
  }
  bool seen_fc = false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.type == LayerType::fc) {
      seen_fc = true;
    } else if (seen_fc) {
      raise(Errc::bad_layer_type, layer_tag(i) + ": recurrent layer after FC layer");
    }
    if (i + 1 < layers.size() && l.output_dim != layers[i + 1].input_dim)
      raise(Errc::dim_mismatch, layer_tag(i) + ": output_dim " +
                                    std::to_string(l.output_dim) + " != " +
                                    layer_tag(i + 1) + " input_dim " +
                                    std::to_string(layers[i + 1].input_dim));
  }
}

std::vector<float> read_f32_file(const std::filesystem::path& path,
                                 std::size_t expect_count, const std::string& ctx) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(Errc::missing_file, ctx + ": cannot open " + path.string());
  is.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(is.tellg());
  if (bytes != expect_count * 4)
    raise(Errc::bad_file_size, ctx + ": " + path.string() + " is " +
                                   std::to_string(bytes) + " bytes, expected " +
                                   std::to_string(expect_count * 4));
  is.seekg(0);
  std::vector<std::uint8_t> raw(bytes);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (!is) raise(Errc::io_error, ctx + ": short read from " + path.string());
  std::vector<float> vals(expect_count);
  for (std::size_t i = 0; i < expect_count; ++i) {
    std::uint32_t u = static_cast<std::uint32_t>(raw[4 * i]) |
                      (static_cast<std::uint32_t>(raw[4 * i + 1]) << 8) |
                      (static_cast<std::uint32_t>(raw[4 * i + 2]) << 16) |
                      (static_cast<std::uint32_t>(raw[4 * i + 3]) << 24);
    vals[i] = std::bit_cast<float>(u);
  }
  return vals;
}

CompiledTensor make_weight_tensor(std::span<const double> w, std::uint32_t rows,
                                  std::uint32_t cols, int weight_bits,
                                  int compression_b, const std::string& ctx) {
  CompiledTensor t;
  t.kind = 0;
  if (compression_b != 0) {
    const codec::Blob blob = codec::compress(w, compression_b, weight_bits);
    t.compressed = true;
    t.stored = blob.to_bytes();
    t.q.rows = rows;
    t.q.cols = cols;
    t.q.fmt = {static_cast<std::uint8_t>(weight_bits), blob.e_w};
    t.q.data = codec::decompress(blob);
    return t;
  }
  const int e = fxp::choose_exponent(w, weight_bits);
  // e must fit the i8 record and leave e-14 (bias scale) representable too.
  if (e < -114 || e > 127)
    raise(Errc::exponent_range, ctx + ": weight exponent " + std::to_string(e) +
                                    " outside the representable range");
  t.q.rows = rows;
  t.q.cols = cols;
  t.q.fmt = {static_cast<std::uint8_t>(weight_bits), e};
  t.q.data.resize(w.size());
  Writer wr;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::int32_t v =
        static_cast<std::int32_t>(fxp::round_half_even(std::ldexp(w[i], -e)));
    t.q.data[i] = v;
    if (weight_bits == 8) {
      wr.i8(static_cast<std::int8_t>(v));
    } else {
      wr.u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }
  }
  t.stored = std::move(wr.out);
  return t;
}

CompiledTensor make_bias_tensor(std::span<const double> b, int e_acc,
                                const std::string& ctx) {
  CompiledTensor t;
  t.kind = 1;
  t.q.rows = static_cast<std::uint32_t>(b.size());
  t.q.cols = 1;
  t.q.fmt = {32, e_acc};
  t.q.data.resize(b.size());
  Writer wr;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double scaled = fxp::round_half_even(std::ldexp(b[i], -e_acc));
    if (scaled > 2147483647.0 || scaled < -2147483648.0)
      raise(Errc::exponent_range, ctx + ": bias out of int32 range at accumulator scale");
    const std::int32_t v = static_cast<std::int32_t>(scaled);
    t.q.data[i] = v;
    wr.u32(static_cast<std::uint32_t>(v));
  }
  t.stored = std::move(wr.out);
  return t;
}

}  // namespace

const char* layer_type_name(LayerType t) {
  switch (t) {
    case LayerType::fc: return "FC";
    case LayerType::lstm: return "LSTM";
    case LayerType::gru: return "GRU";
  }
  return "?";
}

int gate_count(LayerType t) {
  switch (t) {
    case LayerType::fc: return 1;
    case LayerType::lstm: return 4;
    case LayerType::gru: return 3;
  }
  return 0;
}

std::uint64_t CompiledModel::state_bytes() const {
  std::uint64_t total = 0;
  for (const auto& l : layers) {
    if (l.type == LayerType::gru) total += 2ull * l.output_dim;
    if (l.type == LayerType::lstm) total += 4ull * l.output_dim;  // h + c
  }
  return total;
}

Manifest parse_manifest(const std::string& json_text,
                        const std::filesystem::path& base_dir, bool check_files) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::bad_manifest, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) raise(Errc::bad_manifest, "manifest root must be an object");

  Manifest m;
  m.base_dir = base_dir;
  try {
    m.network = j.at("network").get<std::string>();
    m.seq_len = j.at("seq_len").get<std::uint32_t>();
    const std::string mode = j.at("exec_mode").get<std::string>();
    if (mode == "batch") m.exec_mode = ExecMode::batch;
    else if (mode == "streaming") m.exec_mode = ExecMode::streaming;
    else raise(Errc::bad_manifest, "exec_mode must be 'batch' or 'streaming'");
    m.weight_bits = j.at("weight_bits").get<int>();
    const auto& comp = j.at("compression");
    if (comp.is_string() && comp.get<std::string>() == "none") m.compression_b = 0;
    else if (comp.is_number_integer()) m.compression_b = comp.get<int>();
    else raise(Errc::bad_manifest, "compression must be 'none' or 2/4/6");
    if (!j.at("layers").is_array() || j.at("layers").empty())
      raise(Errc::bad_manifest, "layers must be a non-empty array");

    std::size_t idx = 0;
    for (const auto& jl : j.at("layers")) {
      ManifestLayer l;
      const std::string type = jl.at("type").get<std::string>();
      if (type == "FC") l.type = LayerType::fc;
      else if (type == "LSTM") l.type = LayerType::lstm;
      else if (type == "GRU") l.type = LayerType::gru;
      else raise(Errc::bad_layer_type, layer_tag(idx) + ": unknown type '" + type + "'");
      l.input_dim = jl.at("input_dim").get<std::uint32_t>();
      l.output_dim = jl.at("output_dim").get<std::uint32_t>();
      if (jl.contains("activation")) {
        if (l.type != LayerType::fc)
          raise(Errc::bad_activation,
                layer_tag(idx) + ": activation is only valid on FC layers");
        l.activation = act::kind_from_name(jl.at("activation").get<std::string>());
      }
      l.weight_files = jl.at("weights").get<std::vector<std::string>>();
      l.bias_files = jl.at("bias").get<std::vector<std::string>>();
      const auto gates = static_cast<std::size_t>(gate_count(l.type));
      if (l.weight_files.size() != gates)
        raise(Errc::bad_manifest, layer_tag(idx) + ": expected " +
                                      std::to_string(gates) + " weight files, got " +
                                      std::to_string(l.weight_files.size()));
      if (l.bias_files.size() != gates)
        raise(Errc::bad_manifest, layer_tag(idx) + ": expected " +
                                      std::to_string(gates) + " bias files, got " +
                                      std::to_string(l.bias_files.size()));
      m.layers.push_back(std::move(l));
      ++idx;
    }
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::bad_manifest, std::string("manifest field error: ") + e.what());
  }

  if (m.seq_len < 1 || m.seq_len > kMaxSeqLen)
    raise(Errc::bad_manifest, "seq_len out of range [1, 1024]");
  if (m.weight_bits != 8 && m.weight_bits != 16)
    raise(Errc::bad_manifest, "weight_bits must be 8 or 16");
  if (m.compression_b != 0 && m.compression_b != 2 && m.compression_b != 4 &&
      m.compression_b != 6)
    raise(Errc::bad_manifest, "compression must be 'none' or 2/4/6");
  if (m.layers.size() > kMaxLayers)
    raise(Errc::bad_manifest, "too many layers (max 256)");

  // Structural checks mirror the loadable validator.
  {
    std::vector<CompiledLayer> probe(m.layers.size());
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
      probe[i].type = m.layers[i].type;
      probe[i].input_dim = m.layers[i].input_dim;
      probe[i].output_dim = m.layers[i].output_dim;
    }
    validate_topology(probe);
  }

  if (check_files) {
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
      const auto& l = m.layers[i];
      const std::uint32_t cols =
          l.input_dim + (l.type == LayerType::fc ? 0 : l.output_dim);
      for (int g = 0; g < gate_count(l.type); ++g) {
        read_f32_file(m.base_dir / l.weight_files[g],
                      static_cast<std::size_t>(l.output_dim) * cols, layer_tag(i));
        read_f32_file(m.base_dir / l.bias_files[g], l.output_dim, layer_tag(i));
      }
    }
  }
  return m;
}

Manifest parse_manifest_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) raise(Errc::missing_file, "cannot open manifest " + path.string());
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return parse_manifest(text, path.parent_path().empty() ? "." : path.parent_path());
}

std::uint64_t parameter_count(const Manifest& m) {
  std::uint64_t total = 0;
  for (const auto& l : m.layers) {
    const std::uint64_t h = l.output_dim, i = l.input_dim;
    switch (l.type) {
      case LayerType::fc: total += h * i + h; break;
      case LayerType::gru: total += 3 * (h * (h + i) + h); break;
      case LayerType::lstm: total += 4 * (h * (h + i) + h); break;
    }
  }
  return total;
}

LayerWeights read_layer_weights(const Manifest& m, std::size_t layer_idx) {
  const auto& l = m.layers.at(layer_idx);
  const std::uint32_t cols = l.input_dim + (l.type == LayerType::fc ? 0 : l.output_dim);
  LayerWeights out;
  for (int g = 0; g < gate_count(l.type); ++g) {
    const auto wf = read_f32_file(m.base_dir / l.weight_files[g],
                                  static_cast<std::size_t>(l.output_dim) * cols,
                                  layer_tag(layer_idx));
    const auto bf =
        read_f32_file(m.base_dir / l.bias_files[g], l.output_dim, layer_tag(layer_idx));
    out.gates.emplace_back(wf.begin(), wf.end());
    out.biases.emplace_back(bf.begin(), bf.end());
  }
  return out;
}

std::vector<std::uint8_t> compile_from_data(const Manifest& m,
                                            const std::vector<LayerWeights>& data) {
  if (data.size() != m.layers.size())
    raise(Errc::bad_argument, "compile_from_data: layer data count mismatch");

  {
    std::vector<CompiledLayer> probe(m.layers.size());
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
      probe[i].type = m.layers[i].type;
      probe[i].input_dim = m.layers[i].input_dim;
      probe[i].output_dim = m.layers[i].output_dim;
    }
    validate_topology(probe);
  }

  CompiledModel cm;
  cm.version = kLoadableVersion;
  cm.weight_bits = m.weight_bits;
  cm.compression_b = m.compression_b;
  cm.seq_len = m.seq_len;
  cm.exec_mode = m.exec_mode;

  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    const auto& ml = m.layers[i];
    CompiledLayer cl;
    cl.type = ml.type;
    cl.activation = ml.activation;
    cl.input_dim = ml.input_dim;
    cl.output_dim = ml.output_dim;
    const std::uint32_t cols = cl.fused_cols();
    const auto gates = static_cast<std::size_t>(gate_count(ml.type));
    if (data[i].gates.size() != gates || data[i].biases.size() != gates)
      raise(Errc::bad_argument, layer_tag(i) + ": gate data count mismatch");
    for (std::size_t g = 0; g < gates; ++g) {
      const auto& w = data[i].gates[g];
      const auto& b = data[i].biases[g];
      if (w.size() != static_cast<std::size_t>(ml.output_dim) * cols)
        raise(Errc::dim_mismatch, layer_tag(i) + ": weight data size mismatch");
      if (b.size() != ml.output_dim)
        raise(Errc::dim_mismatch, layer_tag(i) + ": bias data size mismatch");
      CompiledTensor wt = make_weight_tensor(w, ml.output_dim, cols, m.weight_bits,
                                             m.compression_b, layer_tag(i));
      // Input and recurrent halves share the accumulator, so one exponent per
      // fused gate matrix; bias lives at the accumulator scale e_x + e_w.
      const int e_acc = fxp::kQ14Exp + wt.q.fmt.exponent;
      cl.weights.push_back(std::move(wt));
      cl.biases.push_back(make_bias_tensor(b, e_acc, layer_tag(i)));
    }
    cm.layers.push_back(std::move(cl));
  }
  return emit(cm);
}

std::vector<std::uint8_t> compile(const Manifest& m) {
  std::vector<LayerWeights> data;
  data.reserve(m.layers.size());
  for (std::size_t i = 0; i < m.layers.size(); ++i)
    data.push_back(read_layer_weights(m, i));
  return compile_from_data(m, data);
}

std::vector<std::uint8_t> emit(const CompiledModel& m) {
  // Tensor table order: traversal order, weights then biases within a layer.
  std::vector<const CompiledTensor*> tensors;
  for (const auto& l : m.layers) {
    for (const auto& t : l.weights) tensors.push_back(&t);
    for (const auto& t : l.biases) tensors.push_back(&t);
  }
  if (tensors.size() >= kNoTensor)
    raise(Errc::resource_limit, "too many tensors for the index width");

  Writer w;
  w.u32(kMagic);
  w.u16(m.version);
  w.u8(static_cast<std::uint8_t>(m.weight_bits));
  w.u8(static_cast<std::uint8_t>(m.compression_b));
  w.u16(static_cast<std::uint16_t>(m.layers.size()));
  w.u16(static_cast<std::uint16_t>(m.seq_len));
  w.u8(static_cast<std::uint8_t>(m.exec_mode));
  w.u8(0);
  w.u16(static_cast<std::uint16_t>(tensors.size()));

  std::uint16_t next_idx = 0;
  for (const auto& l : m.layers) {
    w.u8(static_cast<std::uint8_t>(l.type));
    w.u8(static_cast<std::uint8_t>(l.activation));
    w.u16(static_cast<std::uint16_t>(l.input_dim));
    w.u16(static_cast<std::uint16_t>(l.output_dim));
    const int gates = gate_count(l.type);
    for (int slot = 0; slot < 4; ++slot)
      w.u16(slot < gates ? next_idx + slot : kNoTensor);
    for (int slot = 0; slot < 4; ++slot)
      w.u16(slot < gates ? next_idx + gates + slot : kNoTensor);
    for (int pad = 0; pad < 10; ++pad) w.u8(0);
    next_idx = static_cast<std::uint16_t>(next_idx + 2 * gates);
  }

  std::uint32_t offset = 0;
  for (const CompiledTensor* t : tensors) {
    w.u32(offset);
    w.u32(static_cast<std::uint32_t>(t->stored.size()));
    w.u16(static_cast<std::uint16_t>(t->q.rows));
    w.u16(static_cast<std::uint16_t>(t->q.cols));
    w.u8(t->kind);
    w.i8(static_cast<std::int8_t>(t->q.fmt.exponent));
    offset += static_cast<std::uint32_t>(t->stored.size());
  }
  for (const CompiledTensor* t : tensors) w.bytes(t->stored);
  return std::move(w.out);
}

CompiledModel load(std::span<const std::uint8_t> bytes) {
  Reader r{bytes};
  if (bytes.size() < kHeaderBytes) raise(Errc::truncated, "shorter than header");
  if (r.u32("magic") != kMagic) raise(Errc::bad_magic, "loadable magic mismatch");
  CompiledModel m;
  m.version = r.u16("version");
  if (m.version != kLoadableVersion)
    raise(Errc::unsupported_version,
          "loadable version " + std::to_string(m.version) + " unsupported");
  m.weight_bits = r.u8("weight_bits");
  m.compression_b = r.u8("compression");
  const std::uint16_t n_layers = r.u16("layer count");
  m.seq_len = r.u16("seq_len");
  const std::uint8_t mode = r.u8("exec_mode");
  r.u8("reserved");
  const std::uint16_t n_tensors = r.u16("tensor count");

  if (m.weight_bits != 8 && m.weight_bits != 16)
    raise(Errc::corrupt_blob, "weight_bits not in {8,16}");
  if (m.compression_b != 0 && m.compression_b != 2 && m.compression_b != 4 &&
      m.compression_b != 6)
    raise(Errc::corrupt_blob, "compression not in {none,2,4,6}");
  if (n_layers == 0 || n_layers > kMaxLayers)
    raise(Errc::corrupt_blob, "layer count out of range");
  if (m.seq_len < 1 || m.seq_len > kMaxSeqLen)
    raise(Errc::corrupt_blob, "seq_len out of range");
  if (mode > 1) raise(Errc::corrupt_blob, "bad exec_mode");
  m.exec_mode = static_cast<ExecMode>(mode);

  struct RawLayer {
    LayerType type;
    act::Kind activation;
    std::uint32_t in, out;
    std::uint16_t slots[8];
  };
  std::vector<RawLayer> raw(n_layers);
  std::uint32_t expected_tensors = 0;
  for (std::size_t i = 0; i < n_layers; ++i) {
    RawLayer& rl = raw[i];
    rl.type = layer_type_from_byte(r.u8("layer record"), i);
    rl.activation = activation_from_byte(r.u8("layer record"), i);
    rl.in = r.u16("layer record");
    rl.out = r.u16("layer record");
    for (auto& s : rl.slots) s = r.u16("layer record");
    for (int pad = 0; pad < 10; ++pad) r.u8("layer record");
    const int gates = gate_count(rl.type);
    for (int slot = 0; slot < 4; ++slot) {
      const bool used = slot < gates;
      if (used != (rl.slots[slot] != kNoTensor) ||
          used != (rl.slots[4 + slot] != kNoTensor))
        raise(Errc::corrupt_blob, layer_tag(i) + ": tensor slot usage mismatch");
    }
    expected_tensors += 2u * static_cast<std::uint32_t>(gates);
  }
  if (expected_tensors != n_tensors)
    raise(Errc::corrupt_blob, "tensor count does not match layer table");

  std::vector<TensorRecRaw> recs;
  recs.reserve(n_tensors);
  std::uint64_t declared_total = 0;
  for (std::size_t t = 0; t < n_tensors; ++t) {
    TensorRecRaw rec;
    rec.offset = r.u32("tensor record");
    rec.length = r.u32("tensor record");
    rec.rows = r.u16("tensor record");
    rec.cols = r.u16("tensor record");
    rec.kind = r.u8("tensor record");
    rec.e = static_cast<std::int8_t>(r.u8("tensor record"));
    if (rec.kind > 1)
      raise(Errc::corrupt_blob, "tensor " + std::to_string(t) + ": bad kind");
    declared_total += rec.length;
    recs.push_back(rec);
  }
  if (declared_total > kMaxDecodedBytes)
    raise(Errc::resource_limit, "declared tensor bytes exceed the decode limit");

  const std::size_t blob_start = r.at;
  const std::size_t blob_size = bytes.size() - blob_start;

  auto decode_tensor = [&](std::uint16_t idx, std::uint8_t expect_kind,
                           std::uint32_t rows, std::uint32_t cols) {
    if (idx >= recs.size())
      raise(Errc::out_of_bounds, "tensor index " + std::to_string(idx) + " out of range");
    const TensorRecRaw& rec = recs[idx];
    const std::string tag = "tensor " + std::to_string(idx);
    if (rec.kind != expect_kind) raise(Errc::corrupt_blob, tag + ": wrong kind");
    if (rec.rows != rows || rec.cols != cols)
      raise(Errc::dim_mismatch, tag + ": shape " + std::to_string(rec.rows) + "x" +
                                    std::to_string(rec.cols) +
                                    " inconsistent with layer dims");
    if (static_cast<std::uint64_t>(rec.offset) + rec.length > blob_size)
      raise(Errc::out_of_bounds, tag + ": blob range out of bounds");
    const std::span<const std::uint8_t> body =
        bytes.subspan(blob_start + rec.offset, rec.length);
    const std::size_t count = static_cast<std::size_t>(rows) * cols;

    CompiledTensor ct;
    ct.kind = rec.kind;
    ct.q.rows = rows;
    ct.q.cols = cols;
    ct.stored.assign(body.begin(), body.end());

    if (rec.kind == 1) {  // bias: raw int32 LE
      if (rec.length != count * 4) raise(Errc::corrupt_blob, tag + ": bias length");
      ct.q.fmt = {32, rec.e};
      ct.q.data.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t u = static_cast<std::uint32_t>(body[4 * i]) |
                          (static_cast<std::uint32_t>(body[4 * i + 1]) << 8) |
                          (static_cast<std::uint32_t>(body[4 * i + 2]) << 16) |
                          (static_cast<std::uint32_t>(body[4 * i + 3]) << 24);
        ct.q.data[i] = static_cast<std::int32_t>(u);
      }
      return ct;
    }

    ct.q.fmt = {static_cast<std::uint8_t>(m.weight_bits), rec.e};
    if (m.compression_b == 0) {
      const std::size_t lane = static_cast<std::size_t>(m.weight_bits) / 8;
      if (rec.length != count * lane)
        raise(Errc::corrupt_blob, tag + ": weight length inconsistent with shape");
      ct.q.data.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        if (m.weight_bits == 8) {
          ct.q.data[i] = static_cast<std::int8_t>(body[i]);
        } else {
          ct.q.data[i] = static_cast<std::int16_t>(
              static_cast<std::uint16_t>(body[2 * i]) |
              (static_cast<std::uint16_t>(body[2 * i + 1]) << 8));
        }
      }
      return ct;
    }

    codec::Blob blob;
    try {
      blob = codec::Blob::from_bytes(body);
    } catch (const Error& e) {
      raise(Errc::corrupt_blob, tag + ": " + e.what());
    }
    if (blob.bits_per_index != m.compression_b)
      raise(Errc::corrupt_blob, tag + ": blob index width != header compression");
    if (blob.entry_width != m.weight_bits)
      raise(Errc::corrupt_blob, tag + ": blob entry width != weight_bits");
    if (blob.n != count) raise(Errc::corrupt_blob, tag + ": blob count != shape");
    if (blob.e_w != rec.e)
      raise(Errc::corrupt_blob, tag + ": blob exponent != tensor record");
    ct.compressed = true;
    ct.q.data = codec::decompress(blob);
    return ct;
  };

  for (std::size_t i = 0; i < n_layers; ++i) {
    const RawLayer& rl = raw[i];
    CompiledLayer cl;
    cl.type = rl.type;
    cl.activation = rl.activation;
    cl.input_dim = rl.in;
    cl.output_dim = rl.out;
    const std::uint32_t cols = cl.fused_cols();
    const int gates = gate_count(rl.type);
    for (int g = 0; g < gates; ++g) {
      cl.weights.push_back(decode_tensor(rl.slots[g], 0, rl.out, cols));
      cl.biases.push_back(decode_tensor(rl.slots[4 + g], 1, rl.out, 1));
    }
    m.layers.push_back(std::move(cl));
  }
  validate_topology(m.layers);
  for (const auto& l : m.layers) {
    for (const auto& t : l.weights) t.q.validate();
    for (const auto& t : l.biases) t.q.validate();
  }
  return m;
}

std::vector<TensorInfo> tensor_summary(const CompiledModel& m) {
  static const char* kGruGates = "zrh";
  static const char* kLstmGates = "ifgo";
  std::vector<TensorInfo> out;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    const auto& l = m.layers[i];
    for (std::size_t g = 0; g < l.weights.size(); ++g) {
      std::string gate;
      if (l.type == LayerType::gru) gate = std::string(1, kGruGates[g]);
      if (l.type == LayerType::lstm) gate = std::string(1, kLstmGates[g]);
      const std::string base = "layer" + std::to_string(i) + "." +
                               layer_type_name(l.type) + (gate.empty() ? "" : "." + gate);
      out.push_back({base + ".w", l.weights[g].q.rows, l.weights[g].q.cols,
                     l.weights[g].q.fmt.exponent, l.weights[g].compressed,
                     l.weights[g].stored.size()});
      out.push_back({base + ".b", l.biases[g].q.rows, l.biases[g].q.cols,
                     l.biases[g].q.fmt.exponent, false, l.biases[g].stored.size()});
    }
  }
  return out;
}

}  // namespace rnnaccel::model
