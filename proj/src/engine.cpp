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
#include "rnnaccel/engine.hpp"

#include <bit>

#include "rnnaccel/errors.hpp"

namespace rnnaccel::engine {
namespace {

// Pre-activation staging exponents. Sigmoid reads the tanh table on the
// half argument, which doubles its usable domain to [-16, 16): feeding it at
// Q5.11 keeps that whole range addressable. Tanh/softsign saturate at 8 and
// take the canonical Q4.12.
std::int32_t preact_exponent(act::Kind k) {
  return (k == act::Kind::sigmoid) ? -11 : fxp::kQ12Exp;
}

}  // namespace

void EngineConfig::validate() const {
  if (n_macs < 8 || !std::has_single_bit(n_macs))
    raise(Errc::bad_argument, "n_macs must be a power of two >= 8");
  if (clock_mhz <= 0.0) raise(Errc::bad_argument, "clock_mhz must be positive");
}

void MemoryPool::reserve(std::uint64_t bytes) {
  if (used_ + bytes > budget_)
    raise(Errc::pool_overflow, "memory pool exceeded: " +
                                   std::to_string(used_ + bytes) + " of " +
                                   std::to_string(budget_) + " bytes");
  used_ += bytes;
}

void MemoryPool::release(std::uint64_t bytes) {
  used_ = (bytes > used_) ? 0 : used_ - bytes;
}

Session::Session(const model::CompiledModel& m, const EngineConfig& cfg,
                 MemoryPool* pool)
    : model_(m), cfg_(cfg), pool_(pool) {
  cfg_.validate();
  cfg_.weight_mode =
      m.weight_bits == 8 ? fxp::WeightMode::w8 : fxp::WeightMode::w16;

  const std::uint64_t need = m.state_bytes();
  if (pool_) {
    pool_->reserve(need);
    reserved_bytes_ = need;
  } else if (need > cfg_.pool_bytes) {
    raise(Errc::pool_overflow, "model state needs " + std::to_string(need) +
                                   " bytes, pool holds " +
                                   std::to_string(cfg_.pool_bytes));
  }

  h_.resize(m.layers.size());
  c_.resize(m.layers.size());
  layer_reports_.resize(m.layers.size());
  trace_.per_layer.resize(m.layers.size());
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    const auto& l = m.layers[i];
    layer_reports_[i].name = std::string(model::layer_type_name(l.type)) + "_" +
                             std::to_string(i);
    if (l.type != model::LayerType::fc) h_[i].assign(l.output_dim, 0);
    if (l.type == model::LayerType::lstm) c_[i].assign(l.output_dim, 0);
  }
}

Session::~Session() {
  if (pool_) pool_->release(reserved_bytes_);
}

void Session::reset_state() {
  for (auto& h : h_) std::fill(h.begin(), h.end(), std::int16_t{0});
  for (auto& c : c_) std::fill(c.begin(), c.end(), std::int16_t{0});
}

void Session::set_hidden(std::size_t layer, std::span<const std::int16_t> h) {
  if (layer >= h_.size() || h.size() != h_[layer].size())
    raise(Errc::dim_mismatch, "set_hidden: bad layer or length");
  h_[layer].assign(h.begin(), h.end());
}

void Session::set_cell(std::size_t layer, std::span<const std::int16_t> c) {
  if (layer >= c_.size() || c.size() != c_[layer].size())
    raise(Errc::dim_mismatch, "set_cell: bad layer or length");
  c_[layer].assign(c.begin(), c.end());
}

std::uint32_t Session::effective_macs() const {
  return cfg_.weight_mode == fxp::WeightMode::w16 ? cfg_.n_macs / 2 : cfg_.n_macs;
}

std::uint64_t Session::matvec_cycles(std::uint32_t rows, std::uint32_t cols,
                                     bool compressed) const {
  const std::uint32_t n = effective_macs();
  const std::uint64_t passes = (rows + n - 1) / n;
  std::uint64_t per_pass = cols + cfg_.p_drain;
  if (compressed) per_pass += cfg_.decompress_stall_cycles;
  return passes * per_pass;
}

void Session::charge_boundary(std::size_t li) {
  if (!first_op_in_pass_) layer_reports_[li].cycles += cfg_.d_dep;
  first_op_in_pass_ = false;
}

Session::MatvecOut Session::matvec(const model::CompiledLayer& l, std::size_t gate,
                                   std::span<const std::int16_t> invec,
                                   LayerReport& lr) {
  const auto& wt = l.weights[gate];
  const auto& bt = l.biases[gate];
  const std::uint32_t rows = wt.q.rows, cols = wt.q.cols;

  MatvecOut out;
  out.acc.resize(rows);
  for (std::uint32_t r = 0; r < rows; ++r) {
    fxp::Accumulator acc = fxp::make_accumulator(cfg_.weight_mode);
    // Bias is stored at the accumulator scale and loaded before streaming.
    const std::int64_t bound = (std::int64_t{1} << (acc.bound_bits - 1)) - 1;
    acc.value = bt.q.data[r];
    if (acc.value > bound) {
      acc.value = bound;
      acc.saturated = true;
    } else if (acc.value < -bound) {
      acc.value = -bound;
      acc.saturated = true;
    }
    const std::int32_t* wrow = wt.q.data.data() + static_cast<std::size_t>(r) * cols;
    for (std::uint32_t cidx = 0; cidx < cols; ++cidx)
      fxp::mac(acc, invec[cidx], wrow[cidx]);
    if (acc.saturated) {
      ++lr.saturation_events;
      out.any_saturation = true;
    }
    out.acc[r] = acc.value;
  }

  lr.cycles += matvec_cycles(rows, cols, wt.compressed);
  const std::uint64_t lane_ops = cfg_.weight_mode == fxp::WeightMode::w16 ? 2 : 1;
  lr.useful_mac_ops += lane_ops * static_cast<std::uint64_t>(rows) * cols;
  lr.weight_bytes_read +=
      wt.compressed ? wt.stored.size()
                    : static_cast<std::uint64_t>(rows) * cols * (model_.weight_bits / 8);
  return out;
}

std::int16_t Session::requant_acc(std::int64_t acc, int shift_right,
                                  LayerReport& lr) {
  fxp::Requant rq;
  if (shift_right >= 0) {
    rq = fxp::saturate_int16(fxp::rhe_shift_right(acc, shift_right));
  } else {
    const int up = -shift_right;
    // Magnitudes beyond the int16 band after an up-shift always clip.
    if (up > 24 && acc != 0) {
      rq = {acc > 0 ? std::int16_t{32767} : std::int16_t{-32768}, true};
    } else {
      rq = fxp::saturate_int16(acc << up);
    }
  }
  if (rq.saturated) ++lr.saturation_events;
  return rq.value;
}

std::vector<std::int16_t> Session::gate_activation(const MatvecOut& mv,
                                                   act::Kind kind,
                                                   std::int32_t e_acc,
                                                   LayerReport& lr) {
  const std::int32_t e_pre = preact_exponent(kind);
  std::vector<std::int16_t> out(mv.acc.size());
  for (std::size_t i = 0; i < mv.acc.size(); ++i) {
    const std::int16_t pre = requant_acc(mv.acc[i], e_pre - e_acc, lr);
    out[i] = act::eval_fixed(kind, pre, e_pre, act::golden_tables());
  }
  return out;
}

void Session::step_gru(std::size_t li, std::span<const std::int16_t> x,
                       std::vector<std::int16_t>& out) {
  const auto& l = model_.layers[li];
  LayerReport& lr = layer_reports_[li];
  charge_boundary(li);
  std::vector<std::int16_t>& h = h_[li];
  const std::uint32_t n = l.output_dim;

  std::vector<std::int16_t> xh(l.input_dim + n);
  std::copy(x.begin(), x.end(), xh.begin());
  std::copy(h.begin(), h.end(), xh.begin() + l.input_dim);

  // z and r gates over [x; h].
  const std::int32_t e_acc_z = fxp::kQ14Exp + l.weights[0].q.fmt.exponent;
  const std::int32_t e_acc_r = fxp::kQ14Exp + l.weights[1].q.fmt.exponent;
  const auto z = gate_activation(matvec(l, 0, xh, lr), act::Kind::sigmoid, e_acc_z, lr);
  const auto r = gate_activation(matvec(l, 1, xh, lr), act::Kind::sigmoid, e_acc_r, lr);

  // Candidate over [x; r (.) h]; the element-wise product is a dependency
  // boundary between the r gate and the candidate mat-vec.
  lr.cycles += cfg_.d_dep;
  for (std::uint32_t i = 0; i < n; ++i) {
    const fxp::Requant rq = fxp::emul_q14(r[i], h[i]);
    if (rq.saturated) ++lr.saturation_events;
    xh[l.input_dim + i] = rq.value;
  }
  const std::int32_t e_acc_h = fxp::kQ14Exp + l.weights[2].q.fmt.exponent;
  const auto cand = gate_activation(matvec(l, 2, xh, lr), act::Kind::tanh, e_acc_h, lr);

  // Update h' = (1-z)(.)cand + z(.)h behind a second boundary.
  lr.cycles += cfg_.d_dep;
  out.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::int16_t one_minus_z = static_cast<std::int16_t>(fxp::kQ14One - z[i]);
    const fxp::Requant a = fxp::emul_q14(one_minus_z, cand[i]);
    const fxp::Requant b = fxp::emul_q14(z[i], h[i]);
    if (a.saturated) ++lr.saturation_events;
    if (b.saturated) ++lr.saturation_events;
    const fxp::Requant sum =
        fxp::saturate_int16(static_cast<std::int64_t>(a.value) + b.value);
    if (sum.saturated) ++lr.saturation_events;
    out[i] = sum.value;
  }
  h.assign(out.begin(), out.end());
}

void Session::step_lstm(std::size_t li, std::span<const std::int16_t> x,
                        std::vector<std::int16_t>& out) {
  const auto& l = model_.layers[li];
  LayerReport& lr = layer_reports_[li];
  charge_boundary(li);
  std::vector<std::int16_t>& h = h_[li];
  std::vector<std::int16_t>& c = c_[li];
  const std::uint32_t n = l.output_dim;

  std::vector<std::int16_t> xh(l.input_dim + n);
  std::copy(x.begin(), x.end(), xh.begin());
  std::copy(h.begin(), h.end(), xh.begin() + l.input_dim);

  auto gate = [&](std::size_t g, act::Kind kind) {
    const std::int32_t e_acc = fxp::kQ14Exp + l.weights[g].q.fmt.exponent;
    return gate_activation(matvec(l, g, xh, lr), kind, e_acc, lr);
  };
  const auto gi = gate(0, act::Kind::sigmoid);
  const auto gf = gate(1, act::Kind::sigmoid);
  const auto gg = gate(2, act::Kind::tanh);
  const auto go = gate(3, act::Kind::sigmoid);

  // c' = f(.)c + i(.)g in Q2.13 (saturation doubles as the cell clip),
  // then h' = o(.)tanh(c'), one boundary before each element-wise stage.
  lr.cycles += cfg_.d_dep;
  out.resize(n);
  std::vector<std::int16_t> new_c(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    const fxp::Requant fc = fxp::emul(gf[j], fxp::kQ14Exp, c[j], fxp::kQ13Exp,
                                      fxp::kQ13Exp);
    const fxp::Requant ig = fxp::emul(gi[j], fxp::kQ14Exp, gg[j], fxp::kQ14Exp,
                                      fxp::kQ13Exp);
    if (fc.saturated) ++lr.saturation_events;
    if (ig.saturated) ++lr.saturation_events;
    const fxp::Requant sum =
        fxp::saturate_int16(static_cast<std::int64_t>(fc.value) + ig.value);
    if (sum.saturated) ++lr.saturation_events;
    new_c[j] = sum.value;
  }
  lr.cycles += cfg_.d_dep;
  for (std::uint32_t j = 0; j < n; ++j) {
    const std::int16_t tc =
        act::eval_fixed(act::Kind::tanh, new_c[j], fxp::kQ13Exp, act::golden_tables());
    const fxp::Requant hq = fxp::emul_q14(go[j], tc);
    if (hq.saturated) ++lr.saturation_events;
    out[j] = hq.value;
  }
  h.assign(out.begin(), out.end());
  c.assign(new_c.begin(), new_c.end());
}

void Session::run_fc(std::size_t li, std::span<const std::int16_t> x,
                     std::vector<std::int16_t>& out, bool final_layer) {
  const auto& l = model_.layers[li];
  LayerReport& lr = layer_reports_[li];
  charge_boundary(li);

  const MatvecOut mv = matvec(l, 0, x, lr);
  const std::int32_t e_acc = fxp::kQ14Exp + l.weights[0].q.fmt.exponent;
  out.resize(mv.acc.size());
  switch (l.activation) {
    case act::Kind::identity:
    case act::Kind::relu:
      for (std::size_t i = 0; i < mv.acc.size(); ++i) {
        std::int16_t v = requant_acc(mv.acc[i], fxp::kQ14Exp - e_acc, lr);
        if (l.activation == act::Kind::relu && v < 0) v = 0;
        out[i] = v;
      }
      break;
    default: {
      const auto table_out = gate_activation(mv, l.activation, e_acc, lr);
      std::copy(table_out.begin(), table_out.end(), out.begin());
      break;
    }
  }
  if (final_layer) {
    last_logits_ = mv.acc;
    last_logits_exp_ = e_acc;
  }
}

std::vector<std::int16_t> Session::fc_suffix(std::span<const std::int16_t> x) {
  std::vector<std::int16_t> cur(x.begin(), x.end());
  std::vector<std::int16_t> next;
  for (std::size_t li = 0; li < model_.layers.size(); ++li) {
    if (model_.layers[li].type != model::LayerType::fc) continue;
    run_fc(li, cur, next, li + 1 == model_.layers.size());
    if (cfg_.record_trace) trace_.per_layer[li].push_back(next);
    cur = next;
  }
  return cur;
}

std::vector<std::int16_t> Session::step(std::span<const std::int16_t> x) {
  if (x.size() != model_.input_dim())
    raise(Errc::dim_mismatch, "input frame length " + std::to_string(x.size()) +
                                  " != input_dim " +
                                  std::to_string(model_.input_dim()));
  first_op_in_pass_ = true;
  layer_reports_.front().input_bytes_read += 2 * x.size();

  std::vector<std::int16_t> cur(x.begin(), x.end());
  std::vector<std::int16_t> next;
  for (std::size_t li = 0; li < model_.layers.size(); ++li) {
    const auto& l = model_.layers[li];
    switch (l.type) {
      case model::LayerType::gru: step_gru(li, cur, next); break;
      case model::LayerType::lstm: step_lstm(li, cur, next); break;
      case model::LayerType::fc:
        run_fc(li, cur, next, li + 1 == model_.layers.size());
        break;
    }
    if (cfg_.record_trace) trace_.per_layer[li].push_back(next);
    cur = next;
  }
  ++n_inferences_;
  layer_reports_.back().output_bytes_written += 2 * cur.size();
  return cur;
}

std::vector<std::int16_t> Session::run(std::span<const std::int16_t> xs) {
  const std::uint32_t in_dim = model_.input_dim();
  if (xs.empty() || xs.size() % in_dim != 0)
    raise(Errc::dim_mismatch, "input length must be a positive multiple of " +
                                  std::to_string(in_dim));
  const std::size_t steps = xs.size() / in_dim;

  bool has_recurrent = false;
  for (const auto& l : model_.layers)
    if (l.type != model::LayerType::fc) has_recurrent = true;

  if (model_.exec_mode == model::ExecMode::streaming || !has_recurrent) {
    std::vector<std::int16_t> all;
    for (std::size_t t = 0; t < steps; ++t) {
      const auto out = step(xs.subspan(t * in_dim, in_dim));
      all.insert(all.end(), out.begin(), out.end());
    }
    return all;
  }

  // Batch: T timesteps through the recurrent prefix (the hidden-state
  // recurrence is a dependency boundary between steps), FC suffix once.
  first_op_in_pass_ = true;
  std::vector<std::int16_t> cur, next;
  for (std::size_t t = 0; t < steps; ++t) {
    layer_reports_.front().input_bytes_read += 2 * in_dim;
    cur.assign(xs.begin() + t * in_dim, xs.begin() + (t + 1) * in_dim);
    for (std::size_t li = 0; li < model_.layers.size(); ++li) {
      const auto& l = model_.layers[li];
      if (l.type == model::LayerType::fc) break;
      if (l.type == model::LayerType::gru) step_gru(li, cur, next);
      else step_lstm(li, cur, next);
      if (cfg_.record_trace) trace_.per_layer[li].push_back(next);
      cur = next;
    }
  }
  const auto out = fc_suffix(cur);
  ++n_inferences_;
  layer_reports_.back().output_bytes_written += 2 * out.size();
  return out;
}

SimReport Session::report() const {
  SimReport r;
  r.n_macs = cfg_.n_macs;
  r.clock_mhz = cfg_.clock_mhz;
  r.layers = layer_reports_;
  for (const auto& lr : layer_reports_) {
    r.total_cycles += lr.cycles;
    r.useful_mac_ops += lr.useful_mac_ops;
    r.weight_bytes_read += lr.weight_bytes_read;
    r.input_bytes_read += lr.input_bytes_read;
    r.output_bytes_written += lr.output_bytes_written;
    r.saturation_events += lr.saturation_events;
  }
  r.n_inferences = n_inferences_;
  if (r.total_cycles > 0) {
    r.utilization = static_cast<double>(r.useful_mac_ops) /
                    (static_cast<double>(cfg_.n_macs) * r.total_cycles);
  }
  if (n_inferences_ > 0) {
    r.cycles_per_inference =
        static_cast<double>(r.total_cycles) / static_cast<double>(n_inferences_);
    if (r.cycles_per_inference > 0)
      r.inferences_per_second = cfg_.clock_mhz * 1e6 / r.cycles_per_inference;
  }
  r.peak_gops = cfg_.n_macs * cfg_.clock_mhz * 2.0 / 1000.0;
  r.achieved_gops = r.utilization * r.peak_gops;
  return r;
}

InferenceResult run_inference(const model::CompiledModel& m,
                              std::span<const std::int16_t> input_q14,
                              const EngineConfig& cfg) {
  Session s(m, cfg);
  InferenceResult res;
  res.outputs = s.run(input_q14);
  res.report = s.report();
  res.trace = s.trace();
  return res;
}

}  // namespace rnnaccel::engine
