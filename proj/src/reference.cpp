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
#include "rnnaccel/reference.hpp"

#include <cmath>

#include "rnnaccel/errors.hpp"

namespace rnnaccel::ref {
namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) raise(Errc::non_finite, std::string(what) + " diverged");
}

std::vector<double> matvec(const std::vector<double>& w, const std::vector<double>& b,
                           std::span<const double> x, std::uint32_t rows,
                           std::uint32_t cols) {
  std::vector<double> out(rows);
  for (std::uint32_t r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* row = w.data() + static_cast<std::size_t>(r) * cols;
    for (std::uint32_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
  return out;
}

std::vector<double> apply(act::Kind k, std::vector<double> v) {
  for (double& x : v) x = act::eval_real(k, x);
  return v;
}

struct State {
  std::vector<std::vector<double>> h, c;
};

std::vector<double> step_layer(const FloatLayer& l, std::span<const double> x,
                               State& st, std::size_t li) {
  const std::uint32_t n = l.output_dim;
  const std::uint32_t cols = l.input_dim + (l.type == model::LayerType::fc ? 0 : n);
  std::vector<double> xh(cols);
  std::copy(x.begin(), x.end(), xh.begin());

  switch (l.type) {
    case model::LayerType::fc:
      return apply(l.activation, matvec(l.gates[0], l.biases[0], xh, n, cols));
    case model::LayerType::gru: {
      auto& h = st.h[li];
      std::copy(h.begin(), h.end(), xh.begin() + l.input_dim);
      const auto z = apply(act::Kind::sigmoid, matvec(l.gates[0], l.biases[0], xh, n, cols));
      const auto r = apply(act::Kind::sigmoid, matvec(l.gates[1], l.biases[1], xh, n, cols));
      for (std::uint32_t i = 0; i < n; ++i) xh[l.input_dim + i] = r[i] * h[i];
      const auto cand = apply(act::Kind::tanh, matvec(l.gates[2], l.biases[2], xh, n, cols));
      std::vector<double> out(n);
      for (std::uint32_t i = 0; i < n; ++i)
        out[i] = (1.0 - z[i]) * cand[i] + z[i] * h[i];
      h = out;
      return out;
    }
    case model::LayerType::lstm: {
      auto& h = st.h[li];
      auto& c = st.c[li];
      std::copy(h.begin(), h.end(), xh.begin() + l.input_dim);
      const auto gi = apply(act::Kind::sigmoid, matvec(l.gates[0], l.biases[0], xh, n, cols));
      const auto gf = apply(act::Kind::sigmoid, matvec(l.gates[1], l.biases[1], xh, n, cols));
      const auto gg = apply(act::Kind::tanh, matvec(l.gates[2], l.biases[2], xh, n, cols));
      const auto go = apply(act::Kind::sigmoid, matvec(l.gates[3], l.biases[3], xh, n, cols));
      std::vector<double> out(n);
      for (std::uint32_t j = 0; j < n; ++j) {
        c[j] = gf[j] * c[j] + gi[j] * gg[j];
        out[j] = go[j] * std::tanh(c[j]);
      }
      h = out;
      return out;
    }
  }
  raise(Errc::bad_layer_type, "unknown layer type");
}

}  // namespace

FloatModel from_data(const model::Manifest& m,
                     const std::vector<model::LayerWeights>& data) {
  if (data.size() != m.layers.size())
    raise(Errc::bad_argument, "layer data count mismatch");
  FloatModel fm;
  fm.seq_len = m.seq_len;
  fm.exec_mode = m.exec_mode;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    FloatLayer fl;
    fl.type = m.layers[i].type;
    fl.activation = m.layers[i].activation;
    fl.input_dim = m.layers[i].input_dim;
    fl.output_dim = m.layers[i].output_dim;
    fl.gates = data[i].gates;
    fl.biases = data[i].biases;
    fm.layers.push_back(std::move(fl));
  }
  return fm;
}

FloatModel from_manifest(const model::Manifest& m) {
  std::vector<model::LayerWeights> data;
  for (std::size_t i = 0; i < m.layers.size(); ++i)
    data.push_back(model::read_layer_weights(m, i));
  return from_data(m, data);
}

FloatModel from_compiled(const model::CompiledModel& m) {
  FloatModel fm;
  fm.seq_len = m.seq_len;
  fm.exec_mode = m.exec_mode;
  for (const auto& cl : m.layers) {
    FloatLayer fl;
    fl.type = cl.type;
    fl.activation = cl.activation;
    fl.input_dim = cl.input_dim;
    fl.output_dim = cl.output_dim;
    for (const auto& t : cl.weights) {
      std::vector<double> w(t.q.data.size());
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::ldexp(static_cast<double>(t.q.data[i]), t.q.fmt.exponent);
      fl.gates.push_back(std::move(w));
    }
    for (const auto& t : cl.biases) {
      std::vector<double> b(t.q.data.size());
      for (std::size_t i = 0; i < b.size(); ++i)
        b[i] = std::ldexp(static_cast<double>(t.q.data[i]), t.q.fmt.exponent);
      fl.biases.push_back(std::move(b));
    }
    fm.layers.push_back(std::move(fl));
  }
  return fm;
}

ForwardResult forward(const FloatModel& m, std::span<const double> inputs,
                      const InitialState* init) {
  if (m.layers.empty()) raise(Errc::bad_argument, "empty model");
  const std::uint32_t in_dim = m.layers.front().input_dim;
  if (inputs.empty() || inputs.size() % in_dim != 0)
    raise(Errc::dim_mismatch, "input length must be a positive multiple of input_dim");
  check_finite(inputs, "input");
  const std::size_t steps = inputs.size() / in_dim;

  State st;
  st.h.resize(m.layers.size());
  st.c.resize(m.layers.size());
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    if (m.layers[i].type != model::LayerType::fc)
      st.h[i].assign(m.layers[i].output_dim, 0.0);
    if (m.layers[i].type == model::LayerType::lstm)
      st.c[i].assign(m.layers[i].output_dim, 0.0);
  }
  if (init) {
    for (std::size_t i = 0; i < m.layers.size() && i < init->h.size(); ++i)
      if (!init->h[i].empty()) st.h[i] = init->h[i];
    for (std::size_t i = 0; i < m.layers.size() && i < init->c.size(); ++i)
      if (!init->c[i].empty()) st.c[i] = init->c[i];
  }

  ForwardResult res;
  res.layer_traj.resize(m.layers.size());

  bool has_recurrent = false;
  for (const auto& l : m.layers)
    if (l.type != model::LayerType::fc) has_recurrent = true;

  auto fc_suffix = [&](std::vector<double> cur) {
    for (std::size_t li = 0; li < m.layers.size(); ++li) {
      if (m.layers[li].type != model::LayerType::fc) continue;
      cur = step_layer(m.layers[li], cur, st, li);
      check_finite(cur, "fc output");
      res.layer_traj[li].push_back(cur);
    }
    return cur;
  };

  if (m.exec_mode == model::ExecMode::streaming || !has_recurrent) {
    for (std::size_t t = 0; t < steps; ++t) {
      std::vector<double> cur(inputs.begin() + t * in_dim,
                              inputs.begin() + (t + 1) * in_dim);
      for (std::size_t li = 0; li < m.layers.size(); ++li) {
        cur = step_layer(m.layers[li], cur, st, li);
        check_finite(cur, "layer output");
        res.layer_traj[li].push_back(cur);
      }
      res.outputs.push_back(cur);
    }
    return res;
  }

  std::vector<double> cur;
  for (std::size_t t = 0; t < steps; ++t) {
    cur.assign(inputs.begin() + t * in_dim, inputs.begin() + (t + 1) * in_dim);
    for (std::size_t li = 0; li < m.layers.size(); ++li) {
      if (m.layers[li].type == model::LayerType::fc) break;
      cur = step_layer(m.layers[li], cur, st, li);
      check_finite(cur, "layer output");
      res.layer_traj[li].push_back(cur);
    }
  }
  res.outputs.push_back(fc_suffix(cur));
  return res;
}

ValidationReport validate(const model::CompiledModel& compiled,
                          const FloatModel& oracle,
                          std::span<const std::int16_t> input_q14,
                          const engine::EngineConfig& cfg, double tolerance) {
  if (compiled.layers.size() != oracle.layers.size())
    raise(Errc::dim_mismatch, "topology mismatch: layer counts differ");
  for (std::size_t i = 0; i < compiled.layers.size(); ++i) {
    const auto& a = compiled.layers[i];
    const auto& b = oracle.layers[i];
    if (a.type != b.type || a.input_dim != b.input_dim || a.output_dim != b.output_dim)
      raise(Errc::dim_mismatch,
            "topology mismatch at layer " + std::to_string(i));
  }

  engine::EngineConfig traced = cfg;
  traced.record_trace = true;
  engine::Session session(compiled, traced);
  const auto outputs = session.run(input_q14);
  const engine::Trace& trace = session.trace();

  std::vector<double> real_in(input_q14.size());
  for (std::size_t i = 0; i < input_q14.size(); ++i)
    real_in[i] = std::ldexp(static_cast<double>(input_q14[i]), fxp::kQ14Exp);
  const ForwardResult fwd = forward(oracle, real_in);

  ValidationReport rep;
  rep.tolerance = tolerance;
  rep.layers.resize(compiled.layers.size());

  for (std::size_t li = 0; li < compiled.layers.size(); ++li) {
    rep.layers[li].name = std::string(model::layer_type_name(compiled.layers[li].type)) +
                          "_" + std::to_string(li);
    const auto& fixed_steps = trace.per_layer[li];
    const auto& real_steps = fwd.layer_traj[li];
    if (fixed_steps.size() != real_steps.size())
      raise(Errc::dim_mismatch, "trace step counts differ at layer " + std::to_string(li));
    double sq = 0.0;
    std::uint64_t count = 0;
    for (std::size_t t = 0; t < fixed_steps.size(); ++t) {
      for (std::size_t i = 0; i < real_steps[t].size(); ++i) {
        const double got =
            std::ldexp(static_cast<double>(fixed_steps[t][i]), fxp::kQ14Exp);
        const double err = std::fabs(got - real_steps[t][i]);
        rep.layers[li].max_abs_err = std::max(rep.layers[li].max_abs_err, err);
        sq += err * err;
        ++count;
      }
    }
    if (count > 0) rep.layers[li].rms_err = std::sqrt(sq / static_cast<double>(count));
    rep.elements_compared += count;
  }

  // Final outputs: engine emits int16 Q1.14 rows matching oracle outputs.
  double sq = 0.0;
  std::size_t flat = 0;
  for (std::size_t t = 0; t < fwd.outputs.size(); ++t) {
    for (std::size_t i = 0; i < fwd.outputs[t].size(); ++i, ++flat) {
      const double got =
          std::ldexp(static_cast<double>(outputs[flat]), fxp::kQ14Exp);
      const double err = std::fabs(got - fwd.outputs[t][i]);
      if (err > rep.final_max_abs_err) {
        rep.final_max_abs_err = err;
        rep.worst_step = t;
        rep.worst_index = i;
      }
      sq += err * err;
    }
  }
  if (flat > 0) rep.final_rms_err = std::sqrt(sq / static_cast<double>(flat));
  rep.pass = rep.final_max_abs_err <= tolerance;
  return rep;
}

}  // namespace rnnaccel::ref
