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
#include "rnnaccel/activation.hpp"

#include <cmath>
#include <cstdlib>

#include "rnnaccel/errors.hpp"
#include "rnnaccel/fxp.hpp"

namespace rnnaccel::act {
namespace {

constexpr int kSegments = 256;
constexpr double kStep = 1.0 / 32.0;       // segment width
constexpr int kFitSamples = 256;           // per-segment error samples (plus endpoint)

#include "pwl_tables_data.inc"

double fn_real(Kind k, double x) {
  switch (k) {
    case Kind::tanh: return std::tanh(x);
    case Kind::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Kind::softsign: return x / (1.0 + std::fabs(x));
    case Kind::relu: return x > 0.0 ? x : 0.0;
    case Kind::identity: return x;
  }
  std::abort();
}

std::int16_t sat_value_for(Kind fn) {
  if (fn == Kind::tanh) return fxp::kQ14One;
  // softsign(8) = 8/9
  return static_cast<std::int16_t>(fxp::round_half_even((8.0 / 9.0) * 16384.0));
}

// Max abs error of the integer-coefficient segment against f, sampled on the
// same grid the fit uses.
double segment_error(Kind fn, int s, int c0, int c1) {
  const double x0 = s * kStep;
  double worst = 0.0;
  for (int i = 0; i <= kFitSamples; ++i) {
    const double u = static_cast<double>(i) / kFitSamples;
    const double y = (c0 + c1 * u) / 16384.0;
    worst = std::max(worst, std::fabs(fn_real(fn, x0 + u * kStep) - y));
  }
  return worst;
}

// Requantize a raw int16 + exponent into Q1.14 with int16 saturation.
std::int16_t to_q14(std::int16_t x, std::int32_t e_x) {
  const int shift = e_x - fxp::kQ14Exp;  // e_x + 14
  if (shift >= 0) {
    if (x == 0) return 0;
    if (shift > 30) return x > 0 ? 32767 : -32768;
    return fxp::saturate_int16(static_cast<std::int64_t>(x) << shift).value;
  }
  return fxp::saturate_int16(fxp::rhe_shift_right(x, -shift)).value;
}

// Shared tanh/softsign path. extra_shift=1 implements the sigmoid
// half-argument transform. Returns a Q1.14 value with odd symmetry applied.
std::int16_t table_path(const PWLTable& tab, std::int16_t x, std::int32_t e_x,
                        int extra_shift) {
  const bool neg = x < 0;
  const std::int64_t ax = neg ? -static_cast<std::int64_t>(x) : x;
  if (ax == 0) return 0;
  const int shift = e_x + 12 - extra_shift;  // |x| * 2^(e_x+12) -> Q4.12
  std::int64_t q;
  if (shift >= 0) {
    q = (shift > 20) ? std::int64_t{1} << 20 : (ax << shift);
  } else {
    q = fxp::rhe_shift_right(ax, -shift);
  }
  if (q >= 32768) return neg ? static_cast<std::int16_t>(-tab.sat_value) : tab.sat_value;
  const int s = static_cast<int>(q >> 7);
  const int frac7 = static_cast<int>(q & 127);
  const std::int32_t y =
      tab.seg[s].c0 + ((static_cast<std::int32_t>(tab.seg[s].c1) * frac7 + 64) >> 7);
  return static_cast<std::int16_t>(neg ? -y : y);
}

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::tanh: return "tanh";
    case Kind::sigmoid: return "sigmoid";
    case Kind::softsign: return "softsign";
    case Kind::relu: return "relu";
    case Kind::identity: return "identity";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  if (name == "tanh") return Kind::tanh;
  if (name == "sigmoid") return Kind::sigmoid;
  if (name == "softsign") return Kind::softsign;
  if (name == "relu") return Kind::relu;
  if (name == "identity") return Kind::identity;
  raise(Errc::bad_activation, "unknown activation '" + name + "'");
}

PWLTable build_table(Kind fn) {
  PWLTable t;
  t.fn = fn;
  t.sat_value = sat_value_for(fn);
  const std::int16_t* c0 = nullptr;
  const std::int16_t* c1 = nullptr;
  switch (fn) {
    case Kind::tanh: c0 = kTanhC0; c1 = kTanhC1; break;
    case Kind::softsign: c0 = kSoftsignC0; c1 = kSoftsignC1; break;
    default: raise(Errc::bad_activation, "no table for this activation");
  }
  for (int s = 0; s < kSegments; ++s) t.seg[s] = {c0[s], c1[s]};
  return t;
}

PWLTable fit_table(Kind fn) {
  if (fn != Kind::tanh && fn != Kind::softsign)
    raise(Errc::bad_activation, "no table for this activation");
  PWLTable t;
  t.fn = fn;
  t.sat_value = sat_value_for(fn);

  for (int s = 0; s < kSegments; ++s) {
    const double x0 = s * kStep;
    const double x1 = x0 + kStep;
    const double f0 = fn_real(fn, x0);
    const double rise = fn_real(fn, x1) - f0;

    int best_c0 = 0, best_c1 = 0;
    double best_err = 1e9;
    if (s == 0) {
      // f(0) = 0 is pinned; only the slope is searched.
      const int c1_mid = static_cast<int>(fxp::round_half_even(rise * 16384.0));
      for (int c1 = c1_mid - 8; c1 <= c1_mid + 8; ++c1) {
        const double err = segment_error(fn, s, 0, c1);
        if (err < best_err) {
          best_err = err;
          best_c1 = c1;
        }
      }
    } else {
      // Chord slope; offset shifted to split the peak deviation, then a small
      // search over neighbouring integer coefficients.
      double d_hi = -1e9, d_lo = 1e9;
      for (int i = 0; i <= kFitSamples; ++i) {
        const double u = static_cast<double>(i) / kFitSamples;
        const double d = fn_real(fn, x0 + u * kStep) - (f0 + rise * u);
        d_hi = std::max(d_hi, d);
        d_lo = std::min(d_lo, d);
      }
      const double alpha = f0 + 0.5 * (d_hi + d_lo);
      const int c0_mid = static_cast<int>(fxp::round_half_even(alpha * 16384.0));
      const int c1_mid = static_cast<int>(fxp::round_half_even(rise * 16384.0));
      for (int c0 = c0_mid - 2; c0 <= c0_mid + 2; ++c0) {
        for (int c1 = c1_mid - 2; c1 <= c1_mid + 2; ++c1) {
          const double err = segment_error(fn, s, c0, c1);
          if (err < best_err) {
            best_err = err;
            best_c0 = c0;
            best_c1 = c1;
          }
        }
      }
    }
    t.seg[s] = {static_cast<std::int16_t>(best_c0), static_cast<std::int16_t>(best_c1)};
  }

  // In-domain values may not exceed the saturation output.
  for (int s = 0; s < kSegments; ++s) {
    if (t.seg[s].c0 > t.sat_value) t.seg[s].c0 = t.sat_value;
    if (t.seg[s].c1 < 0) t.seg[s].c1 = 0;
    while (t.seg[s].c0 + ((static_cast<std::int32_t>(t.seg[s].c1) * 127 + 64) >> 7) >
           t.sat_value)
      --t.seg[s].c1;
  }
  // The evaluator must be non-decreasing across segment boundaries: the start
  // of segment s may not undercut the last interpolated point of s-1. Raising
  // c0 can push the segment end past sat_value, so c1 is re-clamped.
  for (int s = 1; s < kSegments; ++s) {
    const std::int32_t prev_end =
        t.seg[s - 1].c0 + ((static_cast<std::int32_t>(t.seg[s - 1].c1) * 127 + 64) >> 7);
    if (t.seg[s].c0 < prev_end) t.seg[s].c0 = static_cast<std::int16_t>(prev_end);
    while (t.seg[s].c0 + ((static_cast<std::int32_t>(t.seg[s].c1) * 127 + 64) >> 7) >
               t.sat_value &&
           t.seg[s].c1 > 0)
      --t.seg[s].c1;
  }
  return t;
}

const Tables& golden_tables() {
  static const Tables tables{build_table(Kind::tanh), build_table(Kind::softsign)};
  return tables;
}

std::int16_t eval_fixed(Kind k, std::int16_t x, std::int32_t e_x,
                        const Tables& tables) {
  switch (k) {
    case Kind::tanh:
      return table_path(tables.tanh_t, x, e_x, 0);
    case Kind::softsign:
      return table_path(tables.softsign_t, x, e_x, 0);
    case Kind::sigmoid: {
      const std::int16_t t = table_path(tables.tanh_t, x, e_x, 1);
      return static_cast<std::int16_t>((t + fxp::kQ14One) >> 1);
    }
    case Kind::relu: {
      const std::int16_t v = to_q14(x, e_x);
      return v < 0 ? 0 : v;
    }
    case Kind::identity:
      return to_q14(x, e_x);
  }
  std::abort();
}

double eval_real(Kind k, double x) {
  if (!std::isfinite(x)) raise(Errc::non_finite, "eval_real: non-finite input");
  return fn_real(k, x);
}

double eval_table_real(const PWLTable& table, double x) {
  const double sign = x < 0 ? -1.0 : 1.0;
  const double ax = std::fabs(x);
  if (ax >= 8.0) return sign * table.sat_value / 16384.0;
  int s = static_cast<int>(ax * 32.0);
  if (s > 255) s = 255;
  const double u = ax * 32.0 - s;
  return sign * (table.seg[s].c0 + table.seg[s].c1 * u) / 16384.0;
}

}  // namespace rnnaccel::act
