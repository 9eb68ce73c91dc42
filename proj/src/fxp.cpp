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
#include "rnnaccel/fxp.hpp"

#include <cmath>
#include <cstdlib>

#include "rnnaccel/errors.hpp"

namespace rnnaccel::fxp {

std::int64_t lane_min(int bits) {
  return -(std::int64_t{1} << (bits - 1));
}

std::int64_t lane_max(int bits) {
  return (std::int64_t{1} << (bits - 1)) - 1;
}

void QTensor::validate() const {
  if (fmt.bits != 8 && fmt.bits != 16 && fmt.bits != 32)
    raise(Errc::bad_argument, "QTensor lane width must be 8, 16 or 32");
  if (static_cast<std::size_t>(rows) * cols != data.size())
    raise(Errc::bad_argument, "QTensor shape product != data length");
  const std::int64_t lo = lane_min(fmt.bits), hi = lane_max(fmt.bits);
  for (std::int32_t v : data) {
    if (v < lo || v > hi)
      raise(Errc::bad_argument, "QTensor element out of lane range");
  }
}

Accumulator make_accumulator(WeightMode mode) {
  Accumulator acc;
  acc.bound_bits = (mode == WeightMode::w8) ? 32 : 40;
  return acc;
}

void mac(Accumulator& acc, std::int16_t a, std::int32_t w) {
  const std::int64_t bound = (std::int64_t{1} << (acc.bound_bits - 1)) - 1;
  // |acc| <= 2^39 and |a*w| <= 2^30: the int64 sum is exact.
  std::int64_t v = acc.value + static_cast<std::int64_t>(a) * w;
  if (v > bound) {
    v = bound;
    acc.saturated = true;
  } else if (v < -bound) {
    v = -bound;
    acc.saturated = true;
  }
  acc.value = v;
}

std::int64_t rhe_shift_right(std::int64_t v, int shift) {
  if (shift <= 0) return v;
  // For |v| < 2^62 every shift beyond 63 rounds to the same value as 63,
  // and 63 keeps the bit arithmetic below defined (|v| never exceeds 2^40
  // in the datapath).
  if (shift > 63) shift = 63;
  std::int64_t q = v >> shift;  // floor
  const std::int64_t r = v - (q << shift);
  const std::int64_t half = std::int64_t{1} << (shift - 1);
  if (r > half || (r == half && (q & 1))) ++q;
  return q;
}

double round_half_even(double x) {
  const double fl = std::floor(x);
  const double diff = x - fl;
  if (diff > 0.5) return fl + 1.0;
  if (diff < 0.5) return fl;
  // Tie: pick the even neighbour.
  return (std::fmod(fl, 2.0) == 0.0) ? fl : fl + 1.0;
}

Requant saturate_int16(std::int64_t v) {
  if (v > 32767) return {32767, true};
  if (v < -32768) return {-32768, true};
  return {static_cast<std::int16_t>(v), false};
}

Requant requantize(const Accumulator& acc, int shift) {
  if (shift < 0) raise(Errc::bad_argument, "requantize shift must be >= 0");
  return saturate_int16(rhe_shift_right(acc.value, shift));
}

Requant emul_q14(std::int16_t a, std::int16_t b) {
  const std::int64_t p = static_cast<std::int64_t>(a) * b;
  return saturate_int16(rhe_shift_right(p, 14));
}

Requant emul(std::int16_t a, std::int32_t e_a, std::int16_t b, std::int32_t e_b,
             std::int32_t e_out) {
  const int shift = e_out - (e_a + e_b);
  if (shift < 0) raise(Errc::bad_argument, "emul output scale too fine");
  const std::int64_t p = static_cast<std::int64_t>(a) * b;
  return saturate_int16(rhe_shift_right(p, shift));
}

int choose_exponent(std::span<const double> values, int bits) {
  if (values.empty()) raise(Errc::bad_argument, "choose_exponent: empty input");
  double m = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) raise(Errc::non_finite, "choose_exponent: non-finite value");
    m = std::max(m, std::fabs(v));
  }
  if (m == 0.0) return -(bits - 1);
  const double limit = static_cast<double>(lane_max(bits));
  int e = std::ilogb(m) - bits - 1;
  while (round_half_even(std::ldexp(m, -e)) > limit) ++e;
  return e;
}

}  // namespace rnnaccel::fxp
