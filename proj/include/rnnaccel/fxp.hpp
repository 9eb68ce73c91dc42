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
#ifndef RNNACCEL_FXP_HPP_
#define RNNACCEL_FXP_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace rnnaccel::fxp {

// Fixed-point semantics of the datapath. Every produced or consumed value
// is an integer in an 8/16/32-bit lane with a per-tensor power-of-two scale:
//   real_value = stored_integer * 2^exponent
// Rounding is round-half-to-even throughout and overflow always saturates
// (never wraps); saturation is a counted event, not an error.

struct QFormat {
  std::uint8_t bits;      // lane width: 8, 16 or 32
  std::int32_t exponent;  // real = stored * 2^exponent
};

// Activation/hidden currency: Q1.14, i.e. int16 with exponent -14 (1.0=16384).
inline constexpr std::int32_t kQ14Exp = -14;
// LSTM cell currency: Q2.13 (saturation doubles as a cell clip at +-4).
inline constexpr std::int32_t kQ13Exp = -13;
// Canonical activation-unit input: Q4.12, domain [-8, 8).
inline constexpr std::int32_t kQ12Exp = -12;
inline constexpr std::int16_t kQ14One = 16384;

std::int64_t lane_min(int bits);
std::int64_t lane_max(int bits);

// Integer tensor, row-major. Vectors use rows=len, cols=1. Storage is int32
// regardless of lane width; construction validates every element fits.
struct QTensor {
  std::uint32_t rows = 0;
  std::uint32_t cols = 1;
  std::vector<std::int32_t> data;
  QFormat fmt{16, 0};

  std::size_t size() const { return data.size(); }
  std::int32_t at(std::uint32_t r, std::uint32_t c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  // Throws Errc::bad_argument if shape/data/lane are inconsistent.
  void validate() const;
};

enum class WeightMode : std::uint8_t { w8 = 8, w16 = 16 };

// MAC accumulator. w8 mode pairs a 16-bit activation with an 8-bit weight
// and bounds the running sum to 32 bits; w16 pairs two 8-bit units into a
// 16x16 MAC bounded to 40 bits. The saturated flag is sticky for the
// duration of one dot product.
struct Accumulator {
  std::int64_t value = 0;
  int bound_bits = 32;  // 32 (w8) or 40 (w16)
  bool saturated = false;
};

Accumulator make_accumulator(WeightMode mode);

// acc += a*w, exact product, saturating at the mode bound.
void mac(Accumulator& acc, std::int16_t a, std::int32_t w);

struct Requant {
  std::int16_t value = 0;
  bool saturated = false;
};

// Round-half-to-even arithmetic right shift (shift >= 0).
std::int64_t rhe_shift_right(std::int64_t v, int shift);
// Round-half-to-even for doubles (no fenv dependence).
double round_half_even(double x);

Requant saturate_int16(std::int64_t v);

// Accumulator -> int16 lane: round_half_to_even(value / 2^shift), saturated.
// shift = e_out - (e_a + e_w), computed by the caller; must be >= 0.
Requant requantize(const Accumulator& acc, int shift);

// Q1.14 x Q1.14 -> Q1.14 element-wise product.
Requant emul_q14(std::int16_t a, std::int16_t b);

// Element-wise product across formats: the exact product (scale e_a+e_b) is
// shifted right by e_out - (e_a + e_b) with round-half-to-even, then
// saturated to int16. Requires e_out >= e_a + e_b.
Requant emul(std::int16_t a, std::int32_t e_a, std::int16_t b, std::int32_t e_b,
             std::int32_t e_out);

// Smallest e with round(max|v| / 2^e) <= 2^(bits-1)-1; all-zero -> -(bits-1).
// Throws Errc::non_finite on NaN/inf input.
int choose_exponent(std::span<const double> values, int bits);

}  // namespace rnnaccel::fxp

#endif  // RNNACCEL_FXP_HPP_
