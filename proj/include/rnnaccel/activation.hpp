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
#ifndef RNNACCEL_ACTIVATION_HPP_
#define RNNACCEL_ACTIVATION_HPP_

#include <array>
#include <cstdint>
#include <string>

namespace rnnaccel::act {

// Multi-mode activation unit. Tanh and Softsign each own a 256-segment
// piecewise-linear table over [0, 8) (step 1/32), extended by odd symmetry.
// Sigmoid owns no table: sigmoid(x) = (tanh(x/2) + 1) / 2 is evaluated on the
// tanh table with one extra right shift on the input. Relu and Identity are
// exact (no table).
enum class Kind : std::uint8_t {
  tanh = 0,
  sigmoid = 1,
  softsign = 2,
  relu = 3,
  identity = 4,
};

const char* kind_name(Kind k);
// Parses "tanh" | "sigmoid" | "softsign" | "relu" | "identity".
Kind kind_from_name(const std::string& name);

struct Segment {
  std::int16_t c0;  // Q1.14 offset at segment start
  std::int16_t c1;  // Q1.14 total rise across the segment
};

struct PWLTable {
  Kind fn;  // tanh or softsign
  std::array<Segment, 256> seg;
  std::int16_t sat_value;  // output for inputs >= 8.0
};

// Golden tables, frozen at build time (bit-identical on every platform).
PWLTable build_table(Kind fn);

// Regenerates a table from the double-precision function: per segment a
// least-max linear fit (chord slope, offset split; segment 0 keeps c0 = 0 and
// optimizes the slope instead), then a small quantization-aware search over
// the neighbouring integer coefficients. Deterministic. build_table() returns
// the committed output of this routine; a test keeps them in sync.
PWLTable fit_table(Kind fn);

struct Tables {
  PWLTable tanh_t;
  PWLTable softsign_t;
};

const Tables& golden_tables();

// Fixed-point evaluation of f(x * 2^e_x) into Q1.14.
// The input is mapped to canonical Q4.12 (round-half-to-even on the shift);
// values reaching 8.0 return the sign-adjusted saturation value. Relu and
// Identity requantize to Q1.14 with int16 saturation.
std::int16_t eval_fixed(Kind k, std::int16_t x, std::int32_t e_x,
                        const Tables& tables);

// Double-precision reference. Throws Errc::non_finite on NaN/inf input.
double eval_real(Kind k, double x);

// Real-valued PWL defined by the (already quantized) table coefficients,
// for error sweeps: continuous interpolation, odd symmetry, saturation at 8.
double eval_table_real(const PWLTable& table, double x);

}  // namespace rnnaccel::act

#endif  // RNNACCEL_ACTIVATION_HPP_
