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
#ifndef RNNACCEL_ERRORS_HPP_
#define RNNACCEL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rnnaccel {

// Machine-parsable error codes. The CLI prints them as
//   error: <CODE>: <message>
// and exits nonzero.
enum class Errc {
  bad_argument,
  non_finite,
  exponent_range,
  bad_manifest,
  missing_file,
  bad_file_size,
  dim_mismatch,
  bad_layer_type,
  bad_activation,
  bad_magic,
  unsupported_version,
  truncated,
  out_of_bounds,
  corrupt_blob,
  resource_limit,
  pool_overflow,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace rnnaccel

#endif  // RNNACCEL_ERRORS_HPP_
