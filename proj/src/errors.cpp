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
#include "rnnaccel/errors.hpp"

namespace rnnaccel {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::bad_argument: return "E_BAD_ARGUMENT";
    case Errc::non_finite: return "E_NON_FINITE";
    case Errc::exponent_range: return "E_EXPONENT_RANGE";
    case Errc::bad_manifest: return "E_BAD_MANIFEST";
    case Errc::missing_file: return "E_MISSING_FILE";
    case Errc::bad_file_size: return "E_BAD_FILE_SIZE";
    case Errc::dim_mismatch: return "E_DIM_MISMATCH";
    case Errc::bad_layer_type: return "E_BAD_LAYER_TYPE";
    case Errc::bad_activation: return "E_BAD_ACTIVATION";
    case Errc::bad_magic: return "E_BAD_MAGIC";
    case Errc::unsupported_version: return "E_UNSUPPORTED_VERSION";
    case Errc::truncated: return "E_TRUNCATED";
    case Errc::out_of_bounds: return "E_OUT_OF_BOUNDS";
    case Errc::corrupt_blob: return "E_CORRUPT_BLOB";
    case Errc::resource_limit: return "E_RESOURCE_LIMIT";
    case Errc::pool_overflow: return "E_POOL_OVERFLOW";
    case Errc::io_error: return "E_IO_ERROR";
  }
  return "E_UNKNOWN";
}

}  // namespace rnnaccel
