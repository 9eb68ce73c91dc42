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
#ifndef RNNACCEL_PWL_IO_HPP_
#define RNNACCEL_PWL_IO_HPP_

#include <string>

#include "rnnaccel/activation.hpp"

namespace rnnaccel::act {

// Text dump of a table. Record layout (one line per segment, decimal):
//   <segment index> <c0> <c1>
// preceded by '#' header lines carrying version, function name, geometry and
// saturation value. write/read round-trip exactly.
void write_table_file(const std::string& path, const PWLTable& table);
PWLTable read_table_file(const std::string& path);
std::string table_to_text(const PWLTable& table);

}  // namespace rnnaccel::act

#endif  // RNNACCEL_PWL_IO_HPP_
