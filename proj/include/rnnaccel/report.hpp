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
#ifndef RNNACCEL_REPORT_HPP_
#define RNNACCEL_REPORT_HPP_

#include <json.hpp>

#include "rnnaccel/bench.hpp"
#include "rnnaccel/codec.hpp"
#include "rnnaccel/engine.hpp"
#include "rnnaccel/reference.hpp"

namespace rnnaccel::report {

// JSON report schema: stable field names and ordering, numbers serialized by
// nlohmann/json (doubles round-trip exactly). Field values are bit-identical
// for identical inputs; wall-clock time lives only in the CLI envelope.

nlohmann::ordered_json to_json(const engine::SimReport& r);
nlohmann::ordered_json to_json(const ref::ValidationReport& r);
nlohmann::ordered_json to_json(const codec::RatioReport& r);
nlohmann::ordered_json to_json(const bench::BenchResult& r);

}  // namespace rnnaccel::report

#endif  // RNNACCEL_REPORT_HPP_
