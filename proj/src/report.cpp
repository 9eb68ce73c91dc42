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
#include "rnnaccel/report.hpp"

namespace rnnaccel::report {

using nlohmann::ordered_json;

ordered_json to_json(const engine::SimReport& r) {
  ordered_json j;
  j["n_macs"] = r.n_macs;
  j["clock_mhz"] = r.clock_mhz;
  j["total_cycles"] = r.total_cycles;
  j["useful_mac_ops"] = r.useful_mac_ops;
  j["n_inferences"] = r.n_inferences;
  j["utilization"] = r.utilization;
  j["cycles_per_inference"] = r.cycles_per_inference;
  j["inferences_per_second"] = r.inferences_per_second;
  j["peak_gops"] = r.peak_gops;
  j["achieved_gops"] = r.achieved_gops;
  j["weight_bytes_read"] = r.weight_bytes_read;
  j["input_bytes_read"] = r.input_bytes_read;
  j["output_bytes_written"] = r.output_bytes_written;
  j["saturation_events"] = r.saturation_events;
  j["layers"] = ordered_json::array();
  for (const auto& l : r.layers) {
    ordered_json lj;
    lj["name"] = l.name;
    lj["cycles"] = l.cycles;
    lj["useful_mac_ops"] = l.useful_mac_ops;
    lj["weight_bytes_read"] = l.weight_bytes_read;
    lj["input_bytes_read"] = l.input_bytes_read;
    lj["output_bytes_written"] = l.output_bytes_written;
    lj["saturation_events"] = l.saturation_events;
    j["layers"].push_back(lj);
  }
  return j;
}

ordered_json to_json(const ref::ValidationReport& r) {
  ordered_json j;
  j["pass"] = r.pass;
  j["tolerance"] = r.tolerance;
  j["final_max_abs_err"] = r.final_max_abs_err;
  j["final_rms_err"] = r.final_rms_err;
  j["elements_compared"] = r.elements_compared;
  j["worst_step"] = r.worst_step;
  j["worst_index"] = r.worst_index;
  j["layers"] = ordered_json::array();
  for (const auto& l : r.layers) {
    ordered_json lj;
    lj["name"] = l.name;
    lj["max_abs_err"] = l.max_abs_err;
    lj["rms_err"] = l.rms_err;
    j["layers"].push_back(lj);
  }
  return j;
}

ordered_json to_json(const codec::RatioReport& r) {
  ordered_json j;
  j["nominal_ratio"] = r.nominal_ratio;
  j["actual_ratio"] = r.actual_ratio;
  j["original_bytes"] = r.original_bytes;
  j["compressed_bytes"] = r.compressed_bytes;
  return j;
}

ordered_json to_json(const bench::BenchResult& r) {
  ordered_json j;
  j["profile"] = r.profile;
  j["params"] = r.params;
  j["n_macs"] = r.n_macs;
  j["clock_mhz"] = r.clock_mhz;
  j["peak_gops"] = r.peak_gops;
  j["synthetic_standin"] = r.synthetic_standin;
  j["rows"] = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json rj;
    rj["mode"] = row.mode;
    rj["b"] = row.b;
    rj["cycles_per_inference"] = row.cycles_per_inference;
    rj["utilization"] = row.utilization;
    rj["inferences_per_second"] = row.inferences_per_second;
    rj["weight_bytes_per_inference"] = row.weight_bytes_per_inference;
    rj["nominal_ratio"] = row.nominal_ratio;
    rj["actual_ratio"] = row.actual_ratio;
    rj["val_max_err"] = row.val_max_err;
    j["rows"].push_back(rj);
  }
  return j;
}

}  // namespace rnnaccel::report
