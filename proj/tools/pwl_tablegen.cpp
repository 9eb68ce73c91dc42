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

// Regenerates the frozen activation tables: the .inc compiled into the
// library and the inspectable text dumps under data/.
//
//   pwl_tablegen --inc src/pwl_tables_data.inc --data-dir data

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "rnnaccel/activation.hpp"
#include "rnnaccel/pwl_io.hpp"

using rnnaccel::act::Kind;
using rnnaccel::act::PWLTable;

static void emit_array(std::ofstream& os, const char* name, const PWLTable& t,
                       bool c0) {
  os << "static constexpr std::int16_t " << name << "[256] = {\n";
  for (int s = 0; s < 256; ++s) {
    os << (c0 ? t.seg[s].c0 : t.seg[s].c1);
    os << ((s == 255) ? "" : ",");
    if (s % 12 == 11) os << "\n";
  }
  os << "};\n";
}

int main(int argc, char** argv) {
  std::string inc_path = "src/pwl_tables_data.inc";
  std::string data_dir = "data";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--inc" && i + 1 < argc) inc_path = argv[++i];
    else if (a == "--data-dir" && i + 1 < argc) data_dir = argv[++i];
  }

  const PWLTable tanh_t = rnnaccel::act::fit_table(Kind::tanh);
  const PWLTable soft_t = rnnaccel::act::fit_table(Kind::softsign);

  {
    std::ofstream os(inc_path);
    if (!os) {
      std::fprintf(stderr, "cannot write %s\n", inc_path.c_str());
      return 1;
    }
    os << "// Generated by tools/pwl_tablegen. Do not edit by hand.\n";
    emit_array(os, "kTanhC0", tanh_t, true);
    emit_array(os, "kTanhC1", tanh_t, false);
    emit_array(os, "kSoftsignC0", soft_t, true);
    emit_array(os, "kSoftsignC1", soft_t, false);
  }
  rnnaccel::act::write_table_file(data_dir + "/pwl_tanh.txt", tanh_t);
  rnnaccel::act::write_table_file(data_dir + "/pwl_softsign.txt", soft_t);
  std::printf("wrote %s, %s/pwl_{tanh,softsign}.txt\n", inc_path.c_str(),
              data_dir.c_str());
  return 0;
}
