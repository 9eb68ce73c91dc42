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
#include "rnnaccel/pwl_io.hpp"

#include <fstream>
#include <sstream>

#include "rnnaccel/errors.hpp"

namespace rnnaccel::act {

std::string table_to_text(const PWLTable& table) {
  std::ostringstream os;
  os << "# rnnaccel pwl table v1\n";
  os << "# fn " << kind_name(table.fn) << "\n";
  os << "# segments 256 step 1/32 domain [0,8)\n";
  os << "# sat_value " << table.sat_value << "\n";
  os << "# columns: segment c0 c1 (Q1.14 decimal integers)\n";
  for (int s = 0; s < 256; ++s)
    os << s << " " << table.seg[s].c0 << " " << table.seg[s].c1 << "\n";
  return os.str();
}

void write_table_file(const std::string& path, const PWLTable& table) {
  std::ofstream os(path);
  if (!os) raise(Errc::io_error, "cannot write " + path);
  os << table_to_text(table);
}

PWLTable read_table_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) raise(Errc::missing_file, "cannot open " + path);
  PWLTable t{};
  bool have_fn = false, have_sat = false;
  int rows = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      if (key == "fn") {
        std::string name;
        hs >> name;
        t.fn = kind_from_name(name);
        have_fn = true;
      } else if (key == "sat_value") {
        int v = 0;
        hs >> v;
        t.sat_value = static_cast<std::int16_t>(v);
        have_sat = true;
      }
      continue;
    }
    std::istringstream ls(line);
    int s = 0, c0 = 0, c1 = 0;
    if (!(ls >> s >> c0 >> c1) || s < 0 || s > 255)
      raise(Errc::bad_file_size, "malformed table record in " + path);
    t.seg[s] = {static_cast<std::int16_t>(c0), static_cast<std::int16_t>(c1)};
    ++rows;
  }
  if (!have_fn || !have_sat || rows != 256)
    raise(Errc::bad_file_size, "incomplete table file " + path);
  return t;
}

}  // namespace rnnaccel::act
