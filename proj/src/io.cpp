// Copyright 2026 The Toklab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "toklab/io.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "toklab/error.hpp"

namespace toklab::io {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo,
                "cannot open '" + path + "': " + std::strerror(errno));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::kIo,
                "cannot write '" + path + "': " + std::strerror(errno));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path + "'");
}

nlohmann::ordered_json ReadJson(const std::string& path) {
  const std::string contents = ReadFile(path);
  try {
    return nlohmann::ordered_json::parse(contents);
  } catch (const nlohmann::ordered_json::parse_error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

std::vector<TsvRow> ParseTsv(std::string_view contents) {
  std::vector<TsvRow> rows;
  size_t line = 0;
  size_t pos = 0;
  while (pos < contents.size()) {
    size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view text = contents.substr(pos, end - pos);
    ++line;
    pos = end + 1;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.empty() || text.front() == '#') continue;
    TsvRow row;
    row.line = line;
    size_t start = 0;
    while (true) {
      const size_t tab = text.find('\t', start);
      row.fields.emplace_back(text.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace toklab::io
