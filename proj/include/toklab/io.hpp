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

#ifndef TOKLAB_IO_HPP_
#define TOKLAB_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace toklab::io {

// Whole-file read/write. Failures raise Error(kIo) naming the path.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

nlohmann::ordered_json ReadJson(const std::string& path);

// Non-empty lines split on TAB, with the 1-based line number of each row.
struct TsvRow {
  size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<TsvRow> ParseTsv(std::string_view contents);

}  // namespace toklab::io

#endif  // TOKLAB_IO_HPP_
