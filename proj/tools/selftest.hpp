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

// Built-in invariant checks behind `toklab selftest`.

#ifndef TOKLAB_TOOLS_SELFTEST_HPP_
#define TOKLAB_TOOLS_SELFTEST_HPP_

#include <string>
#include <vector>

namespace toklab::tools {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> RunSelfTest(unsigned seed);

}  // namespace toklab::tools

#endif  // TOKLAB_TOOLS_SELFTEST_HPP_
