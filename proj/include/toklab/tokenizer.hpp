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

#ifndef TOKLAB_TOKENIZER_HPP_
#define TOKLAB_TOKENIZER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "toklab/text.hpp"

namespace toklab::surface {

// Whitespace or regex-match tokenization. Also serves as the
// pre-tokenizer in front of subword models.
class SurfaceTokenizer {
 public:
  enum class Kind { kWhitespace, kPattern };

  static SurfaceTokenizer Whitespace() { return SurfaceTokenizer(); }
  // Throws Error(kInvalidArgument) when the pattern does not compile.
  static SurfaceTokenizer FromPattern(std::string_view pattern);

  Kind kind() const { return kind_; }
  const text::Pattern& pattern() const { return pattern_; }

  std::vector<std::string> Tokenize(std::string_view text) const;

  nlohmann::ordered_json ToJson() const;
  static SurfaceTokenizer FromJson(const nlohmann::ordered_json& j);

 private:
  Kind kind_ = Kind::kWhitespace;
  text::Pattern pattern_;
};

}  // namespace toklab::surface

#endif  // TOKLAB_TOKENIZER_HPP_
