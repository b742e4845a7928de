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

#include "toklab/tokenizer.hpp"

#include "toklab/error.hpp"

namespace toklab::surface {

SurfaceTokenizer SurfaceTokenizer::FromPattern(std::string_view pattern) {
  SurfaceTokenizer tok;
  tok.kind_ = Kind::kPattern;
  tok.pattern_ = text::Pattern(pattern);
  return tok;
}

std::vector<std::string> SurfaceTokenizer::Tokenize(std::string_view text) const {
  if (kind_ == Kind::kWhitespace) return text::SplitWhitespace(text);
  std::vector<std::string> out;
  for (const text::Span& sp : pattern_.FindAll(text)) {
    out.emplace_back(text.substr(sp.begin, sp.end - sp.begin));
  }
  return out;
}

nlohmann::ordered_json SurfaceTokenizer::ToJson() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (kind_ == Kind::kWhitespace) {
    j["kind"] = "whitespace";
  } else {
    j["kind"] = "pattern";
    j["pattern"] = pattern_.source();
  }
  return j;
}

SurfaceTokenizer SurfaceTokenizer::FromJson(const nlohmann::ordered_json& j) {
  if (j.is_string()) {
    if (j == "whitespace") return Whitespace();
    throw Error(ErrorKind::kValidation,
                "unknown tokenizer '" + j.get<std::string>() + "'");
  }
  const std::string kind = j.value("kind", "whitespace");
  if (kind == "whitespace") {
    if (j.contains("pattern")) {
      throw Error(ErrorKind::kValidation,
                  "whitespace tokenizer takes no pattern");
    }
    return Whitespace();
  }
  if (kind == "pattern") {
    if (!j.contains("pattern") || !j["pattern"].is_string()) {
      throw Error(ErrorKind::kValidation, "pattern tokenizer needs 'pattern'");
    }
    return FromPattern(j["pattern"].get<std::string>());
  }
  throw Error(ErrorKind::kValidation, "unknown tokenizer kind '" + kind + "'");
}

}  // namespace toklab::surface
