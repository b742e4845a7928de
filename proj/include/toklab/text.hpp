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

// UTF-8 helpers and a thin Unicode regex wrapper. All strings are UTF-8;
// "characters" are Unicode scalar values.

#ifndef TOKLAB_TEXT_HPP_
#define TOKLAB_TEXT_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/uversion.h>

U_NAMESPACE_BEGIN
class RegexPattern;
U_NAMESPACE_END

namespace toklab::text {

bool IsValidUtf8(std::string_view s);

// NFC normalization. Throws Error(kParse) on invalid UTF-8.
std::string Nfc(std::string_view s);

// Full Unicode lowercase (root locale).
std::string ToLower(std::string_view s);

// NFC followed by lowercase; the key used for case-insensitive lookups.
std::string Fold(std::string_view s);

std::vector<char32_t> DecodeUtf8(std::string_view s);
std::string EncodeUtf8(char32_t c);
std::string EncodeUtf8(const std::vector<char32_t>& cps);

// The string split into one UTF-8 string per scalar value.
std::vector<std::string> Characters(std::string_view s);
size_t CharacterCount(std::string_view s);

bool IsWhitespace(char32_t c);
bool IsLetter(char32_t c);

// Splits on maximal runs of Unicode whitespace; never yields empty strings.
std::vector<std::string> SplitWhitespace(std::string_view s);
size_t CountWhitespaceTokens(std::string_view s);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

struct Span {
  size_t begin = 0;  // byte offsets into the searched string
  size_t end = 0;
};

// A compiled Unicode regular expression (ICU syntax, so \p{L} and friends
// work). Immutable and cheap to copy; safe to share across threads.
class Pattern {
 public:
  Pattern() = default;
  // Throws Error(kInvalidArgument) when the pattern does not compile.
  explicit Pattern(std::string_view source);

  const std::string& source() const { return source_; }
  bool empty() const { return compiled_ == nullptr; }

  // All non-overlapping matches, left to right. Empty matches are skipped.
  std::vector<Span> FindAll(std::string_view s) const;
  bool Search(std::string_view s) const;

  // Replaces every non-overlapping match with `replacement` taken literally.
  std::string ReplaceAll(std::string_view s,
                         std::string_view replacement) const;

 private:
  std::string source_;
  std::shared_ptr<const icu::RegexPattern> compiled_;
};

}  // namespace toklab::text

#endif  // TOKLAB_TEXT_HPP_
