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

#include "toklab/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/regex.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utext.h>
#include <unicode/utf8.h>

#include <cmath>

#include "toklab/error.hpp"
#include "toklab/rng.hpp"

namespace toklab {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kParse: return "parse_error";
    case ErrorKind::kValidation: return "validation_error";
    case ErrorKind::kIo: return "io_error";
    case ErrorKind::kVersion: return "version_error";
    case ErrorKind::kCorrupt: return "corrupt_file";
    case ErrorKind::kNotFitted: return "not_fitted";
    case ErrorKind::kNotFound: return "not_found";
    case ErrorKind::kLeakage: return "leakage";
  }
  return "error";
}

size_t CeilFraction(double fraction, size_t n) {
  const double exact = fraction * static_cast<double>(n);
  const double rounded = std::round(exact);
  if (std::fabs(exact - rounded) <= 1e-9 * std::max(1.0, exact)) {
    return static_cast<size_t>(rounded);
  }
  return static_cast<size_t>(std::ceil(exact));
}

namespace text {

bool IsValidUtf8(std::string_view s) {
  int32_t i = 0;
  const int32_t n = static_cast<int32_t>(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) return false;
  }
  return true;
}

std::vector<char32_t> DecodeUtf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  int32_t i = 0;
  const int32_t n = static_cast<int32_t>(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) throw Error(ErrorKind::kParse, "invalid UTF-8 sequence");
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string EncodeUtf8(char32_t c) {
  char buf[4];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, 4, static_cast<UChar32>(c),
            error);
  if (error) throw Error(ErrorKind::kInvalidArgument, "invalid scalar value");
  return std::string(buf, static_cast<size_t>(len));
}

std::string EncodeUtf8(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) out += EncodeUtf8(c);
  return out;
}

std::vector<std::string> Characters(std::string_view s) {
  std::vector<std::string> out;
  int32_t i = 0;
  const int32_t n = static_cast<int32_t>(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) throw Error(ErrorKind::kParse, "invalid UTF-8 sequence");
    out.emplace_back(s.substr(static_cast<size_t>(start),
                              static_cast<size_t>(i - start)));
  }
  return out;
}

size_t CharacterCount(std::string_view s) {
  size_t count = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::string Nfc(std::string_view s) {
  if (!IsValidUtf8(s)) throw Error(ErrorKind::kParse, "invalid UTF-8 text");
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorKind::kIo, "ICU NFC unavailable");
  const icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  if (nfc->isNormalized(src, status) && U_SUCCESS(status)) {
    return std::string(s);
  }
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw Error(ErrorKind::kParse, "NFC failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string ToLower(std::string_view s) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::string Fold(std::string_view s) { return ToLower(Nfc(s)); }

bool IsWhitespace(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

bool IsLetter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

namespace {

template <typename Fn>
void ForEachWhitespaceToken(std::string_view s, Fn&& fn) {
  int32_t i = 0;
  const int32_t n = static_cast<int32_t>(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t token_start = -1;
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    const bool ws = c >= 0 && u_isUWhiteSpace(c);
    if (ws) {
      if (token_start >= 0) {
        fn(s.substr(static_cast<size_t>(token_start),
                    static_cast<size_t>(start - token_start)));
        token_start = -1;
      }
    } else if (token_start < 0) {
      token_start = start;
    }
  }
  if (token_start >= 0) fn(s.substr(static_cast<size_t>(token_start)));
}

}  // namespace

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> out;
  ForEachWhitespaceToken(s, [&](std::string_view t) { out.emplace_back(t); });
  return out;
}

size_t CountWhitespaceTokens(std::string_view s) {
  size_t n = 0;
  ForEachWhitespaceToken(s, [&](std::string_view) { ++n; });
  return n;
}

std::string Join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

namespace {

struct UTextCloser {
  void operator()(UText* t) const { utext_close(t); }
};
using UTextPtr = std::unique_ptr<UText, UTextCloser>;

UTextPtr OpenUtf8(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  UText* t = utext_openUTF8(nullptr, s.data(), static_cast<int64_t>(s.size()),
                            &status);
  if (U_FAILURE(status)) throw Error(ErrorKind::kParse, "invalid UTF-8 text");
  return UTextPtr(t);
}

}  // namespace

Pattern::Pattern(std::string_view source) : source_(source) {
  if (!IsValidUtf8(source)) {
    throw Error(ErrorKind::kInvalidArgument, "pattern is not valid UTF-8");
  }
  UErrorCode status = U_ZERO_ERROR;
  UParseError parse_error;
  UTextPtr ut = OpenUtf8(source);
  icu::RegexPattern* compiled =
      icu::RegexPattern::compile(ut.get(), 0, parse_error, status);
  if (U_FAILURE(status)) {
    delete compiled;
    throw Error(ErrorKind::kInvalidArgument,
                "invalid pattern '" + source_ + "': " + u_errorName(status) +
                    " at offset " + std::to_string(parse_error.offset));
  }
  compiled_.reset(compiled);
}

std::vector<Span> Pattern::FindAll(std::string_view s) const {
  std::vector<Span> out;
  if (!compiled_) return out;
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> matcher(compiled_->matcher(status));
  if (U_FAILURE(status)) throw Error(ErrorKind::kInvalidArgument, "matcher");
  UTextPtr ut = OpenUtf8(s);
  matcher->reset(ut.get());
  while (matcher->find(status) && U_SUCCESS(status)) {
    const int64_t b = matcher->start64(status);
    const int64_t e = matcher->end64(status);
    if (U_FAILURE(status)) break;
    if (e > b) out.push_back({static_cast<size_t>(b), static_cast<size_t>(e)});
  }
  return out;
}

bool Pattern::Search(std::string_view s) const {
  if (!compiled_) return false;
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> matcher(compiled_->matcher(status));
  UTextPtr ut = OpenUtf8(s);
  matcher->reset(ut.get());
  return matcher->find(status) && U_SUCCESS(status);
}

std::string Pattern::ReplaceAll(std::string_view s,
                                std::string_view replacement) const {
  const std::vector<Span> spans = FindAll(s);
  if (spans.empty()) return std::string(s);
  std::string out;
  out.reserve(s.size());
  size_t pos = 0;
  for (const Span& sp : spans) {
    out.append(s.substr(pos, sp.begin - pos));
    out.append(replacement);
    pos = sp.end;
  }
  out.append(s.substr(pos));
  return out;
}

}  // namespace text
}  // namespace toklab
