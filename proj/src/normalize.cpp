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

#include "toklab/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "toklab/error.hpp"
#include "toklab/io.hpp"

namespace toklab::normalize {
namespace {

// Upper bound on Clean's fixed-point iterations. Every stage either shrinks
// the text or is idempotent, so real inputs settle in two or three passes.
constexpr int kMaxCleanPasses = 16;

bool StartsWithIgnoreCase(std::string_view s, size_t pos,
                          std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) {
      return false;
    }
  }
  return true;
}

size_t FindIgnoreCase(std::string_view s, size_t pos, std::string_view needle) {
  for (size_t i = pos; i + needle.size() <= s.size(); ++i) {
    if (StartsWithIgnoreCase(s, i, needle)) return i;
  }
  return std::string_view::npos;
}

bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Element whose content is dropped along with its tags.
bool OpensRawElement(std::string_view s, size_t pos, std::string_view name) {
  if (!StartsWithIgnoreCase(s, pos + 1, name)) return false;
  const size_t after = pos + 1 + name.size();
  if (after >= s.size()) return true;
  const char c = s[after];
  return c == '>' || c == '/' || std::isspace(static_cast<unsigned char>(c));
}

const std::map<std::string, std::string, std::less<>>& NamedEntities() {
  static const std::map<std::string, std::string, std::less<>> kEntities = {
      {"amp", "&"},
      {"lt", "<"},
      {"gt", ">"},
      {"quot", "\""},
      {"apos", "'"},
      {"nbsp", "\u00A0"},
      {"ndash", "\u2013"},
      {"mdash", "\u2014"},
      {"laquo", "\u00AB"},
      {"raquo", "\u00BB"},
      {"hellip", "\u2026"},
      {"copy", "\u00A9"},
  };
  return kEntities;
}

// Decodes the entity starting at s[pos] == '&'. Returns the number of bytes
// consumed, or 0 when the text is not a recognised entity.
size_t DecodeEntity(std::string_view s, size_t pos, std::string* out) {
  size_t i = pos + 1;
  if (i < s.size() && s[i] == '#') {
    ++i;
    int base = 10;
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
      base = 16;
      ++i;
    }
    const size_t digits_start = i;
    uint32_t value = 0;
    while (i < s.size() && i - digits_start < 8 &&
           std::isxdigit(static_cast<unsigned char>(s[i])) &&
           (base == 16 || std::isdigit(static_cast<unsigned char>(s[i])))) {
      value = value * static_cast<uint32_t>(base) +
              static_cast<uint32_t>(std::isdigit(static_cast<unsigned char>(s[i]))
                                        ? s[i] - '0'
                                        : std::tolower(s[i]) - 'a' + 10);
      ++i;
    }
    if (i == digits_start || i >= s.size() || s[i] != ';') return 0;
    if (value == 0 || value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) {
      return 0;
    }
    *out += text::EncodeUtf8(static_cast<char32_t>(value));
    return i + 1 - pos;
  }
  const size_t name_start = i;
  while (i < s.size() && i - name_start < 10 &&
         std::isalnum(static_cast<unsigned char>(s[i]))) {
    ++i;
  }
  if (i == name_start || i >= s.size() || s[i] != ';') return 0;
  const auto& entities = NamedEntities();
  auto it = entities.find(s.substr(name_start, i - name_start));
  if (it == entities.end()) return 0;
  *out += it->second;
  return i + 1 - pos;
}

std::string StripMarkupOnce(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '<') {
      if (s.substr(i, 4) == "<!--") {
        const size_t end = s.find("-->", i + 4);
        i = end == std::string_view::npos ? s.size() : end + 3;
        continue;
      }
      bool raw = false;
      for (std::string_view name : {"script", "style"}) {
        if (OpensRawElement(s, i, name)) {
          const std::string closing = "</" + std::string(name);
          const size_t close = FindIgnoreCase(s, i + 1, closing);
          if (close == std::string_view::npos) {
            i = s.size();
          } else {
            const size_t gt = s.find('>', close);
            i = gt == std::string_view::npos ? s.size() : gt + 1;
          }
          raw = true;
          break;
        }
      }
      if (raw) continue;
      const bool tag_like =
          i + 1 < s.size() &&
          (IsAsciiAlpha(s[i + 1]) || s[i + 1] == '!' || s[i + 1] == '?' ||
           (s[i + 1] == '/' && i + 2 < s.size() && IsAsciiAlpha(s[i + 2])));
      if (tag_like) {
        const size_t gt = s.find('>', i + 1);
        if (gt != std::string_view::npos) {
          i = gt + 1;
          continue;
        }
      }
      out += c;
      ++i;
    } else if (c == '&') {
      const size_t used = DecodeEntity(s, i, &out);
      if (used == 0) {
        out += c;
        ++i;
      } else {
        i += used;
      }
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::string DropStopwords(std::string_view text,
                          const std::set<std::string>& stopwords) {
  std::vector<std::string> kept;
  for (auto& token : text::SplitWhitespace(text)) {
    if (!stopwords.contains(text::Fold(token))) kept.push_back(std::move(token));
  }
  return text::Join(kept, " ");
}

std::string LowercasePreserving(std::string_view s,
                                const std::vector<text::Pattern>& preserve) {
  std::vector<text::Span> spans;
  for (const auto& p : preserve) {
    auto found = p.FindAll(s);
    spans.insert(spans.end(), found.begin(), found.end());
  }
  if (spans.empty()) return text::ToLower(s);
  std::sort(spans.begin(), spans.end(),
            [](const text::Span& a, const text::Span& b) {
              return a.begin < b.begin;
            });
  std::string out;
  size_t pos = 0;
  for (const auto& sp : spans) {
    if (sp.end <= pos) continue;
    const size_t begin = std::max(sp.begin, pos);
    out += text::ToLower(s.substr(pos, begin - pos));
    out.append(s.substr(begin, sp.end - begin));
    pos = sp.end;
  }
  out += text::ToLower(s.substr(pos));
  return out;
}

std::string CleanOnce(std::string_view input, const CleanConfig& config) {
  std::string t = config.strip_markup ? StripMarkup(input) : std::string(input);
  t = NormalizeWhitespace(t);
  if (config.stopword_stage == StopwordStage::kBeforeNormalization &&
      !config.stopwords.empty()) {
    t = DropStopwords(t, config.stopwords);
  }
  if (config.lowercase) t = LowercasePreserving(t, config.preserve_patterns);
  if (config.stopword_stage == StopwordStage::kAfterNormalization &&
      !config.stopwords.empty()) {
    t = DropStopwords(t, config.stopwords);
  }
  return t;
}

std::string GetString(const Json& j, const char* key, const std::string& rule) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorKind::kValidation, "rule '" + rule + "': field '" + key +
                                            "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

const char* StopwordStageName(StopwordStage stage) {
  switch (stage) {
    case StopwordStage::kOff: return "off";
    case StopwordStage::kBeforeNormalization: return "before_normalization";
    case StopwordStage::kAfterNormalization: return "after_normalization";
  }
  return "off";
}

StopwordStage ParseStopwordStage(std::string_view name) {
  if (name == "off") return StopwordStage::kOff;
  if (name == "before_normalization") return StopwordStage::kBeforeNormalization;
  if (name == "after_normalization") return StopwordStage::kAfterNormalization;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown stopword_stage '" + std::string(name) + "'");
}

CleanConfig CleanConfigFromJson(const Json& j) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kValidation, "clean config must be a JSON object");
  }
  CleanConfig c;
  try {
    c.strip_markup = j.value("strip_markup", true);
    c.lowercase = j.value("lowercase", false);
    for (const auto& p : j.value("preserve_patterns", Json::array())) {
      c.preserve_patterns.emplace_back(p.get<std::string>());
    }
    for (const auto& w : j.value("stopwords", Json::array())) {
      c.stopwords.insert(text::Fold(w.get<std::string>()));
    }
    c.stopword_stage = ParseStopwordStage(j.value("stopword_stage", "off"));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kValidation,
                std::string("invalid clean config: ") + e.what());
  }
  return c;
}

Json CleanConfigToJson(const CleanConfig& c) {
  Json j = Json::object();
  j["strip_markup"] = c.strip_markup;
  j["lowercase"] = c.lowercase;
  Json patterns = Json::array();
  for (const auto& p : c.preserve_patterns) patterns.push_back(p.source());
  j["preserve_patterns"] = patterns;
  j["stopwords"] = Json(std::vector<std::string>(c.stopwords.begin(),
                                                 c.stopwords.end()));
  j["stopword_stage"] = StopwordStageName(c.stopword_stage);
  return j;
}

CleanConfig LoadCleanConfig(const std::string& path) {
  return CleanConfigFromJson(io::ReadJson(path));
}

std::string StripMarkup(std::string_view text) {
  std::string current(text);
  while (true) {
    std::string next = StripMarkupOnce(current);
    if (next == current) return next;
    current = std::move(next);
  }
}

std::string NormalizeWhitespace(std::string_view text) {
  return text::Join(text::SplitWhitespace(text), " ");
}

std::string Clean(std::string_view text, const CleanConfig& config) {
  std::string current = CleanOnce(text, config);
  for (int pass = 1; pass < kMaxCleanPasses; ++pass) {
    std::string next = CleanOnce(current, config);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::set<std::string> names;
  for (const Rule& r : rules_) {
    if (r.name.empty()) {
      throw Error(ErrorKind::kValidation, "rule with empty name");
    }
    if (!names.insert(r.name).second) {
      throw Error(ErrorKind::kValidation, "duplicate rule name '" + r.name + "'");
    }
    if (r.pattern.empty()) {
      throw Error(ErrorKind::kValidation, "rule '" + r.name + "' has no pattern");
    }
  }
  for (const Rule& r : rules_) {
    for (const Rule& other : rules_) {
      if (other.pattern.Search(r.marker)) {
        throw Error(ErrorKind::kValidation,
                    "marker '" + r.marker + "' of rule '" + r.name +
                        "' is matched by the pattern of rule '" + other.name +
                        "'");
      }
    }
  }
}

RuleSet RuleSetFromJson(const Json& j) {
  const Json* list = &j;
  if (j.is_object() && j.contains("rules")) list = &j.at("rules");
  if (!list->is_array()) {
    throw Error(ErrorKind::kValidation, "rule file must be a JSON array");
  }
  std::vector<Rule> rules;
  for (size_t i = 0; i < list->size(); ++i) {
    const Json& item = (*list)[i];
    const std::string label = "#" + std::to_string(i);
    if (!item.is_object()) {
      throw Error(ErrorKind::kValidation, "rule " + label + " is not an object");
    }
    Rule r;
    r.name = GetString(item, "name", label);
    const std::string pattern = GetString(item, "pattern", r.name);
    r.marker = GetString(item, "marker", r.name);
    try {
      r.pattern = text::Pattern(pattern);
    } catch (const Error& e) {
      throw Error(ErrorKind::kInvalidArgument,
                  "rule '" + r.name + "': " + e.what());
    }
    rules.push_back(std::move(r));
  }
  return RuleSet(std::move(rules));
}

Json RuleSetToJson(const RuleSet& rules) {
  Json j = Json::array();
  for (const Rule& r : rules.rules()) {
    j.push_back({{"name", r.name},
                 {"pattern", r.pattern.source()},
                 {"marker", r.marker}});
  }
  return j;
}

RuleSet LoadRules(const std::string& path) {
  return RuleSetFromJson(io::ReadJson(path));
}

RuleSet DefaultRules() {
  return RuleSet({
      {"url", text::Pattern(R"((?:https?://|www\.)[^\s<>]+)"), "<URL>"},
      {"email", text::Pattern(R"([\w.+-]+@[\w-]+(?:\.[\w-]+)+)"), "<EMAIL>"},
      {"number", text::Pattern(R"(\d+(?:[.,]\d+)*)"), "<NUMBER>"},
  });
}

std::string Standardize(std::string_view text, const RuleSet& rules) {
  std::string current(text);
  for (const Rule& r : rules.rules()) {
    current = r.pattern.ReplaceAll(current, r.marker);
  }
  return current;
}

}  // namespace toklab::normalize
