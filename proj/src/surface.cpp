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

#include "toklab/surface.hpp"

#include <algorithm>

#include "toklab/error.hpp"
#include "toklab/io.hpp"
#include "toklab/text.hpp"

namespace toklab::surface {
namespace {

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
T Field(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorKind::kValidation, where + ": missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorKind::kValidation, where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

StemRuleTable::StemRuleTable(std::string language, std::vector<StemRule> rules)
    : language_(std::move(language)), rules_(std::move(rules)) {
  for (auto& r : rules_) {
    r.suffix = text::Nfc(r.suffix);
    r.replacement = text::Nfc(r.replacement);
    const std::string where = "stem rule '-" + r.suffix + "'";
    if (r.suffix.empty()) {
      throw Error(ErrorKind::kValidation, "stem rule with empty suffix");
    }
    if (r.min_stem_len < 1) {
      throw Error(ErrorKind::kValidation, where + ": min_stem_len must be >= 1");
    }
    if (text::CharacterCount(r.replacement) > text::CharacterCount(r.suffix)) {
      throw Error(ErrorKind::kValidation,
                  where + ": replacement is longer than the suffix");
    }
  }
  std::stable_sort(rules_.begin(), rules_.end(), [](const StemRule& a, const StemRule& b) {
    return text::CharacterCount(a.suffix) > text::CharacterCount(b.suffix);
  });
  // A non-empty replacement must not complete another rule's suffix, or a
  // second Stem call could fire again on the replaced ending.
  for (const auto& r : rules_) {
    if (r.replacement.empty()) continue;
    for (const auto& s : rules_) {
      if (EndsWith(r.replacement, s.suffix) || EndsWith(s.suffix, r.replacement)) {
        throw Error(ErrorKind::kValidation,
                    "stem rule '-" + r.suffix + "' -> '" + r.replacement +
                        "' creates a match for rule '-" + s.suffix + "'");
      }
    }
  }
}

std::string StemRuleTable::Stem(std::string_view token) const {
  const size_t length = text::CharacterCount(token);
  for (const auto& r : rules_) {
    if (!EndsWith(token, r.suffix)) continue;
    const size_t remaining = length - text::CharacterCount(r.suffix);
    if (remaining < static_cast<size_t>(r.min_stem_len)) continue;
    std::string out(token.substr(0, token.size() - r.suffix.size()));
    out += r.replacement;
    return out;
  }
  return std::string(token);
}

Json StemRuleTable::ToJson() const {
  Json rules = Json::array();
  for (const auto& r : rules_) {
    rules.push_back({{"suffix", r.suffix},
                     {"replacement", r.replacement},
                     {"min_stem_len", r.min_stem_len}});
  }
  return {{"language", language_}, {"rules", rules}};
}

StemRuleTable StemRuleTable::FromJson(const Json& j) {
  if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array()) {
    throw Error(ErrorKind::kValidation, "stem table needs a 'rules' array");
  }
  std::vector<StemRule> rules;
  size_t index = 0;
  for (const auto& r : j["rules"]) {
    const std::string where = "stem rule #" + std::to_string(index++);
    if (!r.is_object()) throw Error(ErrorKind::kValidation, where + " is not an object");
    StemRule rule;
    rule.suffix = Field<std::string>(r, "suffix", where);
    rule.replacement = r.contains("replacement")
                           ? Field<std::string>(r, "replacement", where)
                           : std::string();
    rule.min_stem_len = r.contains("min_stem_len") ? Field<int>(r, "min_stem_len", where) : 1;
    rules.push_back(std::move(rule));
  }
  return StemRuleTable(j.value("language", ""), std::move(rules));
}

StemRuleTable LoadStemRules(const std::string& path) {
  return StemRuleTable::FromJson(io::ReadJson(path));
}

LemmaMap::LemmaMap(const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [form, lemma] : entries) {
    const std::string key = text::Fold(form);
    if (key.empty()) throw Error(ErrorKind::kValidation, "empty lemma-map form");
    if (!map_.emplace(key, text::Nfc(lemma)).second) {
      throw Error(ErrorKind::kValidation,
                  "lemma map has two entries for the form '" + key + "'");
    }
  }
}

std::string LemmaMap::Lemmatize(std::string_view token) const {
  if (map_.empty()) return std::string(token);
  auto it = map_.find(text::Fold(token));
  return it == map_.end() ? std::string(token) : it->second;
}

Json LemmaMap::ToJson() const {
  Json j = Json::object();
  for (const auto& [k, v] : map_) j[k] = v;
  return j;
}

LemmaMap LemmaMap::FromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kValidation, "lemma map must be an object");
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) {
      throw Error(ErrorKind::kValidation, "lemma for '" + k + "' must be a string");
    }
    entries.emplace_back(k, v.get<std::string>());
  }
  return LemmaMap(entries);
}

LemmaMap ParseLemmaTsv(std::string_view contents) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& row : io::ParseTsv(contents)) {
    if (row.fields.size() != 2) {
      throw Error(ErrorKind::kParse, "lemma map line " + std::to_string(row.line) +
                                         ": expected form<TAB>lemma");
    }
    entries.emplace_back(row.fields[0], row.fields[1]);
  }
  return LemmaMap(entries);
}

LemmaMap LoadLemmaMap(const std::string& path) { return ParseLemmaTsv(io::ReadFile(path)); }

Preprocessor::Stage Preprocessor::ParseStage(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw Error(ErrorKind::kValidation, "every stage needs a string 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  Stage s;
  s.config = j;
  if (type == "clean") {
    s.type = Stage::Type::kClean;
    s.clean = std::make_shared<normalize::CleanConfig>(
        normalize::CleanConfigFromJson(j.value("config", Json::object())));
  } else if (type == "standardize") {
    s.type = Stage::Type::kStandardize;
    const Json rules = j.value("rules", Json("default"));
    s.rules = std::make_shared<normalize::RuleSet>(
        rules.is_string() && rules.get<std::string>() == "default"
            ? normalize::DefaultRules()
            : normalize::RuleSetFromJson(rules));
  } else if (type == "tokenize") {
    s.type = Stage::Type::kTokenize;
    s.tokenizer = std::make_shared<SurfaceTokenizer>(SurfaceTokenizer::FromJson(j));
  } else if (type == "stem") {
    s.type = Stage::Type::kStem;
    if (!j.contains("table")) throw Error(ErrorKind::kValidation, "stem stage needs 'table'");
    s.stems = std::make_shared<StemRuleTable>(StemRuleTable::FromJson(j["table"]));
  } else if (type == "lemmatize") {
    s.type = Stage::Type::kLemmatize;
    s.lemmas = std::make_shared<LemmaMap>(
        LemmaMap::FromJson(j.value("entries", Json::object())));
  } else if (type == "lowercase") {
    s.type = Stage::Type::kLowercase;
  } else if (type == "subword") {
    s.type = Stage::Type::kSubword;
    s.train = subword::TrainConfigFromJson(j.value("train", Json::object()));
  } else {
    throw Error(ErrorKind::kValidation, "unknown stage type '" + type + "'");
  }
  return s;
}

Preprocessor Preprocessor::FromConfig(const Json& config) {
  if (!config.is_object() || !config.contains("stages") || !config["stages"].is_array()) {
    throw Error(ErrorKind::kValidation, "preprocessor config needs a 'stages' array");
  }
  Preprocessor p;
  int tokenizers = 0;
  for (const auto& j : config["stages"]) {
    Stage s = ParseStage(j);
    const bool text_stage =
        s.type == Stage::Type::kClean || s.type == Stage::Type::kStandardize;
    if (text_stage && tokenizers > 0) {
      throw Error(ErrorKind::kValidation,
                  "text stages must come before the tokenize stage");
    }
    if (!text_stage && s.type != Stage::Type::kTokenize && tokenizers == 0) {
      throw Error(ErrorKind::kValidation,
                  "token stages must come after the tokenize stage");
    }
    if (!p.stages_.empty() && p.stages_.back().type == Stage::Type::kSubword) {
      throw Error(ErrorKind::kValidation, "the subword stage must be last");
    }
    if (s.type == Stage::Type::kTokenize) ++tokenizers;
    p.stages_.push_back(std::move(s));
  }
  if (tokenizers != 1) {
    throw Error(ErrorKind::kValidation, "exactly one tokenize stage is required");
  }
  return p;
}

std::vector<std::string> Preprocessor::SurfaceTokens(std::string_view input) const {
  std::string t(input);
  std::vector<std::string> tokens;
  for (const Stage& s : stages_) {
    switch (s.type) {
      case Stage::Type::kClean: t = normalize::Clean(t, *s.clean); break;
      case Stage::Type::kStandardize: t = normalize::Standardize(t, *s.rules); break;
      case Stage::Type::kTokenize: tokens = s.tokenizer->Tokenize(text::Nfc(t)); break;
      case Stage::Type::kStem:
        for (auto& tok : tokens) tok = s.stems->Stem(tok);
        break;
      case Stage::Type::kLemmatize:
        for (auto& tok : tokens) tok = s.lemmas->Lemmatize(tok);
        break;
      case Stage::Type::kLowercase:
        for (auto& tok : tokens) tok = text::Fold(tok);
        break;
      case Stage::Type::kSubword: break;
    }
  }
  return tokens;
}

void Preprocessor::Fit(const std::vector<std::string>& train_texts) {
  model_.reset();
  const Stage* sub = nullptr;
  for (const Stage& s : stages_) {
    if (s.type == Stage::Type::kSubword) sub = &s;
  }
  if (sub) {
    subword::WordFreqs freqs;
    for (const auto& t : train_texts) {
      for (auto& tok : SurfaceTokens(t)) ++freqs[tok];
    }
    model_ = subword::Train(freqs, *sub->train);
  }
  fitted_ = true;
}

std::vector<std::string> Preprocessor::Transform(std::string_view text) const {
  if (!fitted_) {
    throw Error(ErrorKind::kNotFitted, "transform called before fit");
  }
  std::vector<std::string> tokens = SurfaceTokens(text);
  if (!model_) return tokens;
  std::vector<std::string> out;
  for (const auto& w : tokens) {
    for (auto& piece : model_->EncodeWord(w).tokens) out.push_back(std::move(piece));
  }
  return out;
}

Json Preprocessor::ToJson() const {
  Json stages = Json::array();
  for (const Stage& s : stages_) stages.push_back(s.config);
  Json j = Json::object();
  j["format"] = kPreprocessorFormat;
  j["version"] = kPreprocessorVersion;
  j["fitted"] = fitted_;
  j["stages"] = stages;
  j["model"] = model_ ? model_->ToJson() : Json(nullptr);
  return j;
}

Preprocessor Preprocessor::FromJson(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kPreprocessorFormat) {
    throw Error(ErrorKind::kCorrupt, "not a preprocessor file");
  }
  const std::string version = j.value("version", "");
  if (version != kPreprocessorVersion) {
    throw Error(ErrorKind::kVersion, "unsupported preprocessor version '" + version +
                                         "' (expected " +
                                         std::string(kPreprocessorVersion) + ")");
  }
  Preprocessor p = FromConfig(j);
  p.fitted_ = j.value("fitted", false);
  if (j.contains("model") && !j["model"].is_null()) {
    p.model_ = subword::SubwordModel::FromJson(j["model"]);
  }
  return p;
}

void Preprocessor::Save(const std::string& path) const {
  io::WriteFile(path, ToJson().dump(1) + "\n");
}

Preprocessor Preprocessor::Load(const std::string& path) {
  const std::string contents = io::ReadFile(path);
  Json j;
  try {
    j = Json::parse(contents);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kCorrupt, path + ": " + e.what());
  }
  return FromJson(j);
}

}  // namespace toklab::surface
