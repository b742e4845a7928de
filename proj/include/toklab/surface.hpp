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

// Classical word normalizers and the fit/transform preprocessing pipeline.

#ifndef TOKLAB_SURFACE_HPP_
#define TOKLAB_SURFACE_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "toklab/normalize.hpp"
#include "toklab/subword.hpp"
#include "toklab/tokenizer.hpp"

namespace toklab::surface {

using Json = nlohmann::ordered_json;

struct StemRule {
  std::string suffix;
  std::string replacement;
  int min_stem_len = 1;
};

// Longest-suffix-first stemmer. At most one rule fires per token.
class StemRuleTable {
 public:
  StemRuleTable() = default;
  // Sorts rules by decreasing suffix length (stable) and validates them:
  // non-empty suffixes, min_stem_len >= 1, replacements no longer than their
  // suffix and no replacement that creates a match for another rule.
  StemRuleTable(std::string language, std::vector<StemRule> rules);

  const std::string& language() const { return language_; }
  const std::vector<StemRule>& rules() const { return rules_; }

  std::string Stem(std::string_view token) const;

  Json ToJson() const;
  static StemRuleTable FromJson(const Json& j);

 private:
  std::string language_;
  std::vector<StemRule> rules_;
};

StemRuleTable LoadStemRules(const std::string& path);

// form -> lemma lookup on NFC + lowercase folded keys.
class LemmaMap {
 public:
  LemmaMap() = default;
  // Throws Error(kValidation) when two forms fold to the same key.
  explicit LemmaMap(const std::vector<std::pair<std::string, std::string>>& entries);

  std::string Lemmatize(std::string_view token) const;
  size_t size() const { return map_.size(); }
  const std::map<std::string, std::string>& entries() const { return map_; }

  Json ToJson() const;
  static LemmaMap FromJson(const Json& j);

 private:
  std::map<std::string, std::string> map_;
};

LemmaMap ParseLemmaTsv(std::string_view contents);
LemmaMap LoadLemmaMap(const std::string& path);

inline constexpr std::string_view kPreprocessorFormat = "toklab-preprocessor";
inline constexpr std::string_view kPreprocessorVersion = "1.0";

// A configured pipeline:
//   text stages   clean, standardize        (in declared order)
//   tokenize      whitespace or pattern     (exactly one)
//   token stages  stem, lemmatize, lowercase (in declared order)
//   subword       optional, last; trained by Fit on the preceding stages'
//                 output
//
// Config JSON: {"stages": [{"type": "clean", "config": {...}},
//                          {"type": "standardize", "rules": [...] | "default"},
//                          {"type": "tokenize", "kind": "whitespace"},
//                          {"type": "stem", "table": {...}},
//                          {"type": "lemmatize", "entries": {...}},
//                          {"type": "subword", "train": {...}}]}
class Preprocessor {
 public:
  static Preprocessor FromConfig(const Json& config);

  // Learns the subword model, if one is configured, from `train_texts`.
  void Fit(const std::vector<std::string>& train_texts);
  bool fitted() const { return fitted_; }

  // Throws Error(kNotFitted) before Fit.
  std::vector<std::string> Transform(std::string_view text) const;

  // Stages before the subword stage; usable before Fit.
  std::vector<std::string> SurfaceTokens(std::string_view text) const;

  const subword::SubwordModel* model() const { return model_ ? &*model_ : nullptr; }

  Json ToJson() const;
  static Preprocessor FromJson(const Json& j);
  void Save(const std::string& path) const;
  static Preprocessor Load(const std::string& path);

 private:
  struct Stage {
    enum class Type { kClean, kStandardize, kTokenize, kStem, kLemmatize, kLowercase, kSubword };
    Type type;
    Json config;  // as declared, for serialization
    std::shared_ptr<const normalize::CleanConfig> clean;
    std::shared_ptr<const normalize::RuleSet> rules;
    std::shared_ptr<const SurfaceTokenizer> tokenizer;
    std::shared_ptr<const StemRuleTable> stems;
    std::shared_ptr<const LemmaMap> lemmas;
    std::optional<subword::TrainConfig> train;
  };

  static Stage ParseStage(const Json& j);

  std::vector<Stage> stages_;
  bool fitted_ = false;
  std::optional<subword::SubwordModel> model_;
};

}  // namespace toklab::surface

#endif  // TOKLAB_SURFACE_HPP_
