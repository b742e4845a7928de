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

// Language-aware typo injection. A rule set lists edit rules; corrupt()
// picks ceil(ratio * eligible) words with a seeded shuffle and applies one
// applicable rule to each.

#ifndef TOKLAB_CORRUPTOR_HPP_
#define TOKLAB_CORRUPTOR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "toklab/corpus.hpp"
#include "toklab/text.hpp"

namespace toklab::corruptor {

using Json = nlohmann::ordered_json;

enum class RuleKind {
  kDeleteChar,
  kInsertChar,
  kSubstitute,
  kTransposeAdjacent,
  kOmitRandom,
  kDuplicateRandom,
};

const char* RuleKindName(RuleKind kind);
RuleKind ParseRuleKind(std::string_view name);

struct CorruptionRule {
  std::string name;
  RuleKind kind = RuleKind::kOmitRandom;
  std::string rationale;
  // delete_char / insert_char: the character removed or inserted.
  std::string target;
  // delete_char / insert_char: conditions on the neighbouring characters.
  // Each must match the whole neighbour; a missing neighbour is "".
  std::optional<text::Pattern> after;
  std::optional<text::Pattern> before;
  // substitute: single character -> single character.
  std::map<std::string, std::string> substitutions;
  // transpose / omit / duplicate: only touch letters.
  bool letters_only = true;
  Json params = Json::object();  // as declared

  // Positions where the rule changes `chars`. For insert_char a site k
  // means "insert before chars[k]" (k == size appends).
  std::vector<size_t> Sites(const std::vector<std::string>& chars) const;
  std::string Apply(const std::vector<std::string>& chars, size_t site) const;
};

struct CorruptionRuleSet {
  std::string language;
  int min_word_len = 2;
  std::vector<CorruptionRule> rules;
};

CorruptionRuleSet RuleSetFromJson(const Json& j);
Json RuleSetToJson(const CorruptionRuleSet& rules);
CorruptionRuleSet LoadCorruptionRules(const std::string& path);

// Shipped rule sets: "ru" and "tg".
std::vector<std::string> BuiltinLanguages();
CorruptionRuleSet BuiltinRules(std::string_view language);
std::string BuiltinRulesJson(std::string_view language);

struct Edit {
  size_t index = 0;  // word position
  std::string rule;
  size_t site = 0;
  std::string original;
  std::string corrupted;
};

struct CorruptionResult {
  std::string text;
  std::vector<size_t> corrupted_indices;  // ascending
  double ratio_requested = 0.0;
  double ratio_actual = 0.0;  // corrupted / eligible
  uint64_t seed = 0;
  size_t word_count = 0;
  size_t eligible_count = 0;
  std::vector<Edit> edits;
  std::optional<std::string> warning;
};

Json ResultToJson(const CorruptionResult& result);

// ratio must lie in (0, 1]. Whitespace between words is kept as is.
CorruptionResult Corrupt(std::string_view text, const CorruptionRuleSet& rules,
                         double ratio, uint64_t seed);

uint64_t DocumentSeed(uint64_t seed, std::string_view id);

// Corrupts every document under its own seed DocumentSeed(seed, id) and
// records `corruption_ratio`. When `test_ids` is given, any document outside
// it is refused with Error(kLeakage).
corpus::Corpus CorruptCorpus(const corpus::Corpus& input, const CorruptionRuleSet& rules,
                             double ratio, uint64_t seed,
                             const std::set<std::string>* test_ids = nullptr,
                             int threads = 1,
                             std::vector<CorruptionResult>* results = nullptr);

}  // namespace toklab::corruptor

#endif  // TOKLAB_CORRUPTOR_HPP_
