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

// Text cleaning (markup, whitespace, case, stop words) and rule-driven
// standardization that replaces URLs, e-mails, numbers etc. with markers.

#ifndef TOKLAB_NORMALIZE_HPP_
#define TOKLAB_NORMALIZE_HPP_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "toklab/text.hpp"

namespace toklab::normalize {

using Json = nlohmann::ordered_json;

enum class StopwordStage { kOff, kBeforeNormalization, kAfterNormalization };

const char* StopwordStageName(StopwordStage stage);
StopwordStage ParseStopwordStage(std::string_view name);

struct CleanConfig {
  bool strip_markup = true;
  bool lowercase = false;
  // Spans matching any of these are exempt from lowercasing.
  std::vector<text::Pattern> preserve_patterns;
  // Stored case-folded.
  std::set<std::string> stopwords;
  StopwordStage stopword_stage = StopwordStage::kOff;
};

CleanConfig CleanConfigFromJson(const Json& j);
Json CleanConfigToJson(const CleanConfig& config);
CleanConfig LoadCleanConfig(const std::string& path);

// Removes tags, comments, <script>/<style> contents and decodes character
// entities. Repeats until nothing changes, so "&amp;lt;b&amp;gt;" cannot
// resurface as a tag on a second pass.
std::string StripMarkup(std::string_view text);

std::string NormalizeWhitespace(std::string_view text);

// strip_markup -> normalize_whitespace -> stop words (before) -> lowercase
// -> stop words (after). Idempotent: Clean(Clean(t, c), c) == Clean(t, c).
std::string Clean(std::string_view text, const CleanConfig& config);

struct Rule {
  std::string name;
  text::Pattern pattern;
  std::string marker;
};

// Rules apply in declaration order. Construction rejects duplicate names
// and markers that any rule pattern would match again.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

 private:
  std::vector<Rule> rules_;
};

RuleSet RuleSetFromJson(const Json& j);
Json RuleSetToJson(const RuleSet& rules);
RuleSet LoadRules(const std::string& path);

// url, email, number with markers <URL>, <EMAIL>, <NUMBER>.
RuleSet DefaultRules();

std::string Standardize(std::string_view text, const RuleSet& rules);

}  // namespace toklab::normalize

#endif  // TOKLAB_NORMALIZE_HPP_
