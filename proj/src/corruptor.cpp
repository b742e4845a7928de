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

#include "toklab/corruptor.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "builtin_rules.inc"
#include "toklab/error.hpp"
#include "toklab/parallel.hpp"
#include "toklab/rng.hpp"

namespace toklab::corruptor {
namespace {

struct KindName {
  RuleKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {RuleKind::kDeleteChar, "delete_char"},
    {RuleKind::kInsertChar, "insert_char"},
    {RuleKind::kSubstitute, "substitute"},
    {RuleKind::kTransposeAdjacent, "transpose_adjacent"},
    {RuleKind::kOmitRandom, "omit_random"},
    {RuleKind::kDuplicateRandom, "duplicate_random"},
};

bool IsLetterChar(const std::string& c) {
  const auto cps = text::DecodeUtf8(c);
  return cps.size() == 1 && text::IsLetter(cps[0]);
}

bool NeighbourMatches(const std::optional<text::Pattern>& p, const std::string& s) {
  return !p || p->Search(s);
}

[[noreturn]] void Invalid(const std::string& rule, const std::string& what) {
  throw Error(ErrorKind::kValidation, "corruption rule '" + rule + "': " + what);
}

std::string SingleChar(const Json& v, const std::string& rule, const char* field) {
  if (!v.is_string()) Invalid(rule, std::string(field) + " must be a string");
  const auto s = text::Nfc(v.get<std::string>());
  if (text::CharacterCount(s) != 1) {
    Invalid(rule, std::string(field) + " must be exactly one character");
  }
  return s;
}

std::optional<text::Pattern> NeighbourPattern(const Json& params, const char* field,
                                              const std::string& rule) {
  if (!params.contains(field)) return std::nullopt;
  const Json& v = params.at(field);
  if (!v.is_string()) Invalid(rule, std::string(field) + " must be a string");
  try {
    return text::Pattern("^(?:" + v.get<std::string>() + ")$");
  } catch (const Error& e) {
    Invalid(rule, std::string(field) + " pattern does not compile: " + e.what());
  }
}

void CheckKeys(const Json& params, std::initializer_list<const char*> allowed,
               const std::string& rule) {
  for (const auto& [key, value] : params.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end()) {
      Invalid(rule, "unknown parameter '" + key + "'");
    }
  }
}

CorruptionRule RuleFromJson(const Json& j, size_t position) {
  const std::string where = "#" + std::to_string(position);
  if (!j.is_object()) Invalid(where, "must be an object");
  if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
    Invalid(where, "missing name");
  }
  CorruptionRule rule;
  rule.name = j["name"].get<std::string>();
  if (!j.contains("kind") || !j["kind"].is_string()) Invalid(rule.name, "missing kind");
  try {
    rule.kind = ParseRuleKind(j["kind"].get<std::string>());
  } catch (const Error& e) {
    Invalid(rule.name, e.what());
  }
  if (!j.contains("rationale") || !j["rationale"].is_string() ||
      j["rationale"].get<std::string>().empty()) {
    Invalid(rule.name, "every rule needs a non-empty rationale");
  }
  rule.rationale = j["rationale"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_object()) Invalid(rule.name, "params must be an object");
    rule.params = j["params"];
  }
  const Json& p = rule.params;
  switch (rule.kind) {
    case RuleKind::kDeleteChar:
    case RuleKind::kInsertChar:
      CheckKeys(p, {"char", "after", "before"}, rule.name);
      if (!p.contains("char")) Invalid(rule.name, "missing char");
      rule.target = SingleChar(p["char"], rule.name, "char");
      rule.after = NeighbourPattern(p, "after", rule.name);
      rule.before = NeighbourPattern(p, "before", rule.name);
      break;
    case RuleKind::kSubstitute:
      CheckKeys(p, {"map"}, rule.name);
      if (!p.contains("map") || !p["map"].is_object() || p["map"].empty()) {
        Invalid(rule.name, "substitute needs a non-empty map");
      }
      for (const auto& [from, to] : p["map"].items()) {
        const std::string f = SingleChar(Json(from), rule.name, "map key");
        const std::string t = SingleChar(to, rule.name, "map value");
        if (f == t) Invalid(rule.name, "map entry '" + f + "' maps to itself");
        rule.substitutions[f] = t;
      }
      break;
    case RuleKind::kTransposeAdjacent:
    case RuleKind::kOmitRandom:
    case RuleKind::kDuplicateRandom:
      CheckKeys(p, {"letters_only"}, rule.name);
      if (p.contains("letters_only")) {
        if (!p["letters_only"].is_boolean()) Invalid(rule.name, "letters_only must be a boolean");
        rule.letters_only = p["letters_only"].get<bool>();
      }
      break;
  }
  return rule;
}

struct WordSpan {
  size_t begin;
  size_t end;
};

std::vector<WordSpan> WordSpans(std::string_view s) {
  std::vector<WordSpan> words;
  size_t i = 0;
  bool in_word = false;
  size_t start = 0;
  const auto cps = text::DecodeUtf8(s);
  for (char32_t c : cps) {
    const size_t len = text::EncodeUtf8(c).size();
    const bool ws = text::IsWhitespace(c);
    if (!ws && !in_word) {
      in_word = true;
      start = i;
    } else if (ws && in_word) {
      in_word = false;
      words.push_back({start, i});
    }
    i += len;
  }
  if (in_word) words.push_back({start, i});
  return words;
}

}  // namespace

const char* RuleKindName(RuleKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

RuleKind ParseRuleKind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (name == kn.name) return kn.kind;
  }
  throw Error(ErrorKind::kValidation, "unknown rule kind '" + std::string(name) + "'");
}

std::vector<size_t> CorruptionRule::Sites(const std::vector<std::string>& chars) const {
  std::vector<size_t> sites;
  const size_t n = chars.size();
  auto at = [&](size_t i) -> std::string { return i < n ? chars[i] : std::string(); };
  switch (kind) {
    case RuleKind::kDeleteChar:
      for (size_t i = 0; i < n; ++i) {
        if (chars[i] == target && NeighbourMatches(after, i > 0 ? chars[i - 1] : "") &&
            NeighbourMatches(before, at(i + 1))) {
          sites.push_back(i);
        }
      }
      break;
    case RuleKind::kInsertChar:
      for (size_t k = 0; k <= n; ++k) {
        if (NeighbourMatches(after, k > 0 ? chars[k - 1] : "") &&
            NeighbourMatches(before, at(k))) {
          sites.push_back(k);
        }
      }
      break;
    case RuleKind::kSubstitute:
      for (size_t i = 0; i < n; ++i) {
        if (substitutions.contains(chars[i])) sites.push_back(i);
      }
      break;
    case RuleKind::kTransposeAdjacent:
      for (size_t i = 0; i + 1 < n; ++i) {
        if (chars[i] == chars[i + 1]) continue;
        if (letters_only && !(IsLetterChar(chars[i]) && IsLetterChar(chars[i + 1]))) continue;
        sites.push_back(i);
      }
      break;
    case RuleKind::kOmitRandom:
    case RuleKind::kDuplicateRandom:
      for (size_t i = 0; i < n; ++i) {
        if (!letters_only || IsLetterChar(chars[i])) sites.push_back(i);
      }
      break;
  }
  return sites;
}

std::string CorruptionRule::Apply(const std::vector<std::string>& chars, size_t site) const {
  std::vector<std::string> out = chars;
  switch (kind) {
    case RuleKind::kDeleteChar:
    case RuleKind::kOmitRandom:
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(site));
      break;
    case RuleKind::kInsertChar:
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(site), target);
      break;
    case RuleKind::kSubstitute:
      out[site] = substitutions.at(chars[site]);
      break;
    case RuleKind::kTransposeAdjacent:
      std::swap(out[site], out[site + 1]);
      break;
    case RuleKind::kDuplicateRandom:
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(site), chars[site]);
      break;
  }
  return text::Join(out, "");
}

CorruptionRuleSet RuleSetFromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kValidation, "rule set must be a JSON object");
  CorruptionRuleSet set;
  if (!j.contains("language") || !j["language"].is_string()) {
    throw Error(ErrorKind::kValidation, "rule set needs a language");
  }
  set.language = j["language"].get<std::string>();
  if (j.contains("min_word_len")) {
    if (!j["min_word_len"].is_number_integer() || j["min_word_len"].get<int64_t>() < 1) {
      throw Error(ErrorKind::kValidation, "min_word_len must be a positive integer");
    }
    set.min_word_len = j["min_word_len"].get<int>();
  }
  if (!j.contains("rules") || !j["rules"].is_array() || j["rules"].empty()) {
    throw Error(ErrorKind::kValidation, "rule set needs at least one rule");
  }
  for (size_t i = 0; i < j["rules"].size(); ++i) {
    set.rules.push_back(RuleFromJson(j["rules"][i], i));
  }
  return set;
}

Json RuleSetToJson(const CorruptionRuleSet& rules) {
  Json j = {{"language", rules.language}, {"min_word_len", rules.min_word_len}};
  Json arr = Json::array();
  for (const auto& r : rules.rules) {
    arr.push_back({{"name", r.name},
                   {"kind", RuleKindName(r.kind)},
                   {"params", r.params},
                   {"rationale", r.rationale}});
  }
  j["rules"] = std::move(arr);
  return j;
}

CorruptionRuleSet LoadCorruptionRules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open rule file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
  return RuleSetFromJson(j);
}

std::vector<std::string> BuiltinLanguages() { return {"ru", "tg"}; }

std::string BuiltinRulesJson(std::string_view language) {
  if (language == "ru") return builtin::kRussian;
  if (language == "tg") return builtin::kTajik;
  throw Error(ErrorKind::kNotFound,
              "no built-in corruption rules for language '" + std::string(language) + "'");
}

CorruptionRuleSet BuiltinRules(std::string_view language) {
  return RuleSetFromJson(Json::parse(BuiltinRulesJson(language)));
}

Json ResultToJson(const CorruptionResult& r) {
  Json edits = Json::array();
  for (const auto& e : r.edits) {
    edits.push_back({{"index", e.index},
                     {"rule", e.rule},
                     {"site", e.site},
                     {"original", e.original},
                     {"corrupted", e.corrupted}});
  }
  Json j = {{"text", r.text},
            {"corrupted_indices", r.corrupted_indices},
            {"ratio_requested", r.ratio_requested},
            {"ratio_actual", r.ratio_actual},
            {"seed", r.seed},
            {"word_count", r.word_count},
            {"eligible_count", r.eligible_count},
            {"edits", std::move(edits)}};
  j["warning"] = r.warning ? Json(*r.warning) : Json(nullptr);
  return j;
}

CorruptionResult Corrupt(std::string_view input, const CorruptionRuleSet& rules,
                         double ratio, uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "ratio must lie in (0, 1]");
  }
  if (!text::IsValidUtf8(input)) {
    throw Error(ErrorKind::kParse, "text is not valid UTF-8");
  }
  CorruptionResult result;
  result.ratio_requested = ratio;
  result.seed = seed;

  const auto spans = WordSpans(input);
  result.word_count = spans.size();
  std::vector<std::vector<std::string>> chars(spans.size());
  std::vector<size_t> eligible;
  for (size_t w = 0; w < spans.size(); ++w) {
    chars[w] = text::Characters(input.substr(spans[w].begin, spans[w].end - spans[w].begin));
    if (chars[w].size() < static_cast<size_t>(rules.min_word_len)) continue;
    for (const auto& rule : rules.rules) {
      if (!rule.Sites(chars[w]).empty()) {
        eligible.push_back(w);
        break;
      }
    }
  }
  result.eligible_count = eligible.size();
  if (eligible.empty()) {
    result.text = std::string(input);
    result.warning = "no eligible words";
    return result;
  }

  SplitMix64 rng(seed);
  std::vector<size_t> order = eligible;
  FisherYates(std::span<size_t>(order), rng);
  const size_t k = CeilFraction(ratio, eligible.size());
  std::vector<size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::string> replaced(spans.size());
  for (size_t w : chosen) {
    std::vector<const CorruptionRule*> applicable;
    std::vector<std::vector<size_t>> sites;
    for (const auto& rule : rules.rules) {
      auto s = rule.Sites(chars[w]);
      if (s.empty()) continue;
      applicable.push_back(&rule);
      sites.push_back(std::move(s));
    }
    const size_t r = rng.Below(applicable.size());
    const size_t site = sites[r][rng.Below(sites[r].size())];
    replaced[w] = applicable[r]->Apply(chars[w], site);
    result.edits.push_back({w, applicable[r]->name, site, text::Join(chars[w], ""), replaced[w]});
  }
  result.corrupted_indices = chosen;
  result.ratio_actual =
      static_cast<double>(chosen.size()) / static_cast<double>(eligible.size());

  std::string out;
  out.reserve(input.size() + chosen.size() * 4);
  size_t pos = 0;
  size_t next = 0;
  for (size_t w = 0; w < spans.size(); ++w) {
    if (next < chosen.size() && chosen[next] == w) {
      out.append(input.substr(pos, spans[w].begin - pos));
      out.append(replaced[w]);
      pos = spans[w].end;
      ++next;
    }
  }
  out.append(input.substr(pos));
  result.text = std::move(out);
  return result;
}

uint64_t DocumentSeed(uint64_t seed, std::string_view id) {
  return Mix64(seed ^ Fnv1a64(id));
}

corpus::Corpus CorruptCorpus(const corpus::Corpus& input, const CorruptionRuleSet& rules,
                             double ratio, uint64_t seed,
                             const std::set<std::string>* test_ids, int threads,
                             std::vector<CorruptionResult>* results) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "ratio must lie in (0, 1]");
  }
  if (test_ids != nullptr) {
    for (const auto& doc : input.documents()) {
      if (!test_ids->contains(doc.id)) {
        throw Error(ErrorKind::kLeakage,
                    "document '" + doc.id +
                        "' is not in the test split; corrupted copies may only be made "
                        "from test documents");
      }
    }
  }
  const auto& docs = input.documents();
  std::vector<CorruptionResult> out(docs.size());
  ParallelFor(docs.size(), threads, [&](size_t i) {
    out[i] = Corrupt(docs[i].text, rules, ratio, DocumentSeed(seed, docs[i].id));
  });
  std::vector<corpus::Document> corrupted = docs;
  for (size_t i = 0; i < docs.size(); ++i) {
    corrupted[i].text = out[i].text;
    corrupted[i].extra["corruption_ratio"] = ratio;
  }
  if (results != nullptr) *results = std::move(out);
  return corpus::Corpus(std::move(corrupted));
}

}  // namespace toklab::corruptor
