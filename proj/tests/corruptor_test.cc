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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "test_util.hpp"
#include "toklab/error.hpp"
#include "toklab/rng.hpp"
#include "toklab/text.hpp"

namespace toklab::corruptor {
namespace {

using Strings = std::vector<std::string>;

corpus::Document Doc(std::string id, std::string body) {
  corpus::Document d;
  d.id = std::move(id);
  d.text = std::move(body);
  d.source = "test";
  d.language = "ru";
  return d;
}

Json OneRule(Json rule) {
  return Json{{"language", "xx"}, {"min_word_len", 2}, {"rules", Json::array({rule})}};
}

CorruptionRuleSet Only(const CorruptionRuleSet& all, const std::string& name) {
  CorruptionRuleSet s = all;
  s.rules.clear();
  for (const auto& r : all.rules) {
    if (r.name == name) s.rules.push_back(r);
  }
  return s;
}

// Every string reachable from `word` by swapping one pair of adjacent
// characters, indexed by the left position of the pair.
Strings AllTranspositions(const std::string& word) {
  const Strings c = text::Characters(word);
  Strings out;
  for (size_t i = 0; i + 1 < c.size(); ++i) {
    Strings t = c;
    std::swap(t[i], t[i + 1]);
    out.push_back(text::Join(t, ""));
  }
  return out;
}

// True when `b` is `a` with exactly one character removed.
bool OneDeletion(const Strings& a, const Strings& b) {
  if (b.size() + 1 != a.size()) return false;
  for (size_t skip = 0; skip < a.size(); ++skip) {
    Strings t = a;
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(skip));
    if (t == b) return true;
  }
  return false;
}

// Whether `after` can be explained by inverting a single edit of one of
// the rule kinds in `rules`.
bool SingleEdit(const std::string& before, const std::string& after,
                const CorruptionRuleSet& rules) {
  const Strings a = text::Characters(before);
  const Strings b = text::Characters(after);
  for (const auto& rule : rules.rules) {
    switch (rule.kind) {
      case RuleKind::kDeleteChar:
      case RuleKind::kOmitRandom:
        if (OneDeletion(a, b)) return true;
        break;
      case RuleKind::kInsertChar:
      case RuleKind::kDuplicateRandom:
        if (OneDeletion(b, a)) return true;
        break;
      case RuleKind::kSubstitute:
        if (a.size() == b.size()) {
          size_t diffs = 0, at = 0;
          for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) ++diffs, at = i;
          }
          if (diffs == 1) {
            auto it = rule.substitutions.find(a[at]);
            if (it != rule.substitutions.end() && it->second == b[at]) return true;
          }
        }
        break;
      case RuleKind::kTransposeAdjacent:
        for (const auto& t : AllTranspositions(before)) {
          if (t == after) return true;
        }
        break;
    }
  }
  return false;
}

std::string RandomRussianText(std::mt19937_64& gen) {
  static const Strings kAlphabet = text::Characters("абвгдежзийклмнопрстуфхцчшщъыьэюя");
  static const Strings kOther = {"-", "7", ",", "«"};
  std::uniform_int_distribution<int> words(0, 30);
  std::uniform_int_distribution<int> len(1, 9);
  std::uniform_int_distribution<size_t> letter(0, kAlphabet.size() - 1);
  std::uniform_int_distribution<size_t> other(0, kOther.size() - 1);
  std::uniform_int_distribution<int> coin(0, 9);
  std::string out;
  const int n = words(gen);
  for (int w = 0; w < n; ++w) {
    if (w > 0) out += coin(gen) == 0 ? "  " : " ";
    const int l = len(gen);
    for (int i = 0; i < l; ++i) {
      out += coin(gen) == 0 ? kOther[other(gen)] : kAlphabet[letter(gen)];
    }
  }
  return out;
}

// Eligibility under the Russian set: omit_random applies to any word with a
// letter, and no rule applies to a word without one.
size_t RussianEligible(const std::string& s) {
  size_t n = 0;
  for (const auto& w : text::SplitWhitespace(s)) {
    const auto cps = text::DecodeUtf8(w);
    if (cps.size() < 2) continue;
    bool letter = false;
    for (char32_t c : cps) letter = letter || text::IsLetter(c);
    n += letter ? 1 : 0;
  }
  return n;
}

TEST(RuleSetTest, BuiltinsMatchShippedFiles) {
  for (const auto& lang : BuiltinLanguages()) {
    std::ifstream in(std::string(TOKLAB_SOURCE_DIR) + "/data/corruption/" + lang + ".json");
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(Json::parse(ss.str()), Json::parse(BuiltinRulesJson(lang))) << lang;
    const auto loaded = LoadCorruptionRules(std::string(TOKLAB_SOURCE_DIR) +
                                            "/data/corruption/" + lang + ".json");
    EXPECT_EQ(RuleSetToJson(loaded), RuleSetToJson(BuiltinRules(lang)));
  }
}

TEST(RuleSetTest, RussianSetHasTheExpectedRuleKinds) {
  const auto ru = BuiltinRules("ru");
  Strings kinds;
  for (const auto& r : ru.rules) kinds.push_back(RuleKindName(r.kind));
  EXPECT_EQ(kinds, (Strings{"delete_char", "insert_char", "substitute", "transpose_adjacent",
                            "omit_random", "duplicate_random"}));
  EXPECT_EQ(ru.rules[2].substitutions.at("ы"), "и");
  EXPECT_EQ(ru.rules[2].substitutions.at("и"), "ы");
}

TEST(RuleSetTest, TajikSetCoversDiacriticLetters) {
  const auto tg = BuiltinRules("tg");
  const auto& loss = tg.rules[0].substitutions;
  for (const auto& [from, to] : std::map<std::string, std::string>{
           {"ғ", "г"}, {"ӣ", "и"}, {"қ", "к"}, {"ӯ", "у"}, {"ҳ", "х"}, {"ҷ", "ч"}}) {
    EXPECT_EQ(loss.at(from), to);
  }
}

TEST(RuleSetTest, UnknownLanguageIsNotFound) {
  EXPECT_TOKLAB_ERROR(BuiltinRules("de"), ErrorKind::kNotFound);
}

TEST(RuleSetTest, RejectsMissingRationale) {
  EXPECT_TOKLAB_ERROR(RuleSetFromJson(OneRule({{"name", "o"}, {"kind", "omit_random"}})),
                      ErrorKind::kValidation);
}

TEST(RuleSetTest, RejectsEmptyRuleList) {
  EXPECT_TOKLAB_ERROR(RuleSetFromJson(Json{{"language", "xx"}, {"rules", Json::array()}}),
                      ErrorKind::kValidation);
}

TEST(RuleSetTest, UnknownKindIsNamed) {
  try {
    RuleSetFromJson(OneRule({{"name", "o"}, {"kind", "swap_words"}, {"rationale", "r"}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("swap_words"), std::string::npos);
  }
}

TEST(RuleSetTest, RejectsBadParameters) {
  EXPECT_TOKLAB_ERROR(
      RuleSetFromJson(OneRule({{"name", "s"}, {"kind", "substitute"}, {"rationale", "r"},
                               {"params", {{"map", Json::object()}}}})),
      ErrorKind::kValidation);
  EXPECT_TOKLAB_ERROR(
      RuleSetFromJson(OneRule({{"name", "s"}, {"kind", "substitute"}, {"rationale", "r"},
                               {"params", {{"map", {{"a", "a"}}}}}})),
      ErrorKind::kValidation);
  EXPECT_TOKLAB_ERROR(
      RuleSetFromJson(OneRule({{"name", "d"}, {"kind", "delete_char"}, {"rationale", "r"},
                               {"params", {{"char", "ab"}}}})),
      ErrorKind::kValidation);
  EXPECT_TOKLAB_ERROR(
      RuleSetFromJson(OneRule({{"name", "d"}, {"kind", "delete_char"}, {"rationale", "r"},
                               {"params", {{"char", "a"}, {"after", "[unclosed"}}}})),
      ErrorKind::kValidation);
  EXPECT_TOKLAB_ERROR(
      RuleSetFromJson(OneRule({{"name", "o"}, {"kind", "omit_random"}, {"rationale", "r"},
                               {"params", {{"typo", true}}}})),
      ErrorKind::kValidation);
}

TEST(RuleTest, TransposeSitesMatchEnumeration) {
  const auto rule = Only(BuiltinRules("ru"), "adjacent_transposition").rules[0];
  const Strings chars = text::Characters("текст");
  const Strings all = AllTranspositions("текст");
  const auto sites = rule.Sites(chars);
  ASSERT_EQ(sites.size(), all.size());
  for (size_t s : sites) EXPECT_EQ(rule.Apply(chars, s), all[s]);
  EXPECT_EQ(rule.Apply(chars, 2), "тескт");
}

TEST(RuleTest, TransposeSkipsEqualNeighbours) {
  const auto rule = Only(BuiltinRules("ru"), "adjacent_transposition").rules[0];
  EXPECT_EQ(rule.Sites(text::Characters("класс")), (std::vector<size_t>{0, 1, 2}));
}

TEST(RuleTest, SoftSignDeletion) {
  const auto rule = Only(BuiltinRules("ru"), "soft_sign_deletion").rules[0];
  const Strings chars = text::Characters("день");
  ASSERT_EQ(rule.Sites(chars), (std::vector<size_t>{3}));
  EXPECT_EQ(rule.Apply(chars, 3), "ден");
}

TEST(RuleTest, SoftSignInsertionNeedsConsonantContext) {
  const auto rule = Only(BuiltinRules("ru"), "soft_sign_insertion").rules[0];
  const Strings uchitsya = text::Characters("учится");
  ASSERT_EQ(rule.Sites(uchitsya), (std::vector<size_t>{4}));
  EXPECT_EQ(rule.Apply(uchitsya, 4), "учиться");
  const Strings myach = text::Characters("мяч");
  ASSERT_EQ(rule.Sites(myach), (std::vector<size_t>{3}));
  EXPECT_EQ(rule.Apply(myach, 3), "мячь");
  EXPECT_TRUE(rule.Sites(text::Characters("аэа")).empty());
}

TEST(RuleTest, TajikDiacriticLoss) {
  const auto rule = BuiltinRules("tg").rules[0];
  const Strings chars = text::Characters("ҳақ");
  ASSERT_EQ(rule.Sites(chars), (std::vector<size_t>{0, 2}));
  EXPECT_EQ(rule.Apply(chars, 2), "ҳак");
}

TEST(RuleTest, DuplicateAndOmit) {
  const auto ru = BuiltinRules("ru");
  const auto dup = Only(ru, "letter_duplication").rules[0];
  const auto omit = Only(ru, "letter_omission").rules[0];
  const Strings chars = text::Characters("к-т");
  EXPECT_EQ(dup.Sites(chars), (std::vector<size_t>{0, 2}));
  EXPECT_EQ(dup.Apply(chars, 2), "к-тт");
  EXPECT_EQ(omit.Apply(chars, 0), "-т");
}

TEST(CorruptTest, CeilingOfRatio) {
  const auto ru = Only(BuiltinRules("ru"), "letter_omission");
  const auto r = Corrupt("один два три четыре", ru, 0.5, 7);
  EXPECT_EQ(r.eligible_count, 4u);
  EXPECT_EQ(r.corrupted_indices.size(), 2u);
  EXPECT_DOUBLE_EQ(r.ratio_actual, 0.5);
  const auto third = Corrupt("один два три четыре пять шесть семь восемь девять десять",
                             ru, 0.3, 7);
  EXPECT_EQ(third.corrupted_indices.size(), 3u);
}

TEST(CorruptTest, SingleRuleSingleSiteIsForced) {
  const auto rule = Only(BuiltinRules("ru"), "adjacent_transposition");
  CorruptionRuleSet set = rule;
  set.rules[0].params = Json::object();
  const auto r = Corrupt("аб", set, 1.0, 123);
  EXPECT_EQ(r.text, "ба");
  EXPECT_EQ(r.corrupted_indices, (std::vector<size_t>{0}));
}

TEST(CorruptTest, OnlyShortWordsLeaveTextUnchanged) {
  const auto r = Corrupt("а и о у", BuiltinRules("ru"), 0.5, 1);
  EXPECT_EQ(r.text, "а и о у");
  EXPECT_EQ(r.ratio_actual, 0.0);
  EXPECT_TRUE(r.corrupted_indices.empty());
  ASSERT_TRUE(r.warning.has_value());
}

TEST(CorruptTest, RejectsRatioOutsideUnitInterval) {
  const auto ru = BuiltinRules("ru");
  EXPECT_TOKLAB_ERROR(Corrupt("слово", ru, 0.0, 1), ErrorKind::kInvalidArgument);
  EXPECT_TOKLAB_ERROR(Corrupt("слово", ru, 1.5, 1), ErrorKind::kInvalidArgument);
  EXPECT_TOKLAB_ERROR(Corrupt("слово", ru, std::nan(""), 1), ErrorKind::kInvalidArgument);
}

TEST(CorruptTest, RandomTextsKeepAccountingExact) {
  const auto ru = BuiltinRules("ru");
  std::mt19937_64 gen(20260101);
  for (int t = 0; t < 200; ++t) {
    const std::string s = RandomRussianText(gen);
    for (double ratio : {0.1, 0.3, 0.5}) {
      const auto r = Corrupt(s, ru, ratio, static_cast<uint64_t>(t));
      const size_t eligible = RussianEligible(s);
      ASSERT_EQ(r.eligible_count, eligible) << s;
      const Strings before = text::SplitWhitespace(s);
      const Strings after = text::SplitWhitespace(r.text);
      ASSERT_EQ(before.size(), after.size());
      size_t diffs = 0;
      for (size_t i = 0; i < before.size(); ++i) {
        if (before[i] == after[i]) continue;
        ++diffs;
        EXPECT_TRUE(SingleEdit(before[i], after[i], ru)) << before[i] << " -> " << after[i];
      }
      const size_t expected =
          eligible == 0 ? 0 : static_cast<size_t>(std::ceil(ratio * eligible - 1e-9));
      EXPECT_EQ(diffs, expected) << s;
      EXPECT_EQ(r.corrupted_indices.size(), expected);
      EXPECT_EQ(ResultToJson(Corrupt(s, ru, ratio, static_cast<uint64_t>(t))),
                ResultToJson(r));
    }
  }
}

TEST(CorruptTest, WhitespaceIsKept) {
  const auto r = Corrupt("  слово\tещё\n\nтекст ", BuiltinRules("ru"), 1.0, 5);
  const Strings words = text::SplitWhitespace(r.text);
  ASSERT_EQ(words.size(), 3u);
  EXPECT_EQ(r.text.substr(0, 2), "  ");
  EXPECT_NE(r.text.find('\t'), std::string::npos);
  EXPECT_NE(r.text.find("\n\n"), std::string::npos);
  EXPECT_EQ(r.text.back(), ' ');
}

TEST(CorruptCorpusTest, AddsRatioToEveryDocument) {
  corpus::Corpus c({Doc("a", "первый документ тут"), Doc("b", "второй текст"),
                    Doc("c", "третий пример текста")});
  const auto out = CorruptCorpus(c, BuiltinRules("ru"), 0.3, 11);
  ASSERT_EQ(out.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out.documents()[i].id, c.documents()[i].id);
    EXPECT_EQ(out.documents()[i].extra["corruption_ratio"], 0.3);
    EXPECT_NE(out.documents()[i].text, c.documents()[i].text);
  }
}

TEST(CorruptCorpusTest, OrderIndependent) {
  const auto ru = BuiltinRules("ru");
  corpus::Corpus forward({Doc("a", "один два три"), Doc("b", "четыре пять"),
                          Doc("c", "шесть семь восемь")});
  corpus::Corpus backward({Doc("c", "шесть семь восемь"), Doc("b", "четыре пять"),
                           Doc("a", "один два три")});
  const auto f = CorruptCorpus(forward, ru, 0.5, 3);
  const auto b = CorruptCorpus(backward, ru, 0.5, 3, nullptr, 4);
  for (const auto& doc : f.documents()) EXPECT_EQ(b.Find(doc.id)->text, doc.text);
}

TEST(CorruptCorpusTest, RefusesTrainDocuments) {
  corpus::Corpus c({Doc("a", "один два"), Doc("b", "три четыре")});
  const std::set<std::string> test_ids = {"a"};
  EXPECT_TOKLAB_ERROR(CorruptCorpus(c, BuiltinRules("ru"), 0.3, 1, &test_ids),
                      ErrorKind::kLeakage);
  const std::set<std::string> both = {"a", "b"};
  EXPECT_EQ(CorruptCorpus(c, BuiltinRules("ru"), 0.3, 1, &both).size(), 2u);
}

TEST(CorruptCorpusTest, SubSeedIsMixedFromIdHash) {
  EXPECT_EQ(DocumentSeed(0, ""), Mix64(0xcbf29ce484222325ULL));
  EXPECT_NE(DocumentSeed(1, "a"), DocumentSeed(1, "b"));
}

}  // namespace
}  // namespace toklab::corruptor
