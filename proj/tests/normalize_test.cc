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

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "toklab/io.hpp"
#include "toklab/rng.hpp"

namespace toklab::normalize {
namespace {

TEST(StripMarkupTest, Tags) {
  EXPECT_EQ("Hi x", StripMarkup("<p>Hi <b>x</b></p>"));
}

TEST(StripMarkupTest, Entities) {
  EXPECT_EQ("a & b", StripMarkup("a &amp; b"));
  EXPECT_EQ("<", StripMarkup("&lt;"));
  EXPECT_EQ("é", StripMarkup("&#233;"));
  EXPECT_EQ("é", StripMarkup("&#xE9;"));
}

TEST(StripMarkupTest, ScriptAndStyleContent) {
  EXPECT_EQ("ok", StripMarkup("<script>v=1</script>ok"));
  EXPECT_EQ("ab", StripMarkup("a<style type=x>p{}</style>b"));
}

TEST(StripMarkupTest, MalformedDoesNotThrow) {
  EXPECT_NO_THROW(StripMarkup("<p<<>>&&;;&#;&#xZZ;<script"));
  EXPECT_NO_THROW(StripMarkup("<"));
  EXPECT_NO_THROW(StripMarkup("&"));
}

TEST(WhitespaceTest, Collapses) {
  EXPECT_EQ("a b c", NormalizeWhitespace("a\t b\n\nc"));
  EXPECT_EQ("x", NormalizeWhitespace("  x  "));
  EXPECT_EQ("", NormalizeWhitespace(""));
  EXPECT_EQ("a b", NormalizeWhitespace("a  b"));
}

TEST(CleanTest, PreservedAbbreviation) {
  CleanConfig c;
  c.lowercase = true;
  c.preserve_patterns.emplace_back(R"(\b[A-ZА-Я]{2,}\b)");
  EXPECT_EQ("СССР wins", Clean("<p>СССР wins</p>", c));
  EXPECT_EQ("СССР wins", Clean("<p>СССР Wins</p>", c));
}

TEST(CleanTest, StopwordsAfterNormalization) {
  CleanConfig c;
  c.lowercase = true;
  c.stopwords = {"and"};
  c.stopword_stage = StopwordStage::kAfterNormalization;
  EXPECT_EQ("cats dogs", Clean("cats AND dogs", c));
}

TEST(CleanTest, StopwordsOff) {
  CleanConfig c;
  c.stopwords = {"and"};
  c.stopword_stage = StopwordStage::kOff;
  EXPECT_EQ("cats and dogs", Clean("cats and dogs", c));
}

TEST(CleanTest, StopwordsBeforeNormalizationMatchFolded) {
  CleanConfig c;
  c.stopwords = {"и"};
  c.stopword_stage = StopwordStage::kBeforeNormalization;
  EXPECT_EQ("кошки собаки", Clean("кошки И собаки", c));
}

TEST(CleanTest, ConfigJsonRoundTrip) {
  auto j = Json::parse(R"({"strip_markup":true,"lowercase":true,
      "preserve_patterns":["\\b[A-Z]{2,}\\b"],"stopwords":["The","a"],
      "stopword_stage":"after_normalization"})");
  CleanConfig c = CleanConfigFromJson(j);
  EXPECT_EQ((std::set<std::string>{"a", "the"}), c.stopwords);
  CleanConfig again = CleanConfigFromJson(CleanConfigToJson(c));
  EXPECT_EQ(Clean("The NATO Summit a b", c), Clean("The NATO Summit a b", again));
  EXPECT_EQ("NATO summit b", Clean("The NATO Summit a b", c));
}

TEST(CleanTest, InvalidPatternRejected) {
  auto j = Json::parse(R"({"preserve_patterns":["("]})");
  EXPECT_TOKLAB_ERROR(CleanConfigFromJson(j), ErrorKind::kInvalidArgument);
}

// Random strings built from markup fragments, entities, mixed case and
// whitespace.
std::string RandomHtmlish(SplitMix64& rng) {
  static const char* kParts[] = {
      "<p>", "</p>", "<b>", "</b>", "<script>", "</script>", "<style>",
      "</style>", "&amp;", "&lt;", "&gt;", "&amp;lt;", "&#65;", "&#x42;",
      "&nbsp;", "&bogus;", "&", "<", ">", " ", "  ", "\t", "\n", "Кошки",
      "СССР", "the", "The", "AND", "and", "x", "Y", "42", "<br/>", "<a href='u'>",
      "</a>", "&lt;b&gt;", "&#;", "<!-- c -->", " ", "é", "é"};
  const size_t n = rng.Below(24);
  std::string s;
  for (size_t i = 0; i < n; ++i) s += kParts[rng.Below(std::size(kParts))];
  return s;
}

TEST(CleanTest, IdempotentOnRandomInputs) {
  CleanConfig configs[4];
  configs[1].lowercase = true;
  configs[1].preserve_patterns.emplace_back(R"(\b[A-ZА-Я]{2,}\b)");
  configs[2].lowercase = true;
  configs[2].stopwords = {"the", "and"};
  configs[2].stopword_stage = StopwordStage::kAfterNormalization;
  configs[3].stopwords = {"the", "and", "x"};
  configs[3].stopword_stage = StopwordStage::kBeforeNormalization;
  SplitMix64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::string s = RandomHtmlish(rng);
    for (const auto& c : configs) {
      const std::string once = Clean(s, c);
      EXPECT_EQ(once, Clean(once, c)) << "input: " << s;
      EXPECT_EQ(std::string::npos, once.find("  "));
    }
  }
}

TEST(RulesTest, LoadInOrder) {
  testing::TempDir dir;
  io::WriteFile(dir.File("r.json"),
                R"([{"name":"url","pattern":"https?://\\S+","marker":"<URL>"},
                    {"name":"email","pattern":"\\S+@\\S+","marker":"<EMAIL>"}])");
  RuleSet r = LoadRules(dir.File("r.json"));
  ASSERT_EQ(2u, r.rules().size());
  EXPECT_EQ("url", r.rules()[0].name);
  EXPECT_EQ("email", r.rules()[1].name);
}

TEST(RulesTest, DuplicateNameRejected) {
  auto j = Json::parse(R"([{"name":"a","pattern":"x","marker":"<A>"},
                           {"name":"a","pattern":"y","marker":"<B>"}])");
  EXPECT_TOKLAB_ERROR(RuleSetFromJson(j), ErrorKind::kValidation);
}

TEST(RulesTest, MarkerMatchingItsPatternRejected) {
  auto j = Json::parse(R"([{"name":"tag","pattern":"<\\w+>","marker":"<TAG>"}])");
  EXPECT_TOKLAB_ERROR(RuleSetFromJson(j), ErrorKind::kValidation);
}

TEST(RulesTest, SchemaErrorNamesRule) {
  auto j = Json::parse(R"([{"name":"num","pattern":"\\d+"}])");
  try {
    RuleSetFromJson(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("num"), std::string::npos);
  }
}

TEST(RulesTest, EmptyIsIdentity) {
  RuleSet r = RuleSetFromJson(Json::array());
  EXPECT_TRUE(r.empty());
  EXPECT_EQ("see http://x.y 42", Standardize("see http://x.y 42", r));
}

TEST(StandardizeTest, Url) {
  EXPECT_EQ("see <URL> now", Standardize("see http://x.y now", DefaultRules()));
}

TEST(StandardizeTest, EmailAndNumber) {
  EXPECT_EQ("<EMAIL> wrote <NUMBER>",
            Standardize("a@b.c wrote 42", DefaultRules()));
}

TEST(StandardizeTest, NoMatchUnchanged) {
  EXPECT_EQ("plain words", Standardize("plain words", DefaultRules()));
}

TEST(StandardizeTest, Idempotent) {
  const RuleSet rules = DefaultRules();
  for (const char* s : {"mail me at x.y@z.org or www.site.ru/p?q=1 3,14",
                        "<URL> <EMAIL> <NUMBER> 12.5.7", "1 2 3"}) {
    const std::string once = Standardize(s, rules);
    EXPECT_EQ(once, Standardize(once, rules));
  }
}

TEST(StandardizeTest, RuleSetJsonRoundTrip) {
  RuleSet again = RuleSetFromJson(RuleSetToJson(DefaultRules()));
  ASSERT_EQ(3u, again.rules().size());
  EXPECT_EQ("<NUMBER>", again.rules()[2].marker);
}

}  // namespace
}  // namespace toklab::normalize
