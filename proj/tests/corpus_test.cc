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

#include "toklab/corpus.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "test_util.hpp"
#include "toklab/io.hpp"

namespace toklab::corpus {
namespace {

using Strings = std::vector<std::string>;

Document Doc(std::string id, std::string text) {
  Document d;
  d.id = std::move(id);
  d.text = std::move(text);
  d.source = "test";
  d.language = "ru";
  return d;
}

TEST(CorpusTest, ParsesTwoDocuments) {
  Corpus c = ParseCorpus(
      R"({"id":"a","text":"a b","source":"s","language":"ru"})"
      "\n"
      R"({"id":"b","text":"c","source":"s","language":"tg"})"
      "\n");
  ASSERT_EQ(2u, c.size());
  EXPECT_EQ("a", c.documents()[0].id);
  EXPECT_EQ(3, c.total_tokens());
}

TEST(CorpusTest, TokenContribution) {
  Corpus c = ParseCorpus(R"({"id":"x","text":"a b c","source":"s","language":"ru"})");
  EXPECT_EQ(3, c.total_tokens());
}

TEST(CorpusTest, DuplicateIdsRejected) {
  try {
    ParseCorpus(R"({"id":"a","text":"x","source":"s","language":"ru"})"
                "\n"
                R"({"id":"a","text":"y","source":"s","language":"ru"})");
    FAIL() << "expected duplicate-id error";
  } catch (const Error& e) {
    EXPECT_EQ(ErrorKind::kValidation, e.kind());
    EXPECT_NE(std::string(e.what()).find("a"), std::string::npos);
  }
}

TEST(CorpusTest, MissingFieldNamed) {
  try {
    ParseCorpus(R"({"id":"a","text":"x","language":"ru"})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("source"), std::string::npos) << e.what();
  }
}

TEST(CorpusTest, ParseErrorCarriesLineNumber) {
  try {
    ParseCorpus(R"({"id":"a","text":"x","source":"s","language":"ru"})"
                "\n\n{oops\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(ErrorKind::kParse, e.kind());
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(CorpusTest, LanguageCodeValidated) {
  EXPECT_TOKLAB_ERROR(
      ParseCorpus(R"({"id":"a","text":"x","source":"s","language":"RU"})"),
      ErrorKind::kValidation);
  EXPECT_TOKLAB_ERROR(
      ParseCorpus(R"({"id":"","text":"x","source":"s","language":"ru"})"),
      ErrorKind::kValidation);
}

TEST(CorpusTest, TextIsNfcNormalized) {
  Corpus c = ParseCorpus(
      "{\"id\":\"a\",\"text\":\"\xd0\xb8\xcc\x86\",\"source\":\"s\",\"language\":\"ru\"}");
  EXPECT_EQ("й", c.documents()[0].text);
}

TEST(CorpusTest, RoundTripKeepsUnknownFields) {
  const std::string line =
      R"({"id":"a","text":"x y","title":"T","source":"s","category":"news",)"
      R"("language":"ru","date":"2020-01-02","url":"http://x","tokens_approx":2,)"
      R"("license":"CC-BY","extra_field":[1,2]})";
  Corpus c = ParseCorpus(line);
  const std::string out = SerializeCorpus(c);
  Corpus again = ParseCorpus(out);
  EXPECT_EQ(c, again);
  EXPECT_EQ(out, SerializeCorpus(again));
  EXPECT_NE(out.find("extra_field"), std::string::npos);
}

TEST(CorpusTest, SaveAndLoad) {
  testing::TempDir dir;
  Corpus c({Doc("a", "x y"), Doc("b", "z")});
  SaveCorpus(c, dir.File("c.jsonl"));
  EXPECT_EQ(c, LoadCorpus(dir.File("c.jsonl")));
  EXPECT_TOKLAB_ERROR(LoadCorpus(dir.File("missing.jsonl")), ErrorKind::kIo);
}

Corpus NumberedCorpus(size_t n) {
  std::vector<Document> docs;
  for (size_t i = 0; i < n; ++i) {
    docs.push_back(Doc("d" + std::to_string(i), "w" + std::to_string(i) + " x"));
  }
  return Corpus(std::move(docs));
}

TEST(SplitTest, CeilingSize) {
  Split s = SplitCorpus(NumberedCorpus(10), {7, 0.2});
  EXPECT_EQ(2u, s.test_ids.size());
  EXPECT_EQ(8u, s.train_ids.size());
  std::set<std::string> all(s.train_ids.begin(), s.train_ids.end());
  for (const auto& id : s.test_ids) EXPECT_TRUE(all.insert(id).second);
  EXPECT_EQ(10u, all.size());
}

TEST(SplitTest, Deterministic) {
  Corpus c = NumberedCorpus(30);
  Split a = SplitCorpus(c, {42, 0.3});
  Split b = SplitCorpus(c, {42, 0.3});
  EXPECT_EQ(a.test_ids, b.test_ids);
  EXPECT_EQ(a.train_ids, b.train_ids);
}

TEST(SplitTest, IndependentOfInputOrder) {
  Strings ids = {"e", "b", "d", "a", "c"};
  Split a = SplitIds(ids, {3, 0.4});
  std::reverse(ids.begin(), ids.end());
  Split b = SplitIds(ids, {3, 0.4});
  EXPECT_EQ(a.test_ids, b.test_ids);
}

TEST(SplitTest, HandComputedSplitMixShuffle) {
  // Seed 0: outputs mod 5,4,3,2 give swaps (4,0) (3,0) (2,1) (1,0), so
  // [a,b,c,d,e] becomes [c,d,b,e,a]; ceil(0.4 * 5) = 2 test ids.
  Split s = SplitIds({"a", "b", "c", "d", "e"}, {0, 0.4});
  EXPECT_EQ((Strings{"c", "d"}), s.test_ids);
  EXPECT_EQ((Strings{"b", "e", "a"}), s.train_ids);
}

TEST(SplitTest, Errors) {
  EXPECT_TOKLAB_ERROR(SplitIds({}, {0, 0.2}), ErrorKind::kInvalidArgument);
  EXPECT_TOKLAB_ERROR(SplitIds({"a"}, {0, 1.0}), ErrorKind::kInvalidArgument);
  EXPECT_TOKLAB_ERROR(SplitIds({"a"}, {0, 0.0}), ErrorKind::kInvalidArgument);
}

TEST(VerifySplitTest, DisjointIsValid) {
  Corpus c({Doc("a", "x y"), Doc("b", "y z")});
  SplitReport r = VerifySplit(c, {"a"}, {"b"}, {"x", "y"});
  EXPECT_TRUE(r.valid());
  EXPECT_EQ(2, r.train_tokens);
  EXPECT_EQ(2, r.test_tokens);
  EXPECT_EQ(1, r.oov_token_count);
  EXPECT_DOUBLE_EQ(0.5, r.oov_rate);
  // V_train = {x,y}, V_all = {x,y,z}.
  EXPECT_DOUBLE_EQ(2.0 / 3.0, r.vocab_overlap);
}

TEST(VerifySplitTest, SharedIdDetected) {
  Corpus c({Doc("d7", "x"), Doc("d8", "y")});
  SplitReport r = VerifySplit(c, {"d7", "d8"}, {"d7"}, {});
  EXPECT_FALSE(r.valid());
  EXPECT_EQ((Strings{"d7"}), r.id_intersection);
}

TEST(VerifySplitTest, OovCount) {
  Corpus c({Doc("tr", "a b"), Doc("te", "a c c b")});
  SplitReport r = VerifySplit(c, {"tr"}, {"te"}, {"a", "b"});
  EXPECT_EQ(2, r.oov_token_count);
  EXPECT_DOUBLE_EQ(0.5, r.oov_rate);
}

TEST(VerifySplitTest, UnknownId) {
  Corpus c({Doc("a", "x")});
  EXPECT_TOKLAB_ERROR(VerifySplit(c, {"a"}, {"zz"}, {}), ErrorKind::kNotFound);
}

TEST(StatsTest, Means) {
  Document a = Doc("a", "w w");
  Document b = Doc("b", "w w x y");
  a.category = "news";
  b.category = "news";
  CorpusStats s = ComputeStats(Corpus({a, b}));
  EXPECT_DOUBLE_EQ(3.0, s.mean_text_length);
  EXPECT_FALSE(s.mean_title_length.has_value());
  EXPECT_EQ(6, s.token_total);
  EXPECT_EQ(3, s.unique_tokens);
  ASSERT_EQ(1u, s.per_category.count("news"));
  EXPECT_EQ(2, s.per_category.at("news").min);
  EXPECT_EQ(4, s.per_category.at("news").max);
}

TEST(StatsTest, UniqueTokens) {
  CorpusStats s = ComputeStats(Corpus({Doc("a", "a a"), Doc("b", "b")}));
  EXPECT_EQ(2, s.unique_tokens);
}

TEST(StatsTest, HistogramPowersOfTwo) {
  CorpusStats s = ComputeStats(
      Corpus({Doc("a", "x"), Doc("b", "x x"), Doc("c", "x x x"), Doc("d", "x x x x x")}));
  // Buckets (0,1] (1,2] (2,4] (4,8].
  ASSERT_EQ(4u, s.length_histogram.size());
  EXPECT_EQ(8, s.length_histogram.back().upper);
  int64_t total = 0;
  for (const auto& b : s.length_histogram) total += b.count;
  EXPECT_EQ(4, total);
  EXPECT_EQ(1, s.length_histogram[2].count);
}

TEST(DatasheetTest, Aggregates) {
  Document a = Doc("a", "x y");
  Document b = Doc("b", "x");
  Document c = Doc("c", "z");
  a.category = "news";
  b.category = "news";
  c.category = "sport";
  Corpus corpus({a, b, c});
  Datasheet d = BuildDatasheet(corpus, {});
  EXPECT_EQ(3, d.document_count);
  EXPECT_EQ(corpus.total_tokens(), d.token_count);
  EXPECT_EQ((std::map<std::string, int64_t>{{"news", 2}, {"sport", 1}}),
            d.category_distribution);
  EXPECT_FALSE(d.time_span.has_value());
  EXPECT_FALSE(d.known_limitations.empty());
}

TEST(DatasheetTest, TimeSpan) {
  Document a = Doc("a", "x");
  Document b = Doc("b", "x");
  a.date = "2021-05-01";
  b.date = "2019-01-01";
  Datasheet d = BuildDatasheet(Corpus({a, b}), {});
  ASSERT_TRUE(d.time_span.has_value());
  EXPECT_EQ("2019-01-01", d.time_span->first);
  EXPECT_EQ("2021-05-01", d.time_span->second);
}

}  // namespace
}  // namespace toklab::corpus
