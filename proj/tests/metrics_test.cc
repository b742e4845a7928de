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

#include "toklab/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "toklab/text.hpp"

namespace toklab::metrics {
namespace {

using Strings = std::vector<std::string>;

TokenMapping Identity() {
  return [](std::string_view s) { return Strings{std::string(s)}; };
}

TokenMapping AllToOne() {
  return [](std::string_view) { return Strings{"stem"}; };
}

std::string RandomWord(std::mt19937_64& gen, const Strings& letters, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<size_t> pick(0, letters.size() - 1);
  std::string w;
  const int n = len(gen);
  for (int i = 0; i < n; ++i) w += letters[pick(gen)];
  return w;
}

corpus::Document Doc(std::string id, std::string body) {
  corpus::Document d;
  d.id = std::move(id);
  d.text = std::move(body);
  d.source = "test";
  d.language = "ru";
  return d;
}

// A BPE model whose only merge is (a, b</w>).
subword::SubwordModel TinyBpe() {
  subword::TrainConfig cfg;
  cfg.vocab_size = 5;
  return subword::SubwordModel(subword::Algorithm::kBpe,
                               {"<UNK>", "a", "a</w>", "b", "b</w>", "ab</w>"},
                               {{"a", "b</w>"}}, {}, cfg);
}

subword::SubwordModel CharacterBpe(const Strings& texts) {
  subword::TrainConfig cfg;
  cfg.algorithm = subword::Algorithm::kBpe;
  const auto freqs = subword::CountWords(texts, surface::SurfaceTokenizer::Whitespace());
  std::set<std::string> chars;
  for (const auto& [w, n] : freqs) {
    for (const auto& c : text::Characters(w)) chars.insert(c);
  }
  cfg.vocab_size = static_cast<int>(2 * chars.size());
  cfg.min_frequency = 1;
  return subword::Train(freqs, cfg);
}

TEST(NestTest, PaperAnchors) {
  const LexemeNest nest{"кошка", {"кошка", "кошки", "кошку"}};
  EXPECT_DOUBLE_EQ(NestCompression(Identity(), nest), 1.0);
  EXPECT_DOUBLE_EQ(NestCompression(AllToOne(), nest), 1.0 / 3.0);
}

TEST(NestTest, CountsDistinctOutputs) {
  const LexemeNest nest{"x", {"f1", "f2", "f3"}};
  const TokenMapping m = [](std::string_view s) {
    return Strings{s == "f3" ? "s2" : "s1"};
  };
  EXPECT_DOUBLE_EQ(NestCompression(m, nest), 2.0 / 3.0);
}

TEST(NestTest, ComparesWholeTuples) {
  const LexemeNest nest{"x", {"ab", "ac"}};
  const TokenMapping m = [](std::string_view s) {
    return Strings{"a", std::string(s.substr(1))};
  };
  EXPECT_DOUBLE_EQ(NestCompression(m, nest), 1.0);
}

TEST(NestTest, EmptyNestIsAnError) {
  EXPECT_TOKLAB_ERROR(NestCompression(Identity(), LexemeNest{"x", {}}),
                      ErrorKind::kInvalidArgument);
  EXPECT_TOKLAB_ERROR(SemanticConsistency(Identity(), {}), ErrorKind::kInvalidArgument);
}

TEST(NestTest, BoundsHoldOnRandomNests) {
  std::mt19937_64 gen(5);
  const Strings letters = text::Characters("абвгд");
  std::uniform_int_distribution<int> forms(1, 12);
  std::uniform_int_distribution<int> cut(0, 3);
  for (int t = 0; t < 500; ++t) {
    std::set<std::string> distinct;
    const int n = forms(gen);
    while (static_cast<int>(distinct.size()) < n) distinct.insert(RandomWord(gen, letters, 6));
    const LexemeNest nest{"l", Strings(distinct.begin(), distinct.end())};
    const size_t k = static_cast<size_t>(cut(gen));
    const TokenMapping prefix = [k](std::string_view s) {
      const auto c = text::Characters(s);
      return Strings{text::Join(Strings(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(
                                                               std::min(k, c.size()))),
                                "")};
    };
    const double lo = 1.0 / static_cast<double>(nest.forms.size());
    const double c = NestCompression(prefix, nest);
    EXPECT_GE(c, lo - 1e-12);
    EXPECT_LE(c, 1.0 + 1e-12);
    EXPECT_DOUBLE_EQ(NestCompression(Identity(), nest), 1.0);
    EXPECT_DOUBLE_EQ(NestCompression(AllToOne(), nest), lo);
  }
}

TEST(ConsistencyTest, MeanOfCoefficients) {
  const std::vector<LexemeNest> nests = {{"a", {"a1", "a2"}}, {"b", {"b1", "b2"}}};
  const TokenMapping m = [](std::string_view s) {
    return Strings{s[0] == 'a' ? std::string(s) : "b"};
  };
  EXPECT_DOUBLE_EQ(SemanticConsistency(m, nests), 0.75);
  EXPECT_DOUBLE_EQ(SemanticConsistency(Identity(), nests), 1.0);
  EXPECT_DOUBLE_EQ(SemanticConsistency(m, {nests[1]}), 0.5);
}

TEST(OovTest, Examples) {
  const std::set<std::string> vocab = {"a", "b"};
  EXPECT_DOUBLE_EQ(OovRate(vocab, {"a", "c", "c", "b"}), 0.5);
  EXPECT_DOUBLE_EQ(OovRate(vocab, {"a", "b", "a"}), 0.0);
  EXPECT_DOUBLE_EQ(OovRate(vocab, {"x", "y"}), 1.0);
  EXPECT_TOKLAB_ERROR(OovRate(vocab, {}), ErrorKind::kInvalidArgument);
}

TEST(OovTest, MatchesLinearScan) {
  std::mt19937_64 gen(17);
  const Strings letters = {"a", "b", "c"};
  std::uniform_int_distribution<int> size(1, 40);
  for (int t = 0; t < 100; ++t) {
    Strings vocab_list, heldout;
    for (int i = size(gen); i > 0; --i) vocab_list.push_back(RandomWord(gen, letters, 3));
    for (int i = size(gen); i > 0; --i) heldout.push_back(RandomWord(gen, letters, 3));
    size_t missing = 0;
    for (const auto& h : heldout) {
      if (std::find(vocab_list.begin(), vocab_list.end(), h) == vocab_list.end()) ++missing;
    }
    const std::set<std::string> vocab(vocab_list.begin(), vocab_list.end());
    EXPECT_DOUBLE_EQ(OovRate(vocab, heldout),
                     static_cast<double>(missing) / static_cast<double>(heldout.size()));
  }
}

TEST(FragmentationTest, MeanPiecesPerWord) {
  const auto model = TinyBpe();
  EXPECT_DOUBLE_EQ(Fragmentation(model, {"ba", "ab"}), 1.5);
  EXPECT_DOUBLE_EQ(Fragmentation(model, {"ab", "ab"}), 1.0);
  const auto chars = CharacterBpe({"abcd dcba"});
  EXPECT_DOUBLE_EQ(Fragmentation(chars, {"abcd"}), 4.0);
  EXPECT_TOKLAB_ERROR(Fragmentation(model, {}), ErrorKind::kInvalidArgument);
}

TEST(CompressionTest, CharacterModelTokenRatioIsMeanLength) {
  const Strings texts = {"abc de", "fghi"};
  const auto model = CharacterBpe(texts);
  const Compression c = CompressionRatio(model, texts);
  EXPECT_DOUBLE_EQ(c.token_ratio, (3.0 + 2.0 + 4.0) / 3.0);
  EXPECT_DOUBLE_EQ(c.char_ratio, 1.0);
}

TEST(CompressionTest, WholeWordVocabulary) {
  const Compression c = CompressionRatio(TinyBpe(), {"ab ab", "ab"});
  EXPECT_DOUBLE_EQ(c.token_ratio, 1.0);
  EXPECT_DOUBLE_EQ(c.char_ratio, 1.0);
  EXPECT_DOUBLE_EQ(CompressionRatio(TinyBpe(), {"ba"}).char_ratio, 1.0);
}

TEST(CompressionTest, UnknownPieceCountsAsLiteral) {
  // "z" (1 char) becomes <UNK> (5 chars).
  const Compression c = CompressionRatio(TinyBpe(), {"z"});
  EXPECT_DOUBLE_EQ(c.char_ratio, 1.0 / 5.0);
}

TEST(ReconstructionTest, BpeOnTrainingText) {
  const Strings texts = {"мама мыла раму", "  рама\tмыла  маму ", ""};
  subword::TrainConfig cfg;
  cfg.vocab_size = 40;
  cfg.min_frequency = 1;
  const auto model =
      subword::Train(subword::CountWords(texts, surface::SurfaceTokenizer::Whitespace()), cfg);
  EXPECT_DOUBLE_EQ(ReconstructionRate(model, texts), 1.0);
}

TEST(ReconstructionTest, WordPieceFailsOnUnseenCharacter) {
  subword::TrainConfig cfg;
  cfg.algorithm = subword::Algorithm::kWordPiece;
  cfg.vocab_size = 20;
  cfg.min_frequency = 1;
  const auto model = subword::Train({{"abc", 3}, {"bca", 2}}, cfg);
  EXPECT_DOUBLE_EQ(ReconstructionRate(model, {"abc bca", "abz", ""}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(ReconstructionRate(model, {}), 1.0);
}

// Least squares through the 2x2 normal equations, written independently of
// the centred form used by FitZipf.
std::pair<double, double> NormalEquations(const std::vector<double>& x,
                                          const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double sx = std::accumulate(x.begin(), x.end(), 0.0);
  const double sy = std::accumulate(y.begin(), y.end(), 0.0);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

TEST(ZipfTest, ExactPowerLaw) {
  const int64_t c = 232792560;  // lcm(1..20)
  std::map<std::string, int64_t> freqs;
  for (int r = 1; r <= 20; ++r) freqs["t" + std::to_string(100 + r)] = c / r;
  const ZipfFit fit = FitZipf(freqs);
  EXPECT_NEAR(fit.slope, -1.0, 1e-9);
  EXPECT_NEAR(fit.intercept, std::log(static_cast<double>(c)), 1e-7);
  EXPECT_NEAR(fit.rmse, 0.0, 1e-9);
  EXPECT_EQ(fit.points, 20);
}

TEST(ZipfTest, RoundedPowerLaw) {
  std::map<std::string, int64_t> freqs;
  for (int r = 1; r <= 2000; ++r) {
    freqs["w" + std::to_string(r)] = std::llround(1e5 / r);
  }
  EXPECT_NEAR(FitZipf(freqs).slope, -1.0, 0.02);
}

TEST(ZipfTest, EqualCountsGiveFlatSlope) {
  const ZipfFit fit = FitZipf(std::map<std::string, int64_t>{{"a", 7}, {"b", 7}});
  EXPECT_DOUBLE_EQ(fit.slope, 0.0);
  EXPECT_TOKLAB_ERROR(FitZipf(std::map<std::string, int64_t>{{"a", 7}}),
                      ErrorKind::kInvalidArgument);
  EXPECT_TOKLAB_ERROR(FitZipf(std::map<std::string, int64_t>{{"a", 7}, {"b", 0}}),
                      ErrorKind::kInvalidArgument);
}

TEST(ZipfTest, RanksBreakTiesByToken) {
  const auto points = ZipfPoints({{"b", 2}, {"a", 2}, {"c", 5}});
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points[0].token, "c");
  EXPECT_EQ(points[1].token, "a");
  EXPECT_EQ(points[2].token, "b");
  EXPECT_EQ(points[2].rank, 3);
  EXPECT_EQ(ZipfPointsCsv(points).substr(0, 31), "rank,count,log_rank,log_count\n1");
}

TEST(ZipfTest, SampledCorpusMatchesOracle) {
  std::mt19937_64 gen(2024);
  // With 10k tokens the rank-ordered tail bends the fit for large type
  // counts, so keep the lexicon small.
  const int types = 50;
  std::vector<double> weights;
  for (int r = 1; r <= types; ++r) weights.push_back(1.0 / r);
  std::discrete_distribution<int> draw(weights.begin(), weights.end());
  std::map<std::string, int64_t> freqs;
  for (int i = 0; i < 10000; ++i) ++freqs["w" + std::to_string(draw(gen))];
  const auto points = ZipfPoints(freqs);
  std::vector<double> x, y;
  for (const auto& p : points) {
    x.push_back(std::log(static_cast<double>(p.rank)));
    y.push_back(std::log(static_cast<double>(p.count)));
  }
  const auto [slope, intercept] = NormalEquations(x, y);
  const ZipfFit fit = FitZipf(points);
  EXPECT_NEAR(fit.slope, slope, 1e-9);
  EXPECT_NEAR(fit.intercept, intercept, 1e-9);
  EXPECT_GE(fit.slope, -1.05);
  EXPECT_LE(fit.slope, -0.95);
}

TEST(NestFileTest, ParsesRows) {
  const auto nests = ParseNests("# comment\nдом\tдом, дома,дому\nкот\tкот\n");
  ASSERT_EQ(nests.size(), 2u);
  EXPECT_EQ(nests[0].lemma, "дом");
  EXPECT_EQ(nests[0].forms, (Strings{"дом", "дома", "дому"}));
  EXPECT_TOKLAB_ERROR(ParseNests("дом\n"), ErrorKind::kParse);
  EXPECT_TOKLAB_ERROR(ParseNests("дом\tдом,дом\n"), ErrorKind::kValidation);
  EXPECT_TOKLAB_ERROR(ParseNests("дом\tдом,,дома\n"), ErrorKind::kParse);
}

TEST(NestFileTest, ShippedNestsLoad) {
  const auto nests = LoadNests(std::string(TOKLAB_SOURCE_DIR) + "/data/nests/ru.tsv");
  EXPECT_EQ(nests.size(), 5u);
  for (const auto& n : nests) EXPECT_GE(n.forms.size(), 5u) << n.lemma;
}

TEST(ExternalTest, ParsesJsonl) {
  const auto t = ParseExternalTokens(
      "{\"doc_id\":\"a\",\"tokens\":[\"x\",\"y\"]}\n\n{\"doc_id\":\"b\",\"tokens\":[]}");
  EXPECT_EQ(t.at("a"), (Strings{"x", "y"}));
  EXPECT_TRUE(t.at("b").empty());
  EXPECT_TOKLAB_ERROR(ParseExternalTokens("{\"doc_id\":\"a\"}"), ErrorKind::kParse);
  EXPECT_TOKLAB_ERROR(ParseExternalTokens("{\"doc_id\":\"a\",\"tokens\":[]}\n"
                                          "{\"doc_id\":\"a\",\"tokens\":[]}"),
                      ErrorKind::kValidation);
}

class CompareTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 gen(99);
    const Strings letters = text::Characters("абвгдеклмно");
    std::vector<corpus::Document> docs;
    for (int d = 0; d < 30; ++d) {
      Strings words;
      for (int w = 0; w < 25; ++w) words.push_back(RandomWord(gen, letters, 5));
      docs.push_back(Doc("d" + std::to_string(100 + d), text::Join(words, " ")));
    }
    corpus_ = corpus::Corpus(docs);
    split_ = corpus::SplitCorpus(corpus_, {7, 0.3});
    nests_ = {{"a", {"аб", "аба", "абе"}}, {"b", {"ло", "лок"}}};
  }

  static MethodSpec Whitespace() {
    MethodSpec m;
    m.name = "whitespace";
    return m;
  }

  corpus::Corpus corpus_;
  corpus::Split split_;
  std::vector<LexemeNest> nests_;
  CompareOptions no_timing_{20000, false, 1};
};

TEST_F(CompareTest, IdentityAndPerfectLemmatizer) {
  MethodSpec lemma;
  lemma.name = "lemma";
  lemma.normalizer = MethodSpec::Normalizer::kLemma;
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& n : nests_) {
    for (const auto& f : n.forms) entries.emplace_back(f, n.lemma);
  }
  lemma.lemmas = std::make_shared<surface::LemmaMap>(entries);
  const auto report = CompareMethods("c", corpus_, split_, {Whitespace(), lemma}, nests_);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(*report.rows[0].semantic_consistency, 1.0);
  EXPECT_DOUBLE_EQ(*report.rows[1].semantic_consistency, (1.0 / 3.0 + 1.0 / 2.0) / 2.0);
  EXPECT_FALSE(report.rows[0].fragmentation.has_value());
  EXPECT_DOUBLE_EQ(*report.rows[0].reconstruction_rate, 1.0);
  EXPECT_DOUBLE_EQ(*report.rows[0].token_compression, 1.0);
  EXPECT_DOUBLE_EQ(*report.rows[0].char_compression, 1.0);
  EXPECT_TRUE(report.rows[0].ms_per_mtoken.has_value());
}

TEST_F(CompareTest, SurfaceVocabularyComesFromTrainSplit) {
  const auto report = CompareMethods("c", corpus_, split_, {Whitespace()}, {}, no_timing_);
  const auto vocab = corpus::WhitespaceVocabulary(corpus_, split_.train_ids);
  EXPECT_EQ(*report.rows[0].vocab_size, static_cast<int64_t>(vocab.size()));
  Strings heldout;
  for (const auto& id : split_.test_ids) {
    for (const auto& w : text::SplitWhitespace(corpus_.Find(id)->text)) heldout.push_back(w);
  }
  EXPECT_DOUBLE_EQ(*report.rows[0].oov_rate, OovRate(vocab, heldout));
  EXPECT_FALSE(report.rows[0].semantic_consistency.has_value());
}

TEST_F(CompareTest, ExternalTokensMatchingWhitespace) {
  auto tokens = std::make_shared<std::map<std::string, Strings>>();
  for (const auto& d : corpus_.documents()) (*tokens)[d.id] = text::SplitWhitespace(d.text);
  MethodSpec ext;
  ext.name = "external";
  ext.kind = MethodSpec::Kind::kExternal;
  ext.external = tokens;
  const auto report =
      CompareMethods("c", corpus_, split_, {Whitespace(), ext}, nests_, no_timing_);
  EXPECT_EQ(report.rows[0].vocab_size, report.rows[1].vocab_size);
  EXPECT_EQ(report.rows[0].oov_rate, report.rows[1].oov_rate);
  EXPECT_FALSE(report.rows[1].semantic_consistency.has_value());
  EXPECT_FALSE(report.rows[1].error.has_value());
}

TEST_F(CompareTest, SubwordGridGivesOneRowPerModel) {
  std::vector<MethodSpec> methods;
  for (auto algo : {subword::Algorithm::kBpe, subword::Algorithm::kWordPiece,
                    subword::Algorithm::kUnigram}) {
    for (int v : {60, 90, 120}) {
      MethodSpec m;
      m.kind = MethodSpec::Kind::kSubword;
      m.name = std::string(subword::AlgorithmName(algo)) + "-" + std::to_string(v);
      m.train.algorithm = algo;
      m.train.vocab_size = v;
      methods.push_back(m);
    }
  }
  const auto report = CompareMethods("c", corpus_, split_, methods, nests_, no_timing_);
  ASSERT_EQ(report.rows.size(), 9u);
  for (const auto& r : report.rows) {
    ASSERT_FALSE(r.error.has_value()) << r.method << ": " << *r.error;
    EXPECT_GE(*r.fragmentation, 1.0);
    for (double v : {*r.oov_rate, *r.semantic_consistency, *r.reconstruction_rate}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST_F(CompareTest, FailingMethodIsIsolated) {
  MethodSpec bad;
  bad.name = "bad";
  bad.pattern = "[unclosed";
  const auto report =
      CompareMethods("c", corpus_, split_, {Whitespace(), bad, Whitespace()}, {}, no_timing_);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_TRUE(report.rows[1].error.has_value());
  EXPECT_FALSE(report.rows[1].vocab_size.has_value());
  EXPECT_EQ(report.rows[0].vocab_size, report.rows[2].vocab_size);
  const std::string csv = ReportCsv(report.rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
}

TEST_F(CompareTest, RejectsOverlappingSplit) {
  corpus::Split leaky = split_;
  leaky.test_ids.push_back(leaky.train_ids.front());
  EXPECT_TOKLAB_ERROR(CompareMethods("c", corpus_, leaky, {Whitespace()}, {}),
                      ErrorKind::kLeakage);
}

TEST_F(CompareTest, InvariantUnderCorpusOrder) {
  std::vector<corpus::Document> reversed(corpus_.documents().rbegin(),
                                         corpus_.documents().rend());
  MethodSpec bpe;
  bpe.kind = MethodSpec::Kind::kSubword;
  bpe.name = "bpe";
  bpe.train.vocab_size = 80;
  const auto a = CompareMethods("c", corpus_, split_, {Whitespace(), bpe}, nests_, no_timing_);
  const auto b = CompareMethods("c", corpus::Corpus(reversed), split_, {Whitespace(), bpe},
                                nests_, no_timing_);
  EXPECT_EQ(ReportCsv(a.rows), ReportCsv(b.rows));
  EXPECT_EQ(ReportToJson(a), ReportToJson(b));
}

TEST_F(CompareTest, ReportCarriesZipfAndRows) {
  const auto report = CompareMethods("c", corpus_, split_, {Whitespace()}, {}, no_timing_);
  const Json j = ReportToJson(report);
  EXPECT_EQ(j["corpus_id"], "c");
  EXPECT_EQ(j["rows"].size(), 1u);
  EXPECT_EQ(j["rows"][0]["method"], "whitespace");
  EXPECT_TRUE(j["rows"][0]["fragmentation"].is_null());
  EXPECT_EQ(j["zipf"]["fit"]["points"], static_cast<int64_t>(j["zipf"]["points"].size()));
}

TEST(MethodSpecTest, ParsesKinds) {
  const std::string root = TOKLAB_SOURCE_DIR;
  const auto stem = MethodSpecFromJson(
      {{"name", "stem"}, {"normalizer", "stem"}, {"lowercase", true},
       {"stem_rules", "data/stem/ru.json"}},
      root);
  EXPECT_EQ(stem.kind, MethodSpec::Kind::kSurface);
  ASSERT_TRUE(stem.stems);
  EXPECT_EQ(stem.stems->language(), "ru");
  const auto bpe = MethodSpecFromJson(
      {{"name", "b"}, {"kind", "subword"},
       {"train", {{"algorithm", "unigram"}, {"vocab_size", 100}}}});
  EXPECT_EQ(bpe.train.algorithm, subword::Algorithm::kUnigram);
  EXPECT_EQ(bpe.train.vocab_size, 100);
  EXPECT_TOKLAB_ERROR(MethodSpecFromJson({{"name", "x"}, {"kind", "magic"}}),
                      ErrorKind::kValidation);
}

}  // namespace
}  // namespace toklab::metrics
