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

#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "toklab/corpus.hpp"
#include "toklab/corruptor.hpp"
#include "toklab/metrics.hpp"
#include "toklab/normalize.hpp"
#include "toklab/rng.hpp"
#include "toklab/subword.hpp"
#include "toklab/text.hpp"

namespace toklab::tools {
namespace {

using Strings = std::vector<std::string>;

std::string Pick(std::mt19937_64& gen, const Strings& from) {
  return from[std::uniform_int_distribution<size_t>(0, from.size() - 1)(gen)];
}

std::string RandomWords(std::mt19937_64& gen, int words) {
  static const Strings kLetters = text::Characters("абвгдеклмнорстуыь");
  std::string out;
  for (int w = 0; w < words; ++w) {
    if (w > 0) out += ' ';
    const int len = std::uniform_int_distribution<int>(1, 8)(gen);
    for (int i = 0; i < len; ++i) out += Pick(gen, kLetters);
  }
  return out;
}

std::string RandomMarkup(std::mt19937_64& gen) {
  static const Strings kParts = {"<p>", "</p>", "<b>", "&amp;", "&lt;", "&gt;", "&nbsp;",
                                 "<script>x</script>", "слово", " ", "  ", "\t", "Текст",
                                 "<!-- c -->", "&#1072;", "<a href='x'>", "</a>", "\n"};
  std::string out;
  const int n = std::uniform_int_distribution<int>(0, 20)(gen);
  for (int i = 0; i < n; ++i) out += Pick(gen, kParts);
  return out;
}

corpus::Corpus RandomCorpus(std::mt19937_64& gen, int docs) {
  std::vector<corpus::Document> out;
  for (int i = 0; i < docs; ++i) {
    corpus::Document d;
    d.id = "doc" + std::to_string(i);
    d.text = RandomWords(gen, 30);
    d.source = "selftest";
    d.language = "ru";
    out.push_back(std::move(d));
  }
  return corpus::Corpus(std::move(out));
}

CheckResult Check(const std::string& name, const std::function<std::string()>& body) {
  try {
    const std::string failure = body();
    return {name, failure.empty(), failure.empty() ? "ok" : failure};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<CheckResult> RunSelfTest(unsigned seed) {
  std::mt19937_64 gen(seed);
  std::vector<CheckResult> results;

  results.push_back(Check("clean is idempotent", [&]() -> std::string {
    normalize::CleanConfig cfg;
    cfg.lowercase = true;
    for (int i = 0; i < 300; ++i) {
      const std::string s = RandomMarkup(gen);
      const std::string once = normalize::Clean(s, cfg);
      if (normalize::Clean(once, cfg) != once) return "not idempotent on: " + s;
    }
    return "";
  }));

  results.push_back(Check("split has no leakage", [&]() -> std::string {
    const corpus::Corpus c = RandomCorpus(gen, 40);
    for (uint64_t s = 0; s < 100; ++s) {
      const auto split = corpus::SplitCorpus(c, {s, 0.25});
      const auto vocab = corpus::WhitespaceVocabulary(c, split.train_ids);
      if (!corpus::VerifySplit(c, split.train_ids, split.test_ids, vocab).valid()) {
        return "overlap with seed " + std::to_string(s);
      }
      auto leaky = split.test_ids;
      leaky.push_back(split.train_ids.front());
      if (corpus::VerifySplit(c, split.train_ids, leaky, vocab).valid()) {
        return "injected id not detected";
      }
    }
    return "";
  }));

  const corpus::Corpus train_corpus = RandomCorpus(gen, 60);
  Strings train_texts;
  for (const auto& d : train_corpus.documents()) train_texts.push_back(d.text);
  const auto freqs =
      subword::CountWords(train_texts, surface::SurfaceTokenizer::Whitespace());

  results.push_back(Check("training is deterministic", [&]() -> std::string {
    for (auto algo : {subword::Algorithm::kBpe, subword::Algorithm::kWordPiece,
                      subword::Algorithm::kUnigram}) {
      subword::TrainConfig cfg;
      cfg.algorithm = algo;
      cfg.vocab_size = 150;
      cfg.seed = 42;
      cfg.threads = 1;
      const std::string a = subword::Train(freqs, cfg).Serialize();
      cfg.threads = 4;
      if (subword::Train(freqs, cfg).Serialize() != a) {
        return std::string(subword::AlgorithmName(algo)) + " differs across thread counts";
      }
    }
    return "";
  }));

  results.push_back(Check("BPE reconstructs its training text", [&]() -> std::string {
    subword::TrainConfig cfg;
    cfg.vocab_size = 200;
    const auto model = subword::Train(freqs, cfg);
    const double rate = metrics::ReconstructionRate(model, train_texts);
    return rate == 1.0 ? "" : "rate " + std::to_string(rate);
  }));

  results.push_back(Check("Unigram EM is monotone", [&]() -> std::string {
    subword::TrainConfig cfg;
    cfg.algorithm = subword::Algorithm::kUnigram;
    cfg.vocab_size = 60;
    cfg.min_frequency = 1;
    cfg.unigram_em_iters_per_round = 3;
    subword::UnigramTrace trace;
    subword::TrainUnigram(freqs, cfg, &trace);
    for (const auto& round : trace.round_log_likelihoods) {
      for (size_t i = 1; i < round.size(); ++i) {
        if (round[i] < round[i - 1] - 1e-9) return "log-likelihood decreased";
      }
    }
    return "";
  }));

  results.push_back(Check("nest compression bounds", [&]() -> std::string {
    const metrics::LexemeNest nest{"l", {"a", "b", "c", "d"}};
    const double id = metrics::NestCompression(
        [](std::string_view s) { return Strings{std::string(s)}; }, nest);
    const double one =
        metrics::NestCompression([](std::string_view) { return Strings{"x"}; }, nest);
    return id == 1.0 && one == 0.25 ? "" : "anchors off";
  }));

  results.push_back(Check("OOV rate counts occurrences", [&]() -> std::string {
    const std::set<std::string> vocab = {"a", "b"};
    return metrics::OovRate(vocab, {"a", "c", "c", "b"}) == 0.5 ? "" : "wrong rate";
  }));

  results.push_back(Check("Zipf fit recovers slope -1", [&]() -> std::string {
    std::map<std::string, int64_t> counts;
    for (int r = 1; r <= 2000; ++r) counts["w" + std::to_string(r)] = std::llround(1e5 / r);
    const double slope = metrics::FitZipf(counts).slope;
    return std::abs(slope + 1.0) <= 0.02 ? "" : "slope " + std::to_string(slope);
  }));

  results.push_back(Check("corruption ratio accounting", [&]() -> std::string {
    const auto rules = corruptor::BuiltinRules("ru");
    for (int i = 0; i < 50; ++i) {
      const std::string s = RandomWords(gen, 20);
      for (double ratio : {0.1, 0.3, 0.5}) {
        const auto r = corruptor::Corrupt(s, rules, ratio, static_cast<uint64_t>(i));
        const Strings a = text::SplitWhitespace(s), b = text::SplitWhitespace(r.text);
        if (a.size() != b.size()) return "word count changed";
        size_t diffs = 0;
        for (size_t k = 0; k < a.size(); ++k) diffs += a[k] != b[k] ? 1 : 0;
        if (diffs != CeilFraction(ratio, r.eligible_count)) return "wrong number of edits";
      }
    }
    return "";
  }));
  return results;
}

}  // namespace toklab::tools
