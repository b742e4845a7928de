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

// Synthetic corpora for the acceptance checks: an agglutinative-looking
// lexicon (stem + suffix chains) drawn with Zipfian frequencies, so that
// subword models have real structure to learn at any vocabulary size.

#ifndef TOKLAB_TESTS_FIXTURE_HPP_
#define TOKLAB_TESTS_FIXTURE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "toklab/corpus.hpp"

namespace toklab::testing {

struct FixtureSpec {
  uint64_t seed = 1;
  size_t tokens = 500000;
  size_t words_per_doc = 200;
  size_t stems = 6000;
  double zipf_exponent = 1.0;
};

inline std::vector<std::string> FixtureSyllables() {
  const std::vector<std::string> c = {"б", "в", "г", "д", "ж", "з", "к", "л", "м",
                                      "н", "п", "р", "с", "т", "ф", "х", "ч", "ш"};
  const std::vector<std::string> v = {"а", "е", "и", "о", "у", "ы", "я"};
  std::vector<std::string> out;
  for (const auto& a : c) {
    for (const auto& b : v) out.push_back(a + b);
  }
  return out;
}

// Index drawn with probability proportional to 1 / (rank + 1)^s.
class ZipfSampler {
 public:
  ZipfSampler(size_t n, double s) {
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = 1.0 / std::pow(static_cast<double>(i + 1), s);
    dist_ = std::discrete_distribution<size_t>(w.begin(), w.end());
  }
  size_t operator()(std::mt19937_64& gen) { return dist_(gen); }

 private:
  std::discrete_distribution<size_t> dist_;
};

inline corpus::Corpus MakeFixture(const FixtureSpec& spec) {
  std::mt19937_64 gen(spec.seed);
  const auto syl = FixtureSyllables();
  std::uniform_int_distribution<size_t> pick(0, syl.size() - 1);
  std::uniform_int_distribution<int> syllables(1, 3);

  std::set<std::string> seen;
  std::vector<std::string> stems;
  while (stems.size() < spec.stems) {
    std::string s;
    for (int i = syllables(gen); i >= 0; --i) s += syl[pick(gen)];
    if (seen.insert(s).second) stems.push_back(s);
  }
  const std::vector<std::string> suffixes = {
      "",    "а",   "у",   "ом",  "ами", "ах",   "ов",  "ей",  "ой",  "ую",
      "ими", "ого", "ему", "ать", "ала", "али",  "ет",  "ют",  "ешь", "ите",
      "ость", "ство", "ник", "ка", "ки",  "ике", "ному", "ные", "ная", "ное"};
  const std::vector<std::string> prefixes = {"", "", "", "", "пере", "под", "за", "вы", "при"};

  ZipfSampler stem_draw(stems.size(), spec.zipf_exponent);
  ZipfSampler suffix_draw(suffixes.size(), 0.8);
  ZipfSampler prefix_draw(prefixes.size(), 0.6);

  std::vector<corpus::Document> docs;
  size_t produced = 0;
  while (produced < spec.tokens) {
    corpus::Document d;
    d.id = "fx" + std::to_string(100000 + docs.size());
    d.source = "synthetic";
    d.language = "ru";
    const size_t n = std::min(spec.words_per_doc, spec.tokens - produced);
    for (size_t w = 0; w < n; ++w) {
      if (w > 0) d.text += ' ';
      d.text += prefixes[prefix_draw(gen)] + stems[stem_draw(gen)] + suffixes[suffix_draw(gen)];
    }
    produced += n;
    docs.push_back(std::move(d));
  }
  return corpus::Corpus(std::move(docs));
}

}  // namespace toklab::testing

#endif  // TOKLAB_TESTS_FIXTURE_HPP_
