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

// Comparison metrics for tokenization methods and the harness that runs
// them over a train/test split.

#ifndef TOKLAB_METRICS_HPP_
#define TOKLAB_METRICS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "toklab/corpus.hpp"
#include "toklab/error.hpp"
#include "toklab/subword.hpp"
#include "toklab/surface.hpp"

namespace toklab::metrics {

using Json = nlohmann::ordered_json;

struct LexemeNest {
  std::string lemma;
  std::vector<std::string> forms;  // non-empty, distinct
};

// TSV rows `lemma<TAB>form1,form2,...`; '#' lines are comments.
std::vector<LexemeNest> ParseNests(std::string_view tsv);
std::vector<LexemeNest> LoadNests(const std::string& path);

// Maps one word form to the method's output tokens.
using TokenMapping = std::function<std::vector<std::string>(std::string_view)>;

// |distinct outputs over the forms| / |forms|, comparing whole token tuples.
double NestCompression(const TokenMapping& method, const LexemeNest& nest);
// Unweighted mean of NestCompression over `nests`.
double SemanticConsistency(const TokenMapping& method, const std::vector<LexemeNest>& nests);

// Fraction of token occurrences in `heldout` that are not in `vocab`.
template <typename Set>
double OovRate(const Set& vocab, const std::vector<std::string>& heldout);

// Mean number of pieces per word occurrence.
double Fragmentation(const subword::SubwordModel& model, const std::vector<std::string>& words);

struct Compression {
  double char_ratio = 0.0;   // original word characters / emitted piece characters
  double token_ratio = 0.0;  // pieces / whitespace tokens
};

// Markers are stripped from emitted pieces; an unknown piece counts as the
// literal <UNK>.
Compression CompressionRatio(const subword::SubwordModel& model,
                             const std::vector<std::string>& texts);

// Fraction of texts for which decode(encode(t)) == t after whitespace
// normalization. An empty list gives 1.
double ReconstructionRate(const subword::SubwordModel& model,
                          const std::vector<std::string>& texts);

struct ZipfPoint {
  int64_t rank = 0;
  std::string token;
  int64_t count = 0;
  double log_rank = 0.0;  // natural logarithms
  double log_count = 0.0;
};

struct ZipfFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rmse = 0.0;
  int64_t points = 0;
};

// Ranks by descending count, ties by token; zero counts are dropped.
std::vector<ZipfPoint> ZipfPoints(const std::map<std::string, int64_t>& freqs);
// OLS of log(count) on log(rank). Throws Error(kInvalidArgument) with
// fewer than two points.
ZipfFit FitZipf(const std::map<std::string, int64_t>& freqs);
ZipfFit FitZipf(const std::vector<ZipfPoint>& points);
std::string ZipfPointsCsv(const std::vector<ZipfPoint>& points);
Json ZipfFitToJson(const ZipfFit& fit);

struct MethodSpec {
  enum class Kind { kSurface, kSubword, kExternal };
  enum class Normalizer { kNone, kStem, kLemma };

  std::string name;
  Kind kind = Kind::kSurface;

  // kSurface
  std::string pattern;  // empty: whitespace tokenization
  Normalizer normalizer = Normalizer::kNone;
  bool lowercase = false;
  std::shared_ptr<const surface::StemRuleTable> stems;
  std::shared_ptr<const surface::LemmaMap> lemmas;

  // kSubword: trained on the train split unless `model` is given.
  subword::TrainConfig train;
  std::shared_ptr<const subword::SubwordModel> model;

  // kExternal: doc_id -> tokens
  std::shared_ptr<const std::map<std::string, std::vector<std::string>>> external;
};

// JSONL records {"doc_id": ..., "tokens": [...]}.
std::map<std::string, std::vector<std::string>> ParseExternalTokens(std::string_view jsonl);
std::map<std::string, std::vector<std::string>> LoadExternalTokens(const std::string& path);

// {"name", "kind": "surface"|"subword"|"external", ...}; file paths in the
// spec are resolved relative to `base_dir`.
MethodSpec MethodSpecFromJson(const Json& j, const std::string& base_dir = ".");

struct MethodReport {
  std::string method;
  std::optional<int64_t> vocab_size;
  std::optional<double> oov_rate;
  std::optional<double> semantic_consistency;
  std::optional<double> fragmentation;
  std::optional<double> char_compression;
  std::optional<double> token_compression;
  std::optional<double> reconstruction_rate;
  std::optional<double> ms_per_mtoken;
  std::optional<std::string> error;
};

struct CompareOptions {
  // Whitespace tokens timed per method after one warm run.
  size_t timing_tokens = 20000;
  bool measure_time = true;
  int threads = 1;
};

struct ComparisonReport {
  std::string corpus_id;
  std::vector<MethodReport> rows;
  std::optional<ZipfFit> zipf;  // absent with fewer than two token types
  std::vector<ZipfPoint> zipf_points;
};

// Vocabularies and training use the train ids, everything else the test
// ids. A failing method yields a row with only `error` set. Throws
// Error(kLeakage) when the split ids overlap.
ComparisonReport CompareMethods(const std::string& corpus_id, const corpus::Corpus& corpus,
                                const corpus::Split& split,
                                const std::vector<MethodSpec>& methods,
                                const std::vector<LexemeNest>& nests,
                                const CompareOptions& options = {});

inline constexpr const char* kCsvHeader =
    "method,vocab_size,oov_rate,semantic_consistency,fragmentation,char_compression,"
    "token_compression,reconstruction_rate,ms_per_mtoken,error";

std::string ReportCsv(const std::vector<MethodReport>& rows);
Json MethodReportToJson(const MethodReport& row);
Json ReportToJson(const ComparisonReport& report);

template <typename Set>
double OovRate(const Set& vocab, const std::vector<std::string>& heldout) {
  if (heldout.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "heldout sample is empty");
  }
  size_t missing = 0;
  for (const auto& t : heldout) {
    if (!vocab.contains(t)) ++missing;
  }
  return static_cast<double>(missing) / static_cast<double>(heldout.size());
}

}  // namespace toklab::metrics

#endif  // TOKLAB_METRICS_HPP_
