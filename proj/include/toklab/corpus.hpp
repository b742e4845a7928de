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

// JSONL corpora: loading, seeded splitting, leakage verification,
// descriptive statistics and datasheets.

#ifndef TOKLAB_CORPUS_HPP_
#define TOKLAB_CORPUS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace toklab::corpus {

using Json = nlohmann::ordered_json;

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> title;
  std::string source;
  std::optional<std::string> category;
  std::string language;
  std::optional<std::string> date;
  std::optional<std::string> url;
  std::optional<int64_t> tokens_approx;
  // Fields not listed above, kept in their original order.
  Json extra = Json::object();

  bool operator==(const Document&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  // Validates every document and rejects duplicate ids.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  int64_t total_tokens() const { return total_tokens_; }

  // nullptr when absent.
  const Document* Find(std::string_view id) const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Document> documents_;
  std::map<std::string, size_t, std::less<>> index_;
  int64_t total_tokens_ = 0;
};

// Parses one JSONL record. `line_number` is only used in error messages.
Document ParseDocument(std::string_view line, size_t line_number = 0);
Json DocumentToJson(const Document& doc);

Corpus LoadCorpus(const std::string& path);
Corpus ParseCorpus(std::string_view jsonl);
std::string SerializeCorpus(const Corpus& corpus);
void SaveCorpus(const Corpus& corpus, const std::string& path);

struct SplitSpec {
  uint64_t seed = 0;
  double test_fraction = 0.2;
};

struct Split {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

// Sorts ids, shuffles them with splitmix64-driven Fisher-Yates and takes the
// first ceil(test_fraction * N) positions as the test set. Both outputs keep
// the permuted order.
Split SplitCorpus(const Corpus& corpus, const SplitSpec& spec);
Split SplitIds(std::vector<std::string> ids, const SplitSpec& spec);

struct SplitReport {
  int64_t train_tokens = 0;
  int64_t test_tokens = 0;
  double test_fraction_actual = 0.0;
  std::vector<std::string> id_intersection;
  int64_t oov_token_count = 0;
  double oov_rate = 0.0;
  double vocab_overlap = 0.0;

  bool valid() const { return id_intersection.empty(); }
};

SplitReport VerifySplit(const Corpus& corpus,
                        const std::vector<std::string>& train_ids,
                        const std::vector<std::string>& test_ids,
                        const std::set<std::string>& vocab);

// Whitespace-token vocabulary of the listed documents.
std::set<std::string> WhitespaceVocabulary(const Corpus& corpus,
                                           const std::vector<std::string>& ids);

// Subset of `corpus` in the order of `ids`.
Corpus Select(const Corpus& corpus, const std::vector<std::string>& ids);

Json SplitToJson(const Split& split, const SplitSpec& spec);
Split SplitFromJson(const Json& j);
Json SplitReportToJson(const SplitReport& report);

struct LengthSummary {
  int64_t documents = 0;
  double mean = 0.0;
  int64_t min = 0;
  int64_t max = 0;
};

struct HistogramBucket {
  int64_t upper = 0;  // inclusive; buckets are (previous upper, upper]
  int64_t count = 0;
};

struct CorpusStats {
  int64_t documents = 0;
  int64_t token_total = 0;
  int64_t unique_tokens = 0;
  double mean_text_length = 0.0;
  std::optional<double> mean_title_length;
  std::map<std::string, LengthSummary> per_category;
  std::vector<HistogramBucket> length_histogram;
};

CorpusStats ComputeStats(const Corpus& corpus);
Json StatsToJson(const CorpusStats& stats);

struct SourceInfo {
  std::string name;
  std::string license;
};

struct DatasheetOptions {
  std::string name = "corpus";
  std::string version = "1.0";
  std::string processing_description;
  std::vector<std::string> known_limitations;
  // Corpora smaller than this get a limitation note, not a rejection.
  int64_t recommended_min_tokens = 5'000'000;
};

struct Datasheet {
  std::string name;
  std::string version;
  std::vector<std::string> languages;
  int64_t document_count = 0;
  int64_t token_count = 0;
  std::vector<SourceInfo> sources;
  std::map<std::string, int64_t> category_distribution;
  std::optional<std::pair<std::string, std::string>> time_span;
  std::string processing_description;
  std::vector<std::string> known_limitations;
};

Datasheet BuildDatasheet(const Corpus& corpus, const DatasheetOptions& options);
Json DatasheetToJson(const Datasheet& sheet);

}  // namespace toklab::corpus

#endif  // TOKLAB_CORPUS_HPP_
