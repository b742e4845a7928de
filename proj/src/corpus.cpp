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

#include <algorithm>

#include "toklab/error.hpp"
#include "toklab/io.hpp"
#include "toklab/rng.hpp"
#include "toklab/text.hpp"

namespace toklab::corpus {
namespace {

const std::vector<std::string>& KnownFields() {
  static const std::vector<std::string> kFields = {
      "id",   "text", "title", "source",        "category",
      "language", "date", "url", "tokens_approx"};
  return kFields;
}

bool IsLanguageCode(std::string_view s) {
  if (s.size() < 2 || s.size() > 3) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string Where(size_t line_number) {
  return line_number ? "line " + std::to_string(line_number) + ": " : "";
}

std::string RequireString(const Json& obj, const char* field,
                          size_t line_number) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    throw Error(ErrorKind::kValidation,
                Where(line_number) + "missing required field '" + field + "'");
  }
  if (!it->is_string()) {
    throw Error(ErrorKind::kValidation, Where(line_number) + "field '" +
                                            field + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const Json& obj, const char* field,
                                          size_t line_number) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorKind::kValidation, Where(line_number) + "field '" +
                                            field + "' must be a string");
  }
  return it->get<std::string>();
}

void ValidateDocument(const Document& doc, size_t line_number) {
  if (doc.id.empty()) {
    throw Error(ErrorKind::kValidation, Where(line_number) + "empty id");
  }
  if (!IsLanguageCode(doc.language)) {
    throw Error(ErrorKind::kValidation,
                Where(line_number) + "language '" + doc.language +
                    "' is not an ISO 639-1/639-3 code");
  }
  if (doc.tokens_approx && *doc.tokens_approx < 0) {
    throw Error(ErrorKind::kValidation,
                Where(line_number) + "tokens_approx must be non-negative");
  }
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents)
    : documents_(std::move(documents)) {
  std::vector<std::string> duplicates;
  for (size_t i = 0; i < documents_.size(); ++i) {
    const Document& doc = documents_[i];
    ValidateDocument(doc, 0);
    auto [it, inserted] = index_.emplace(doc.id, i);
    if (!inserted) duplicates.push_back(doc.id);
    total_tokens_ +=
        static_cast<int64_t>(text::CountWhitespaceTokens(doc.text));
  }
  if (!duplicates.empty()) {
    std::sort(duplicates.begin(), duplicates.end());
    duplicates.erase(std::unique(duplicates.begin(), duplicates.end()),
                     duplicates.end());
    throw Error(ErrorKind::kValidation,
                "duplicate document ids: " + text::Join(duplicates, ", "));
  }
}

const Document* Corpus::Find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &documents_[it->second];
}

Document ParseDocument(std::string_view line, size_t line_number) {
  Json obj;
  try {
    obj = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse,
                Where(line_number) + "invalid JSON: " + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorKind::kParse,
                Where(line_number) + "record is not a JSON object");
  }
  Document doc;
  doc.id = RequireString(obj, "id", line_number);
  try {
    doc.text = text::Nfc(RequireString(obj, "text", line_number));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kParse) throw;
    throw Error(ErrorKind::kParse, Where(line_number) + e.what());
  }
  doc.source = RequireString(obj, "source", line_number);
  doc.language = RequireString(obj, "language", line_number);
  doc.title = OptionalString(obj, "title", line_number);
  if (doc.title) doc.title = text::Nfc(*doc.title);
  doc.category = OptionalString(obj, "category", line_number);
  doc.date = OptionalString(obj, "date", line_number);
  doc.url = OptionalString(obj, "url", line_number);
  if (auto it = obj.find("tokens_approx"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      throw Error(ErrorKind::kValidation,
                  Where(line_number) + "tokens_approx must be an integer");
    }
    doc.tokens_approx = it->get<int64_t>();
  }
  const auto& known = KnownFields();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      doc.extra[it.key()] = it.value();
    }
  }
  ValidateDocument(doc, line_number);
  return doc;
}

Json DocumentToJson(const Document& doc) {
  Json j = Json::object();
  j["id"] = doc.id;
  j["text"] = doc.text;
  if (doc.title) j["title"] = *doc.title;
  j["source"] = doc.source;
  if (doc.category) j["category"] = *doc.category;
  j["language"] = doc.language;
  if (doc.date) j["date"] = *doc.date;
  if (doc.url) j["url"] = *doc.url;
  if (doc.tokens_approx) j["tokens_approx"] = *doc.tokens_approx;
  for (auto it = doc.extra.begin(); it != doc.extra.end(); ++it) {
    j[it.key()] = it.value();
  }
  return j;
}

Corpus ParseCorpus(std::string_view jsonl) {
  std::vector<Document> docs;
  std::map<std::string, size_t> first_line;
  std::vector<std::string> duplicates;
  size_t line_number = 0;
  size_t pos = 0;
  while (pos <= jsonl.size()) {
    size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const bool blank = std::all_of(line.begin(), line.end(), [](char c) {
      return c == ' ' || c == '\t';
    });
    if (!blank) {
      Document doc = ParseDocument(line, line_number);
      if (!first_line.emplace(doc.id, line_number).second) {
        duplicates.push_back(doc.id + " (line " + std::to_string(line_number) +
                             ")");
      }
      docs.push_back(std::move(doc));
    }
    if (end == jsonl.size()) break;
    pos = end + 1;
  }
  if (!duplicates.empty()) {
    throw Error(ErrorKind::kValidation,
                "duplicate document ids: " + text::Join(duplicates, ", "));
  }
  return Corpus(std::move(docs));
}

Corpus LoadCorpus(const std::string& path) {
  return ParseCorpus(io::ReadFile(path));
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const Document& doc : corpus.documents()) {
    out += DocumentToJson(doc).dump();
    out += '\n';
  }
  return out;
}

void SaveCorpus(const Corpus& corpus, const std::string& path) {
  io::WriteFile(path, SerializeCorpus(corpus));
}

Split SplitIds(std::vector<std::string> ids, const SplitSpec& spec) {
  if (ids.empty()) throw Error(ErrorKind::kInvalidArgument, "empty corpus");
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "test_fraction must lie strictly between 0 and 1");
  }
  std::sort(ids.begin(), ids.end());
  SplitMix64 rng(spec.seed);
  FisherYates(std::span<std::string>(ids), rng);
  const size_t n_test =
      std::min(ids.size(), CeilFraction(spec.test_fraction, ids.size()));
  Split split;
  split.test_ids.assign(ids.begin(), ids.begin() + n_test);
  split.train_ids.assign(ids.begin() + n_test, ids.end());
  return split;
}

Split SplitCorpus(const Corpus& corpus, const SplitSpec& spec) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const Document& d : corpus.documents()) ids.push_back(d.id);
  return SplitIds(std::move(ids), spec);
}

std::set<std::string> WhitespaceVocabulary(
    const Corpus& corpus, const std::vector<std::string>& ids) {
  std::set<std::string> vocab;
  for (const std::string& id : ids) {
    const Document* doc = corpus.Find(id);
    if (!doc) throw Error(ErrorKind::kNotFound, "unknown document id: " + id);
    for (auto& t : text::SplitWhitespace(doc->text)) vocab.insert(std::move(t));
  }
  return vocab;
}

Corpus Select(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::vector<Document> docs;
  docs.reserve(ids.size());
  for (const std::string& id : ids) {
    const Document* doc = corpus.Find(id);
    if (!doc) throw Error(ErrorKind::kNotFound, "unknown document id: " + id);
    docs.push_back(*doc);
  }
  return Corpus(std::move(docs));
}

SplitReport VerifySplit(const Corpus& corpus,
                        const std::vector<std::string>& train_ids,
                        const std::vector<std::string>& test_ids,
                        const std::set<std::string>& vocab) {
  SplitReport report;
  std::vector<std::string> unknown;
  for (const auto* ids : {&train_ids, &test_ids}) {
    for (const std::string& id : *ids) {
      if (!corpus.Find(id)) unknown.push_back(id);
    }
  }
  if (!unknown.empty()) {
    throw Error(ErrorKind::kNotFound,
                "unknown document ids: " + text::Join(unknown, ", "));
  }

  const std::set<std::string> train_set(train_ids.begin(), train_ids.end());
  const std::set<std::string> test_set(test_ids.begin(), test_ids.end());
  std::set_intersection(train_set.begin(), train_set.end(), test_set.begin(),
                        test_set.end(),
                        std::back_inserter(report.id_intersection));

  std::set<std::string> train_vocab;
  for (const std::string& id : train_set) {
    const Document* doc = corpus.Find(id);
    for (auto& t : text::SplitWhitespace(doc->text)) {
      ++report.train_tokens;
      train_vocab.insert(std::move(t));
    }
  }
  for (const std::string& id : test_set) {
    const Document* doc = corpus.Find(id);
    for (const auto& t : text::SplitWhitespace(doc->text)) {
      ++report.test_tokens;
      if (!vocab.contains(t)) ++report.oov_token_count;
    }
  }
  report.oov_rate = report.test_tokens == 0
                        ? 0.0
                        : static_cast<double>(report.oov_token_count) /
                              static_cast<double>(report.test_tokens);
  const size_t total_docs = train_set.size() + test_set.size();
  report.test_fraction_actual =
      total_docs == 0 ? 0.0
                      : static_cast<double>(test_set.size()) /
                            static_cast<double>(total_docs);

  std::set<std::string> all_vocab;
  for (const Document& doc : corpus.documents()) {
    for (auto& t : text::SplitWhitespace(doc.text)) all_vocab.insert(std::move(t));
  }
  size_t shared = 0;
  for (const std::string& t : train_vocab) shared += all_vocab.contains(t);
  report.vocab_overlap = all_vocab.empty()
                             ? 0.0
                             : static_cast<double>(shared) /
                                   static_cast<double>(all_vocab.size());
  return report;
}

Json SplitToJson(const Split& split, const SplitSpec& spec) {
  Json j = Json::object();
  j["seed"] = spec.seed;
  j["test_fraction"] = spec.test_fraction;
  j["algorithm"] = "sorted-ids/splitmix64/fisher-yates/ceil";
  j["train_ids"] = split.train_ids;
  j["test_ids"] = split.test_ids;
  return j;
}

Split SplitFromJson(const Json& j) {
  Split split;
  try {
    split.train_ids = j.at("train_ids").get<std::vector<std::string>>();
    split.test_ids = j.at("test_ids").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("invalid split file: ") +
                                       e.what());
  }
  return split;
}

Json SplitReportToJson(const SplitReport& r) {
  Json j = Json::object();
  j["valid"] = r.valid();
  j["train_tokens"] = r.train_tokens;
  j["test_tokens"] = r.test_tokens;
  j["test_fraction_actual"] = r.test_fraction_actual;
  j["id_intersection"] = r.id_intersection;
  j["oov_token_count"] = r.oov_token_count;
  j["oov_rate"] = r.oov_rate;
  j["vocab_overlap"] = r.vocab_overlap;
  return j;
}

CorpusStats ComputeStats(const Corpus& corpus) {
  CorpusStats stats;
  stats.documents = static_cast<int64_t>(corpus.size());
  std::set<std::string> unique;
  int64_t title_docs = 0;
  int64_t title_tokens = 0;
  int64_t max_len = 0;
  std::vector<int64_t> lengths;
  lengths.reserve(corpus.size());
  for (const Document& doc : corpus.documents()) {
    auto tokens = text::SplitWhitespace(doc.text);
    const auto len = static_cast<int64_t>(tokens.size());
    lengths.push_back(len);
    max_len = std::max(max_len, len);
    stats.token_total += len;
    for (auto& t : tokens) unique.insert(std::move(t));
    if (doc.title) {
      ++title_docs;
      title_tokens += static_cast<int64_t>(text::CountWhitespaceTokens(*doc.title));
    }
    if (doc.category) {
      LengthSummary& s = stats.per_category[*doc.category];
      if (s.documents == 0) {
        s.min = s.max = len;
      } else {
        s.min = std::min(s.min, len);
        s.max = std::max(s.max, len);
      }
      ++s.documents;
      s.mean += static_cast<double>(len);  // sum until the final pass
    }
  }
  for (auto& [_, s] : stats.per_category) {
    s.mean /= static_cast<double>(s.documents);
  }
  stats.unique_tokens = static_cast<int64_t>(unique.size());
  if (!corpus.empty()) {
    stats.mean_text_length = static_cast<double>(stats.token_total) /
                             static_cast<double>(corpus.size());
  }
  if (title_docs > 0) {
    stats.mean_title_length =
        static_cast<double>(title_tokens) / static_cast<double>(title_docs);
  }
  if (!corpus.empty()) {
    int64_t upper = 1;
    stats.length_histogram.push_back({upper, 0});
    while (upper < max_len) {
      upper *= 2;
      stats.length_histogram.push_back({upper, 0});
    }
    for (int64_t len : lengths) {
      auto it = std::lower_bound(
          stats.length_histogram.begin(), stats.length_histogram.end(), len,
          [](const HistogramBucket& b, int64_t v) { return b.upper < v; });
      ++it->count;
    }
  }
  return stats;
}

Json StatsToJson(const CorpusStats& s) {
  Json j = Json::object();
  j["documents"] = s.documents;
  j["token_total"] = s.token_total;
  j["unique_tokens"] = s.unique_tokens;
  j["mean_text_length"] = s.mean_text_length;
  j["mean_title_length"] =
      s.mean_title_length ? Json(*s.mean_title_length) : Json(nullptr);
  Json cats = Json::object();
  for (const auto& [name, c] : s.per_category) {
    cats[name] = {{"documents", c.documents},
                  {"mean", c.mean},
                  {"min", c.min},
                  {"max", c.max}};
  }
  j["per_category"] = cats;
  Json hist = Json::array();
  for (const auto& b : s.length_histogram) {
    hist.push_back({{"upper", b.upper}, {"count", b.count}});
  }
  j["length_histogram"] = hist;
  return j;
}

Datasheet BuildDatasheet(const Corpus& corpus,
                         const DatasheetOptions& options) {
  Datasheet sheet;
  sheet.name = options.name;
  sheet.version = options.version;
  sheet.document_count = static_cast<int64_t>(corpus.size());
  sheet.token_count = corpus.total_tokens();
  sheet.processing_description = options.processing_description;
  sheet.known_limitations = options.known_limitations;

  std::set<std::string> languages;
  std::map<std::string, std::string> sources;
  std::optional<std::string> min_date, max_date;
  for (const Document& doc : corpus.documents()) {
    languages.insert(doc.language);
    std::string license = "unspecified";
    if (auto it = doc.extra.find("license");
        it != doc.extra.end() && it->is_string()) {
      license = it->get<std::string>();
    }
    auto [src, inserted] = sources.emplace(doc.source, license);
    if (!inserted && src->second == "unspecified") src->second = license;
    if (doc.category) ++sheet.category_distribution[*doc.category];
    if (doc.date && !doc.date->empty()) {
      if (!min_date || *doc.date < *min_date) min_date = *doc.date;
      if (!max_date || *doc.date > *max_date) max_date = *doc.date;
    }
  }
  sheet.languages.assign(languages.begin(), languages.end());
  for (const auto& [name, license] : sources) {
    sheet.sources.push_back({name, license});
  }
  if (min_date) sheet.time_span = std::make_pair(*min_date, *max_date);
  if (sheet.token_count < options.recommended_min_tokens) {
    sheet.known_limitations.push_back(
        "corpus has " + std::to_string(sheet.token_count) +
        " whitespace tokens, below the recommended minimum of " +
        std::to_string(options.recommended_min_tokens));
  }
  return sheet;
}

Json DatasheetToJson(const Datasheet& s) {
  Json j = Json::object();
  j["name"] = s.name;
  j["version"] = s.version;
  j["languages"] = s.languages;
  j["document_count"] = s.document_count;
  j["token_count"] = s.token_count;
  Json sources = Json::array();
  for (const auto& src : s.sources) {
    sources.push_back({{"name", src.name}, {"license", src.license}});
  }
  j["sources"] = sources;
  Json cats = Json::object();
  for (const auto& [k, v] : s.category_distribution) cats[k] = v;
  j["category_distribution"] = cats;
  if (s.time_span) {
    j["time_span"] = {{"min_date", s.time_span->first},
                      {"max_date", s.time_span->second}};
  } else {
    j["time_span"] = nullptr;
  }
  j["processing_description"] = s.processing_description;
  j["known_limitations"] = s.known_limitations;
  return j;
}

}  // namespace toklab::corpus
