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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unordered_set>

#include "toklab/error.hpp"
#include "toklab/io.hpp"
#include "toklab/normalize.hpp"
#include "toklab/parallel.hpp"
#include "toklab/text.hpp"

namespace toklab::metrics {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> SplitComma(std::string_view s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = s.find(',', start);
    std::string part(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    // Trim ASCII spaces around each form.
    const size_t b = part.find_first_not_of(' ');
    const size_t e = part.find_last_not_of(' ');
    out.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

size_t CharsOf(const std::vector<std::string>& tokens) {
  size_t n = 0;
  for (const auto& t : tokens) n += text::CharacterCount(t);
  return n;
}

std::vector<std::string> Texts(const corpus::Corpus& corpus,
                               const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const corpus::Document* d = corpus.Find(id);
    if (d == nullptr) throw Error(ErrorKind::kNotFound, "split id '" + id + "' not in corpus");
    out.push_back(d->text);
  }
  return out;
}

// The first documents of `texts` holding at least `tokens` whitespace
// tokens (or all of them).
std::vector<std::string> TimingSlice(const std::vector<std::string>& texts, size_t tokens,
                                     size_t* counted) {
  std::vector<std::string> slice;
  *counted = 0;
  for (const auto& t : texts) {
    if (*counted >= tokens) break;
    slice.push_back(t);
    *counted += text::CountWhitespaceTokens(t);
  }
  return slice;
}

template <typename Fn>
std::optional<double> MsPerMillion(const std::vector<std::string>& texts,
                                   const CompareOptions& options, Fn&& run) {
  if (!options.measure_time) return std::nullopt;
  size_t tokens = 0;
  const auto slice = TimingSlice(texts, options.timing_tokens, &tokens);
  if (tokens == 0) return std::nullopt;
  volatile size_t sink = 0;
  for (const auto& t : slice) sink = sink + run(t);  // warm
  const auto start = Clock::now();
  for (const auto& t : slice) sink = sink + run(t);
  const double ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return ms * 1e6 / static_cast<double>(tokens);
}

// Metrics shared by every method that emits plain token lists per document.
void FillTokenListMetrics(const std::vector<std::vector<std::string>>& train_tokens,
                          const std::vector<std::vector<std::string>>& test_tokens,
                          const std::vector<std::string>& test_texts, MethodReport& row) {
  std::unordered_set<std::string> vocab;
  for (const auto& doc : train_tokens) vocab.insert(doc.begin(), doc.end());
  row.vocab_size = static_cast<int64_t>(vocab.size());
  std::vector<std::string> heldout;
  for (const auto& doc : test_tokens) heldout.insert(heldout.end(), doc.begin(), doc.end());
  row.oov_rate = OovRate(vocab, heldout);

  size_t word_chars = 0, words = 0, emitted_chars = CharsOf(heldout), ok = 0;
  for (size_t i = 0; i < test_texts.size(); ++i) {
    const auto ws = text::SplitWhitespace(test_texts[i]);
    words += ws.size();
    word_chars += CharsOf(ws);
    if (text::Join(test_tokens[i], " ") == normalize::NormalizeWhitespace(test_texts[i])) ++ok;
  }
  if (emitted_chars > 0) {
    row.char_compression = static_cast<double>(word_chars) / static_cast<double>(emitted_chars);
  }
  if (words > 0) {
    row.token_compression =
        static_cast<double>(heldout.size()) / static_cast<double>(words);
  }
  row.reconstruction_rate =
      test_texts.empty() ? 1.0
                         : static_cast<double>(ok) / static_cast<double>(test_texts.size());
}

TokenMapping SurfaceMapping(const MethodSpec& spec) {
  auto tokenizer = std::make_shared<surface::SurfaceTokenizer>(
      spec.pattern.empty() ? surface::SurfaceTokenizer::Whitespace()
                           : surface::SurfaceTokenizer::FromPattern(spec.pattern));
  if (spec.normalizer == MethodSpec::Normalizer::kStem && !spec.stems) {
    throw Error(ErrorKind::kInvalidArgument, "stem method without a rule table");
  }
  if (spec.normalizer == MethodSpec::Normalizer::kLemma && !spec.lemmas) {
    throw Error(ErrorKind::kInvalidArgument, "lemma method without a lemma map");
  }
  return [tokenizer, spec](std::string_view s) {
    std::vector<std::string> out = tokenizer->Tokenize(text::Nfc(s));
    for (auto& t : out) {
      if (spec.lowercase) t = text::ToLower(t);
      switch (spec.normalizer) {
        case MethodSpec::Normalizer::kNone:
          break;
        case MethodSpec::Normalizer::kStem:
          t = spec.stems->Stem(t);
          break;
        case MethodSpec::Normalizer::kLemma:
          t = spec.lemmas->Lemmatize(t);
          break;
      }
    }
    return out;
  };
}

std::vector<std::vector<std::string>> MapAll(const TokenMapping& f,
                                             const std::vector<std::string>& texts, int threads) {
  std::vector<std::vector<std::string>> out(texts.size());
  ParallelFor(texts.size(), threads, [&](size_t i) { out[i] = f(texts[i]); });
  return out;
}

MethodReport RunSurface(const MethodSpec& spec, const std::vector<std::string>& train,
                        const std::vector<std::string>& test,
                        const std::vector<LexemeNest>& nests, const CompareOptions& options) {
  MethodReport row;
  const TokenMapping f = SurfaceMapping(spec);
  FillTokenListMetrics(MapAll(f, train, options.threads), MapAll(f, test, options.threads),
                       test, row);
  if (!nests.empty()) row.semantic_consistency = SemanticConsistency(f, nests);
  row.ms_per_mtoken = MsPerMillion(test, options, [&](const std::string& t) {
    return f(t).size();
  });
  return row;
}

MethodReport RunSubword(const MethodSpec& spec, const std::vector<std::string>& train,
                        const std::vector<std::string>& test,
                        const std::vector<LexemeNest>& nests, const CompareOptions& options) {
  MethodReport row;
  std::shared_ptr<const subword::SubwordModel> model = spec.model;
  if (!model) {
    subword::TrainConfig cfg = spec.train;
    cfg.threads = options.threads;
    const auto freqs =
        subword::CountWords(train, surface::SurfaceTokenizer::Whitespace(), options.threads);
    model = std::make_shared<subword::SubwordModel>(subword::Train(freqs, cfg));
  }
  row.vocab_size = static_cast<int64_t>(model->size());
  size_t pieces = 0, unknown = 0;
  std::vector<std::string> words;
  for (const auto& t : test) {
    for (auto& w : text::SplitWhitespace(t)) {
      const auto seg = model->EncodeWord(w);
      pieces += seg.size();
      for (bool u : seg.unknown) unknown += u ? 1 : 0;
      words.push_back(std::move(w));
    }
  }
  if (pieces == 0) throw Error(ErrorKind::kInvalidArgument, "test split has no tokens");
  row.oov_rate = static_cast<double>(unknown) / static_cast<double>(pieces);
  row.fragmentation = Fragmentation(*model, words);
  const Compression c = CompressionRatio(*model, test);
  row.char_compression = c.char_ratio;
  row.token_compression = c.token_ratio;
  row.reconstruction_rate = ReconstructionRate(*model, test);
  if (!nests.empty()) {
    row.semantic_consistency = SemanticConsistency(
        [&](std::string_view form) { return model->EncodeWord(form).tokens; }, nests);
  }
  row.ms_per_mtoken = MsPerMillion(test, options, [&](const std::string& t) {
    return model->Encode(t).size();
  });
  return row;
}

MethodReport RunExternal(const MethodSpec& spec, const std::vector<std::string>& train_ids,
                         const std::vector<std::string>& test_ids,
                         const std::vector<std::string>& test) {
  if (!spec.external) throw Error(ErrorKind::kInvalidArgument, "external method without tokens");
  auto lookup = [&](const std::vector<std::string>& ids) {
    std::vector<std::vector<std::string>> out;
    for (const auto& id : ids) {
      auto it = spec.external->find(id);
      if (it == spec.external->end()) {
        throw Error(ErrorKind::kNotFound, "external tokenization lacks document '" + id + "'");
      }
      out.push_back(it->second);
    }
    return out;
  };
  MethodReport row;
  FillTokenListMetrics(lookup(train_ids), lookup(test_ids), test, row);
  return row;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json OptionalNumber(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::vector<LexemeNest> ParseNests(std::string_view tsv) {
  std::vector<LexemeNest> nests;
  for (const auto& row : io::ParseTsv(tsv)) {
    const std::string where = "nest line " + std::to_string(row.line);
    if (row.fields.size() != 2) {
      throw Error(ErrorKind::kParse, where + ": expected lemma<TAB>form1,form2,...");
    }
    LexemeNest nest{text::Nfc(row.fields[0]), {}};
    std::set<std::string> seen;
    for (auto& f : SplitComma(row.fields[1])) {
      if (f.empty()) throw Error(ErrorKind::kParse, where + ": empty form");
      f = text::Nfc(f);
      if (!seen.insert(f).second) {
        throw Error(ErrorKind::kValidation, where + ": duplicate form '" + f + "'");
      }
      nest.forms.push_back(std::move(f));
    }
    nests.push_back(std::move(nest));
  }
  return nests;
}

std::vector<LexemeNest> LoadNests(const std::string& path) {
  return ParseNests(io::ReadFile(path));
}

double NestCompression(const TokenMapping& method, const LexemeNest& nest) {
  if (nest.forms.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "nest '" + nest.lemma + "' has no forms");
  }
  std::set<std::vector<std::string>> outputs;
  for (const auto& f : nest.forms) outputs.insert(method(f));
  return static_cast<double>(outputs.size()) / static_cast<double>(nest.forms.size());
}

double SemanticConsistency(const TokenMapping& method, const std::vector<LexemeNest>& nests) {
  if (nests.empty()) throw Error(ErrorKind::kInvalidArgument, "no lexeme nests");
  double sum = 0.0;
  for (const auto& n : nests) sum += NestCompression(method, n);
  return sum / static_cast<double>(nests.size());
}

double Fragmentation(const subword::SubwordModel& model, const std::vector<std::string>& words) {
  if (words.empty()) throw Error(ErrorKind::kInvalidArgument, "no words to segment");
  size_t pieces = 0;
  for (const auto& w : words) pieces += model.EncodeWord(w).size();
  return static_cast<double>(pieces) / static_cast<double>(words.size());
}

Compression CompressionRatio(const subword::SubwordModel& model,
                             const std::vector<std::string>& texts) {
  size_t words = 0, word_chars = 0, pieces = 0, piece_chars = 0;
  for (const auto& t : texts) {
    for (const auto& w : text::SplitWhitespace(t)) {
      ++words;
      word_chars += text::CharacterCount(w);
      const auto seg = model.EncodeWord(w);
      pieces += seg.size();
      for (size_t k = 0; k < seg.size(); ++k) {
        piece_chars +=
            text::CharacterCount(model.PieceText(seg.ids[k], k == 0, k + 1 == seg.size()));
      }
    }
  }
  if (words == 0) throw Error(ErrorKind::kInvalidArgument, "corpus has no words");
  return {static_cast<double>(word_chars) / static_cast<double>(piece_chars),
          static_cast<double>(pieces) / static_cast<double>(words)};
}

double ReconstructionRate(const subword::SubwordModel& model,
                          const std::vector<std::string>& texts) {
  if (texts.empty()) return 1.0;
  size_t ok = 0;
  for (const auto& t : texts) {
    const std::string norm = normalize::NormalizeWhitespace(t);
    if (model.Decode(model.Encode(norm)) == norm) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(texts.size());
}

std::vector<ZipfPoint> ZipfPoints(const std::map<std::string, int64_t>& freqs) {
  std::vector<std::pair<std::string, int64_t>> ranked;
  for (const auto& [t, c] : freqs) {
    if (c > 0) ranked.emplace_back(t, c);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<ZipfPoint> points;
  points.reserve(ranked.size());
  for (size_t i = 0; i < ranked.size(); ++i) {
    const auto r = static_cast<int64_t>(i + 1);
    points.push_back({r, ranked[i].first, ranked[i].second, std::log(static_cast<double>(r)),
                      std::log(static_cast<double>(ranked[i].second))});
  }
  return points;
}

ZipfFit FitZipf(const std::vector<ZipfPoint>& points) {
  if (points.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "Zipf fit needs at least two token types");
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.log_rank;
    my += p.log_count;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.log_rank - mx) * (p.log_rank - mx);
    sxy += (p.log_rank - mx) * (p.log_count - my);
  }
  ZipfFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (const auto& p : points) {
    const double r = p.log_count - (fit.intercept + fit.slope * p.log_rank);
    sse += r * r;
  }
  fit.rmse = std::sqrt(sse / n);
  fit.points = static_cast<int64_t>(points.size());
  return fit;
}

ZipfFit FitZipf(const std::map<std::string, int64_t>& freqs) {
  return FitZipf(ZipfPoints(freqs));
}

std::string ZipfPointsCsv(const std::vector<ZipfPoint>& points) {
  std::string out = "rank,count,log_rank,log_count\n";
  for (const auto& p : points) {
    out += std::to_string(p.rank) + "," + std::to_string(p.count) + "," +
           FormatDouble(p.log_rank) + "," + FormatDouble(p.log_count) + "\n";
  }
  return out;
}

Json ZipfFitToJson(const ZipfFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"rmse", fit.rmse},
          {"points", fit.points}};
}

std::map<std::string, std::vector<std::string>> ParseExternalTokens(std::string_view jsonl) {
  std::map<std::string, std::vector<std::string>> out;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= jsonl.size()) {
    size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == jsonl.size()) break;
      continue;
    }
    const std::string where = "external tokens line " + std::to_string(line_no);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::kParse, where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("doc_id") || !j["doc_id"].is_string() ||
        !j.contains("tokens") || !j["tokens"].is_array()) {
      throw Error(ErrorKind::kParse, where + ": expected {\"doc_id\", \"tokens\"}");
    }
    std::vector<std::string> tokens;
    for (const auto& t : j["tokens"]) {
      if (!t.is_string()) throw Error(ErrorKind::kParse, where + ": tokens must be strings");
      tokens.push_back(t.get<std::string>());
    }
    if (!out.emplace(j["doc_id"].get<std::string>(), std::move(tokens)).second) {
      throw Error(ErrorKind::kValidation, where + ": duplicate doc_id");
    }
    if (end == jsonl.size()) break;
  }
  return out;
}

std::map<std::string, std::vector<std::string>> LoadExternalTokens(const std::string& path) {
  return ParseExternalTokens(io::ReadFile(path));
}

MethodSpec MethodSpecFromJson(const Json& j, const std::string& base_dir) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
    throw Error(ErrorKind::kValidation, "method needs a name");
  }
  MethodSpec spec;
  spec.name = j["name"].get<std::string>();
  const std::string kind = j.value("kind", "surface");
  auto resolve = [&](const std::string& p) {
    return std::filesystem::path(p).is_absolute() ? p
                                                  : (std::filesystem::path(base_dir) / p).string();
  };
  try {
    if (kind == "surface") {
      spec.kind = MethodSpec::Kind::kSurface;
      spec.pattern = j.value("pattern", "");
      spec.lowercase = j.value("lowercase", false);
      const std::string norm = j.value("normalizer", "none");
      if (norm == "stem") {
        spec.normalizer = MethodSpec::Normalizer::kStem;
        const Json& t = j.at("stem_rules");
        spec.stems = std::make_shared<surface::StemRuleTable>(
            t.is_string() ? surface::LoadStemRules(resolve(t.get<std::string>()))
                          : surface::StemRuleTable::FromJson(t));
      } else if (norm == "lemma") {
        spec.normalizer = MethodSpec::Normalizer::kLemma;
        const Json& m = j.at("lemmas");
        spec.lemmas = std::make_shared<surface::LemmaMap>(
            m.is_string() ? surface::LoadLemmaMap(resolve(m.get<std::string>()))
                          : surface::LemmaMap::FromJson(m));
      } else if (norm != "none") {
        throw Error(ErrorKind::kValidation, "unknown normalizer '" + norm + "'");
      }
    } else if (kind == "subword") {
      spec.kind = MethodSpec::Kind::kSubword;
      if (j.contains("model")) {
        spec.model = std::make_shared<subword::SubwordModel>(
            subword::LoadModel(resolve(j["model"].get<std::string>())));
      } else {
        spec.train = subword::TrainConfigFromJson(j.value("train", Json::object()));
      }
    } else if (kind == "external") {
      spec.kind = MethodSpec::Kind::kExternal;
      spec.external = std::make_shared<std::map<std::string, std::vector<std::string>>>(
          LoadExternalTokens(resolve(j.at("path").get<std::string>())));
    } else {
      throw Error(ErrorKind::kValidation, "unknown method kind '" + kind + "'");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kValidation, "method '" + spec.name + "': " + e.what());
  }
  return spec;
}

ComparisonReport CompareMethods(const std::string& corpus_id, const corpus::Corpus& corpus,
                                const corpus::Split& split,
                                const std::vector<MethodSpec>& methods,
                                const std::vector<LexemeNest>& nests,
                                const CompareOptions& options) {
  const std::set<std::string> train_set(split.train_ids.begin(), split.train_ids.end());
  for (const auto& id : split.test_ids) {
    if (train_set.contains(id)) {
      throw Error(ErrorKind::kLeakage, "document '" + id + "' is in both train and test");
    }
  }
  // Sorted ids make every aggregate independent of corpus line order.
  std::vector<std::string> train_ids(train_set.begin(), train_set.end());
  std::vector<std::string> test_ids = split.test_ids;
  std::sort(test_ids.begin(), test_ids.end());
  const auto train = Texts(corpus, train_ids);
  const auto test = Texts(corpus, test_ids);

  ComparisonReport report;
  report.corpus_id = corpus_id;
  for (const auto& spec : methods) {
    MethodReport row;
    try {
      switch (spec.kind) {
        case MethodSpec::Kind::kSurface:
          row = RunSurface(spec, train, test, nests, options);
          break;
        case MethodSpec::Kind::kSubword:
          row = RunSubword(spec, train, test, nests, options);
          break;
        case MethodSpec::Kind::kExternal:
          row = RunExternal(spec, train_ids, test_ids, test);
          break;
      }
    } catch (const std::exception& e) {
      row = MethodReport{};
      row.error = e.what();
    }
    row.method = spec.name;
    report.rows.push_back(std::move(row));
  }

  std::map<std::string, int64_t> freqs;
  for (const auto& doc : corpus.documents()) {
    for (auto& w : text::SplitWhitespace(doc.text)) ++freqs[std::move(w)];
  }
  report.zipf_points = ZipfPoints(freqs);
  if (report.zipf_points.size() >= 2) report.zipf = FitZipf(report.zipf_points);
  return report;
}

std::string ReportCsv(const std::vector<MethodReport>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  auto num = [](const std::optional<double>& v) { return v ? FormatDouble(*v) : ""; };
  for (const auto& r : rows) {
    out += CsvField(r.method) + ",";
    out += (r.vocab_size ? std::to_string(*r.vocab_size) : "") + ",";
    out += num(r.oov_rate) + "," + num(r.semantic_consistency) + "," + num(r.fragmentation) +
           "," + num(r.char_compression) + "," + num(r.token_compression) + "," +
           num(r.reconstruction_rate) + "," + num(r.ms_per_mtoken) + ",";
    out += r.error ? CsvField(*r.error) : "";
    out += "\n";
  }
  return out;
}

Json MethodReportToJson(const MethodReport& r) {
  Json j = {{"method", r.method}};
  j["vocab_size"] = r.vocab_size ? Json(*r.vocab_size) : Json(nullptr);
  j["oov_rate"] = OptionalNumber(r.oov_rate);
  j["semantic_consistency"] = OptionalNumber(r.semantic_consistency);
  j["fragmentation"] = OptionalNumber(r.fragmentation);
  j["char_compression"] = OptionalNumber(r.char_compression);
  j["token_compression"] = OptionalNumber(r.token_compression);
  j["reconstruction_rate"] = OptionalNumber(r.reconstruction_rate);
  j["ms_per_mtoken"] = OptionalNumber(r.ms_per_mtoken);
  j["error"] = r.error ? Json(*r.error) : Json(nullptr);
  return j;
}

Json ReportToJson(const ComparisonReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) rows.push_back(MethodReportToJson(r));
  Json points = Json::array();
  for (const auto& p : report.zipf_points) {
    points.push_back({{"rank", p.rank},
                      {"token", p.token},
                      {"count", p.count},
                      {"log_rank", p.log_rank},
                      {"log_count", p.log_count}});
  }
  return {{"corpus_id", report.corpus_id},
          {"rows", std::move(rows)},
          {"zipf",
           {{"fit", report.zipf ? ZipfFitToJson(*report.zipf) : Json(nullptr)},
            {"points", std::move(points)}}}};
}

}  // namespace toklab::metrics
