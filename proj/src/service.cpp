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

#include "toklab/service.hpp"

#include <algorithm>
#include <filesystem>

#include "toklab/error.hpp"
#include "toklab/io.hpp"
#include "toklab/text.hpp"

namespace toklab::service {
namespace {

namespace fs = std::filesystem;

Response Fail(int status, const std::string& message, Json extra = Json::object()) {
  Json body = {{"error", message}};
  for (auto& [k, v] : extra.items()) body[k] = v;
  return {status, std::move(body)};
}

// Files ending in .json, sorted so load order never matters.
std::vector<fs::path> JsonFiles(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorKind::kIo, "not a directory: " + dir);
  }
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Json> ParseBody(std::string_view body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

}  // namespace

Service Service::Load(const ServiceOptions& options) {
  Service s;
  s.max_text_bytes_ = options.max_text_bytes;
  for (const auto& lang : corruptor::BuiltinLanguages()) {
    s.rules_[lang] = corruptor::BuiltinRules(lang);
  }
  if (!options.models_dir.empty()) {
    for (const auto& p : JsonFiles(options.models_dir)) {
      s.AddModel(p.stem().string(), subword::LoadModel(p.string()));
    }
  }
  if (!options.rules_dir.empty()) {
    for (const auto& p : JsonFiles(options.rules_dir)) {
      s.AddRuleSet(p.stem().string(), corruptor::LoadCorruptionRules(p.string()));
    }
  }
  if (!options.reports_dir.empty()) {
    for (const auto& p : JsonFiles(options.reports_dir)) {
      Json j = io::ReadJson(p.string());
      const std::string id = j.is_object() && j.contains("corpus_id") && j["corpus_id"].is_string()
                                 ? j["corpus_id"].get<std::string>()
                                 : p.stem().string();
      s.AddReport(id, std::move(j));
    }
  }
  return s;
}

void Service::AddModel(const std::string& id, subword::SubwordModel model) {
  models_[id] = std::move(model);
}

void Service::AddRuleSet(const std::string& id, corruptor::CorruptionRuleSet rules) {
  rules_[id] = std::move(rules);
}

void Service::AddReport(const std::string& corpus_id, Json report) {
  reports_[corpus_id] = std::move(report);
}

Json SegmentJson(const subword::SubwordModel& model, std::string_view input) {
  Json tokens = Json::array(), ids = Json::array(), offsets = Json::array(),
       unknown = Json::array(), words = Json::array();
  // Walk characters to find whitespace-delimited words and their character
  // offsets in the original text.
  const auto cps = text::DecodeUtf8(input);
  size_t word_index = 0;
  size_t i = 0;
  while (i < cps.size()) {
    if (text::IsWhitespace(cps[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < cps.size() && !text::IsWhitespace(cps[j])) ++j;
    const std::string word =
        text::EncodeUtf8(std::vector<char32_t>(cps.begin() + static_cast<std::ptrdiff_t>(i),
                                               cps.begin() + static_cast<std::ptrdiff_t>(j)));
    const auto seg = model.EncodeWord(word);
    for (size_t k = 0; k < seg.size(); ++k) {
      tokens.push_back(seg.tokens[k]);
      ids.push_back(seg.ids[k]);
      offsets.push_back({i + seg.offsets[k].first, i + seg.offsets[k].second});
      unknown.push_back(static_cast<bool>(seg.unknown[k]));
      words.push_back(word_index);
    }
    ++word_index;
    i = j;
  }
  return {{"tokens", std::move(tokens)},
          {"ids", std::move(ids)},
          {"offsets", std::move(offsets)},
          {"is_unknown", std::move(unknown)},
          {"word_index", std::move(words)}};
}

Response Service::Models() const {
  Json list = Json::array();
  for (const auto& [id, m] : models_) {
    list.push_back({{"model_id", id},
                    {"algorithm", subword::AlgorithmName(m.algorithm())},
                    {"vocab_size", m.size()}});
  }
  return {200, std::move(list)};
}

Response Service::Segment(std::string_view body) const {
  const auto j = ParseBody(body);
  if (!j || !j->contains("text") || !(*j)["text"].is_string() || !j->contains("model_ids") ||
      !(*j)["model_ids"].is_array()) {
    return Fail(400, "expected {\"text\": string, \"model_ids\": [string]}");
  }
  const std::string input = (*j)["text"].get<std::string>();
  if (input.size() > max_text_bytes_) {
    return Fail(413, "text exceeds " + std::to_string(max_text_bytes_) + " bytes");
  }
  if (!text::IsValidUtf8(input)) return Fail(400, "text is not valid UTF-8");
  Json results = Json::object();
  for (const auto& id_json : (*j)["model_ids"]) {
    if (!id_json.is_string()) return Fail(400, "model_ids must be strings");
    const std::string id = id_json.get<std::string>();
    auto it = models_.find(id);
    if (it == models_.end()) return Fail(404, "unknown model '" + id + "'", {{"model_id", id}});
    results[id] = SegmentJson(it->second, input);
  }
  return {200, {{"text", input}, {"models", std::move(results)}}};
}

Response Service::Corrupt(std::string_view body) const {
  const auto j = ParseBody(body);
  if (!j || !j->contains("text") || !(*j)["text"].is_string() ||
      !j->contains("ruleset_id") || !(*j)["ruleset_id"].is_string()) {
    return Fail(400, "expected {\"text\", \"ruleset_id\", \"ratio\", \"seed\"}");
  }
  if (!j->contains("ratio") || !(*j)["ratio"].is_number()) {
    return Fail(400, "ratio must be a number in (0, 1]");
  }
  const std::string input = (*j)["text"].get<std::string>();
  if (input.size() > max_text_bytes_) {
    return Fail(413, "text exceeds " + std::to_string(max_text_bytes_) + " bytes");
  }
  const std::string id = (*j)["ruleset_id"].get<std::string>();
  auto it = rules_.find(id);
  if (it == rules_.end()) {
    return Fail(404, "unknown ruleset '" + id + "'", {{"ruleset_id", id}});
  }
  uint64_t seed = 0;
  if (j->contains("seed")) {
    if (!(*j)["seed"].is_number_unsigned() && !(*j)["seed"].is_number_integer()) {
      return Fail(400, "seed must be a non-negative integer");
    }
    if ((*j)["seed"].is_number_integer() && (*j)["seed"].get<int64_t>() < 0) {
      return Fail(400, "seed must be a non-negative integer");
    }
    seed = (*j)["seed"].get<uint64_t>();
  }
  try {
    const auto result =
        corruptor::Corrupt(input, it->second, (*j)["ratio"].get<double>(), seed);
    return {200, corruptor::ResultToJson(result)};
  } catch (const Error& e) {
    return Fail(400, e.what());
  }
}

Response Service::Report(const std::string& corpus_id) const {
  auto it = reports_.find(corpus_id);
  if (it == reports_.end()) {
    return Fail(404, "no report for corpus '" + corpus_id + "'", {{"corpus_id", corpus_id}});
  }
  return {200, it->second};
}

Response Service::Healthz() const {
  return {200, {{"status", "ok"}, {"models", models_.size()}, {"rulesets", rules_.size()}}};
}

Response Service::Handle(std::string_view method, std::string_view path,
                         std::string_view body) const {
  constexpr std::string_view kReport = "/report/";
  if (path == "/models") {
    return method == "GET" ? Models() : Fail(405, "use GET");
  }
  if (path == "/segment") {
    return method == "POST" ? Segment(body) : Fail(405, "use POST");
  }
  if (path == "/corrupt") {
    return method == "POST" ? Corrupt(body) : Fail(405, "use POST");
  }
  if (path == "/healthz") {
    return method == "GET" ? Healthz() : Fail(405, "use GET");
  }
  if (path.substr(0, kReport.size()) == kReport && path.size() > kReport.size()) {
    return method == "GET" ? Report(std::string(path.substr(kReport.size())))
                           : Fail(405, "use GET");
  }
  return Fail(404, "no route " + std::string(path));
}

}  // namespace toklab::service
