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

// The HTTP JSON service behind the playground. Handlers are pure functions
// of an immutable Service, so they can be tested without sockets and shared
// across server threads without locks.

#ifndef TOKLAB_SERVICE_HPP_
#define TOKLAB_SERVICE_HPP_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"
#include "toklab/corruptor.hpp"
#include "toklab/subword.hpp"

namespace toklab::service {

using Json = nlohmann::ordered_json;

struct Response {
  int status = 200;
  Json body;
};

struct ServiceOptions {
  std::string models_dir;   // *.json subword models, id = file stem
  std::string rules_dir;    // *.json corruption rule sets, id = file stem
  std::string reports_dir;  // *.json comparison reports, id = corpus_id
  size_t max_text_bytes = 64 * 1024;
};

class Service {
 public:
  Service() = default;
  // Loads every directory that is set; built-in rule sets "ru" and "tg" are
  // always present unless a file of the same id replaces them.
  static Service Load(const ServiceOptions& options);

  void AddModel(const std::string& id, subword::SubwordModel model);
  void AddRuleSet(const std::string& id, corruptor::CorruptionRuleSet rules);
  void AddReport(const std::string& corpus_id, Json report);
  void set_max_text_bytes(size_t n) { max_text_bytes_ = n; }

  const std::map<std::string, subword::SubwordModel>& models() const { return models_; }

  Response Models() const;
  Response Segment(std::string_view body) const;
  Response Corrupt(std::string_view body) const;
  Response Report(const std::string& corpus_id) const;
  Response Healthz() const;

  // Routes GET /models, POST /segment, POST /corrupt, GET /report/{id} and
  // GET /healthz.
  Response Handle(std::string_view method, std::string_view path,
                  std::string_view body) const;

 private:
  std::map<std::string, subword::SubwordModel> models_;
  std::map<std::string, corruptor::CorruptionRuleSet> rules_;
  std::map<std::string, Json> reports_;
  size_t max_text_bytes_ = 64 * 1024;
};

// Segments `text` with `model`: flat token list plus per-token character
// offsets into `text` and the index of the whitespace word each came from.
Json SegmentJson(const subword::SubwordModel& model, std::string_view text);

// An HTTP front for a Service. The Service must outlive the server.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port.
  int Bind(const std::string& host, int port);
  // Serves files under `dir` for GET requests that name an existing file;
  // "/" maps to index.html. Everything else goes to the API.
  void MountStatic(const std::string& dir);
  // Blocks until Stop() is called from another thread.
  void Serve();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Splits "host:port". Throws Error(kInvalidArgument) when malformed.
std::pair<std::string, int> ParseAddress(const std::string& addr);

// Binds `addr` and serves until the process is stopped.
void RunServer(const Service& service, const std::string& addr,
               const std::string& static_dir = "");

}  // namespace toklab::service

#endif  // TOKLAB_SERVICE_HPP_
