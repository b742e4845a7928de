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

#include <httplib.h>

#include <iostream>

#include "toklab/error.hpp"
#include "toklab/service.hpp"

namespace toklab::service {

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  auto route = [&service](const httplib::Request& req, httplib::Response& res) {
    const Response r = service.Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  server.Get(".*", route);
  server.Post(".*", route);
}

HttpServer::~HttpServer() = default;

int HttpServer::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorKind::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::MountStatic(const std::string& dir) {
  if (!impl_->server.set_mount_point("/", dir)) {
    throw Error(ErrorKind::kIo, "cannot serve static files from " + dir);
  }
}

void HttpServer::Serve() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() { impl_->server.stop(); }

std::pair<std::string, int> ParseAddress(const std::string& addr) {
  const size_t colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw Error(ErrorKind::kInvalidArgument, "address must be host:port, got '" + addr + "'");
  }
  const std::string port = addr.substr(colon + 1);
  if (port.empty() || port.size() > 5 ||
      port.find_first_not_of("0123456789") != std::string::npos || std::stoi(port) > 65535) {
    throw Error(ErrorKind::kInvalidArgument, "bad port in '" + addr + "'");
  }
  return {addr.substr(0, colon), std::stoi(port)};
}

void RunServer(const Service& service, const std::string& addr,
               const std::string& static_dir) {
  const auto [host, port] = ParseAddress(addr);
  HttpServer server(service);
  if (!static_dir.empty()) server.MountStatic(static_dir);
  const int bound = server.Bind(host, port);
  std::cerr << "listening on " << host << ":" << bound << "\n";
  server.Serve();
}

}  // namespace toklab::service
