// Copyright 2026 The VBD Authors
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

#include "vbd/app/server.h"

#include <stdexcept>

#include "httplib.h"

namespace vbd::app {

struct Server::Impl {
  explicit Impl(Api& a) : api(a) {}
  Api& api;
  httplib::Server http;
};

namespace {

void Forward(Api& api, const std::string& method, const httplib::Request& req,
             httplib::Response& res) {
  ApiRequest request;
  request.method = method;
  request.path = req.path;
  for (const auto& [key, value] : req.params) request.params.emplace(key, value);
  request.body = req.body;
  ApiResponse response = api.Handle(request);
  res.status = response.status;
  res.set_content(response.body.dump(), "application/json");
}

}  // namespace

std::pair<std::string, int> ParseAddress(const std::string& address) {
  const std::size_t colon = address.rfind(':');
  if (colon == std::string::npos || colon + 1 == address.size()) {
    throw std::invalid_argument("address must be host:port, got '" + address + "'");
  }
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(address.substr(colon + 1), &used);
    if (used != address.size() - colon - 1) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad port in '" + address + "'");
  }
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
  std::string host = address.substr(0, colon);
  return {host.empty() ? "0.0.0.0" : host, port};
}

Server::Server(Api& api) : impl_(std::make_unique<Impl>(api)) {
  httplib::Server& http = impl_->http;
  Api& a = impl_->api;
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Headers", "Content-Type"},
                            {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  http.Get(".*", [&a](const httplib::Request& req, httplib::Response& res) {
    Forward(a, "GET", req, res);
  });
  http.Post(".*", [&a](const httplib::Request& req, httplib::Response& res) {
    Forward(a, "POST", req, res);
  });
  http.Delete(".*", [&a](const httplib::Request& req, httplib::Response& res) {
    Forward(a, "DELETE", req, res);
  });
  http.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
}

Server::~Server() { Stop(); }

bool Server::Listen(const std::string& host, int port) {
  return impl_->http.listen(host, port);
}

int Server::BindToAnyPort(const std::string& host) {
  return impl_->http.bind_to_any_port(host);
}

bool Server::ListenAfterBind() { return impl_->http.listen_after_bind(); }

void Server::Stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool Server::IsRunning() const { return impl_->http.is_running(); }

void Server::WaitUntilReady() const { impl_->http.wait_until_ready(); }

}  // namespace vbd::app
