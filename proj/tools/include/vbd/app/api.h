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

#ifndef VBD_APP_API_H_
#define VBD_APP_API_H_

#include <map>
#include <string>
#include <string_view>

#include "vbd/app/codec.h"
#include "vbd/dss.h"
#include "vbd/kb.h"

namespace vbd::app {

// The single error shape of the service: {code, message, detail}.
class ApiError : public std::exception {
 public:
  ApiError(int status, std::string code, std::string message,
           json detail = nullptr)
      : status_(status),
        code_(std::move(code)),
        message_(std::move(message)),
        detail_(std::move(detail)) {}

  const char* what() const noexcept override { return message_.c_str(); }
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const std::string& message() const { return message_; }
  const json& detail() const { return detail_; }
  json ToJson() const;

 private:
  int status_;
  std::string code_;
  std::string message_;
  json detail_;
};

// Maps a library exception onto its ApiError (status and stable code).
ApiError ToApiError(const std::exception& e);

struct ApiRequest {
  std::string method;  // GET, POST, DELETE
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  json body;
};

// Transport-independent request router. The HTTP server and the tests both
// go through Handle, which never throws.
class Api {
 public:
  Api(const KnowledgeBase& kb, CaseStore& store);

  // Named graphs available to POST /query.
  void AddDataset(const std::string& name, Graph graph);
  const std::map<std::string, Graph>& datasets() const { return datasets_; }

  ApiResponse Handle(const ApiRequest& request);

 private:
  json Dispatch(const ApiRequest& request, int* status);
  json Health() const;
  json KbSummary() const;
  json CreateCase(const json& body, int* status);
  json GetCase(const std::string& id);
  json AddAssertion(const std::string& id, const json& body, int* status);
  json RetractAssertion(const std::string& id, std::string_view seq);
  json Infer(const std::string& id);
  json Explain(const std::string& id, const std::map<std::string, std::string>& params);
  json RunQuery(const json& body);
  json Metrics() const;
  json Extract(const json& body) const;
  Term RequireName(const std::string& text, std::string_view field) const;

  const KnowledgeBase& kb_;
  CaseStore& store_;
  std::map<std::string, Graph> datasets_;
};

// "ontology", every fixture as "fixture/<stem>" and every <kb>/bench/*.ttl
// as its stem.
std::map<std::string, Graph> DefaultDatasets(const KnowledgeBase& kb);

}  // namespace vbd::app

#endif  // VBD_APP_API_H_
