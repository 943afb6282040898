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

#ifndef VBD_APP_SERVER_H_
#define VBD_APP_SERVER_H_

#include <memory>
#include <string>

#include "vbd/app/api.h"

namespace vbd::app {

// "host:port" -> (host, port). Throws std::invalid_argument.
std::pair<std::string, int> ParseAddress(const std::string& address);

// HTTP/1.1 front end for Api. Every route answers JSON and carries permissive
// CORS headers so a browser worksheet served elsewhere can call it.
class Server {
 public:
  explicit Server(Api& api);
  ~Server();

  // Binds and serves until Stop(); returns false if binding fails.
  bool Listen(const std::string& host, int port);
  // Binds to an ephemeral port and returns it (-1 on failure). Call
  // ListenAfterBind afterwards, usually on another thread.
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();
  bool IsRunning() const;
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vbd::app

#endif  // VBD_APP_SERVER_H_
