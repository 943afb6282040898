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

#ifndef VBD_APP_CLI_H_
#define VBD_APP_CLI_H_

#include <ostream>

namespace vbd::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,     // runtime failure: not found, bad request
  kExitUsage = 2,       // bad command line
  kExitLoadError = 3,   // knowledge base or input file failed to load/parse
  kExitViolations = 4,  // inference succeeded but reported inconsistencies
};

// Entry point of the `vbd` command. Subcommands: load, infer, query,
// metrics, extract, bench, case, serve. Paths default to the VBD_KB,
// VBD_STORE and VBD_ADDR environment variables when flags are absent.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vbd::app

#endif  // VBD_APP_CLI_H_
