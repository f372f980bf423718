// Copyright 2026 The rulegrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RULEGRID_TOOLS_CLI_HPP_
#define RULEGRID_TOOLS_CLI_HPP_

#include <iosfwd>

namespace rulegrid::cli {

// Stable exit codes.
enum ExitCode {
  kOk = 0,
  kNegative = 1,  // UNSOLVABLE, INVALID
  kUsage = 2,     // bad flags, unknown family, unreadable input
  kLimit = 3,     // search budget exceeded
  kAuth = 4,      // missing or rejected credentials
  kFailure = 5,   // anything else
};

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace rulegrid::cli

#endif  // RULEGRID_TOOLS_CLI_HPP_
