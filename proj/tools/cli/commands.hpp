// Copyright 2026 The Boundary Walk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Subcommands of the boundary-walk tool.
//
// Exit codes
//   transform  0 ok, 1 internal error, 2 bad config or input,
//              3 unstopped mass above epsilon (files still written)
//   verify     0 all checks pass, 1 internal error, 2 bad config or unknown
//              bundle, 4 some check failed, 5 some check inconclusive
//   compare    0 TV <= tolerance, 1 TV > tolerance, 2 unreadable tables or
//              group mismatch
//   entropy    0 ok, 1 internal error, 2 bad config or support cap exceeded
//
// Output directory: --out, else the config's "output", else
// $BOUNDARY_WALK_OUT, else the working directory.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace boundary_walk::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitExceeds = 1,
  kExitBadInput = 2,
  kExitTruncated = 3,
  kExitCheckFailed = 4,
  kExitInconclusive = 5,
};

struct RunOptions {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<std::string> bundle;
};

int cmd_transform(const RunOptions& options, std::ostream& out,
                  std::ostream& err);
int cmd_verify(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_entropy(const RunOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_compare(const std::string& a, const std::string& b,
                const std::string& tolerance, std::ostream& out,
                std::ostream& err);

// Full command line, argv[0] included.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace boundary_walk::cli
