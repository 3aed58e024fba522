// Copyright 2026 The Lexnorm Authors.
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


#ifndef LEXNORM_CLI_H_
#define LEXNORM_CLI_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lexnorm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct CliStreams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  // Value of LEXNORM_SEED, if set.
  std::optional<std::string> env_seed;
};

// Runs the lexnorm command line. `args` excludes the program name.
int RunLexnorm(const std::vector<std::string>& args, CliStreams io);

}  // namespace lexnorm

#endif  // LEXNORM_CLI_H_
