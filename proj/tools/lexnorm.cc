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


#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lexnorm/cli.h"

int main(int argc, char** argv) {
  std::optional<std::string> env_seed;
  if (const char* seed = std::getenv("LEXNORM_SEED")) env_seed = seed;
  const std::vector<std::string> args(argv + 1, argv + argc);
  return lexnorm::RunLexnorm(args, {std::cin, std::cout, std::cerr, env_seed});
}
