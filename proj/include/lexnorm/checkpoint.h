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

#ifndef LEXNORM_CHECKPOINT_H_
#define LEXNORM_CHECKPOINT_H_

// Binary model files.
//
//   "LXNM"                magic
//   u32 version           currently 1
//   u32 model type        1 = siamese encoder, 2 = normalizer
//   u32 n, n x (str key, str value)                config block
//   u32 n, n x (str name, u32 count, count x str)  vocabularies
//   u32 n, n x (str name, u32 rank, rank x u32 dim, f64 data...)  parameters
//
// Integers and floats are little-endian; str is a u32 byte length followed by
// UTF-8 bytes; parameter data is row-major IEEE-754 binary64. Config and
// vocabulary tables are written in key order, parameters in model order.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lexnorm/neural.h"

namespace lexnorm {

inline constexpr uint32_t kCheckpointVersion = 1;

enum class ModelType : uint32_t {
  kSiamese = 1,
  kNormalizer = 2,
};

// Shape plus row-major values.
struct Tensor {
  std::vector<uint32_t> shape;
  std::vector<double> data;

  bool operator==(const Tensor&) const = default;
};

Tensor ToTensor(const nn::Matrix& m);
// Throws DataError naming `name` if the tensor is not rows x cols.
nn::Matrix ToMatrix(const Tensor& t, Eigen::Index rows, Eigen::Index cols,
                    const std::string& name);

struct Checkpoint {
  ModelType type = ModelType::kSiamese;
  std::map<std::string, std::string> config;
  std::map<std::string, std::vector<std::string>> vocabs;
  std::vector<std::pair<std::string, Tensor>> params;

  // Throws DataError when a key is missing.
  const std::string& Config(const std::string& key) const;
  const std::vector<std::string>& Vocab(const std::string& name) const;
  const Tensor& Param(const std::string& name) const;

  bool operator==(const Checkpoint&) const = default;
};

void WriteCheckpoint(std::ostream& out, const Checkpoint& checkpoint);

// Rejects a bad magic, unknown version or model type, truncation, trailing
// bytes, inconsistent shapes and non-finite values (naming the parameter).
Checkpoint ReadCheckpoint(std::istream& in);

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace lexnorm

#endif  // LEXNORM_CHECKPOINT_H_
