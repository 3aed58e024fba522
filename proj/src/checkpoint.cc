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

#include "lexnorm/checkpoint.h"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "lexnorm/error.h"

namespace lexnorm {
namespace {

constexpr std::array<char, 4> kMagic = {'L', 'X', 'N', 'M'};
// Guards allocations against corrupt length fields.
constexpr uint32_t kMaxStringBytes = 1u << 24;
constexpr uint64_t kMaxTensorElements = 1ull << 31;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void U32(uint32_t v) {
    std::array<char, 4> bytes;
    for (int k = 0; k < 4; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
    out_.write(bytes.data(), bytes.size());
  }
  void U64(uint64_t v) {
    std::array<char, 8> bytes;
    for (int k = 0; k < 8; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
    out_.write(bytes.data(), bytes.size());
  }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Str(const std::string& s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void Bytes(char* dst, size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n) {
      throw DataError(fmt::format("checkpoint truncated while reading {}", what));
    }
  }
  uint32_t U32(const char* what) {
    std::array<unsigned char, 4> b;
    Bytes(reinterpret_cast<char*>(b.data()), b.size(), what);
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<uint32_t>(b[k]) << (8 * k);
    return v;
  }
  uint64_t U64(const char* what) {
    std::array<unsigned char, 8> b;
    Bytes(reinterpret_cast<char*>(b.data()), b.size(), what);
    uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<uint64_t>(b[k]) << (8 * k);
    return v;
  }
  double F64(const char* what) { return std::bit_cast<double>(U64(what)); }
  std::string Str(const char* what) {
    const uint32_t n = U32(what);
    if (n > kMaxStringBytes) throw DataError(fmt::format("checkpoint: oversized {}", what));
    std::string s(n, '\0');
    Bytes(s.data(), n, what);
    return s;
  }
  bool AtEnd() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
};

}  // namespace

Tensor ToTensor(const nn::Matrix& m) {
  Tensor t;
  t.shape = {static_cast<uint32_t>(m.rows()), static_cast<uint32_t>(m.cols())};
  t.data.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.data.push_back(m(r, c));
  }
  return t;
}

nn::Matrix ToMatrix(const Tensor& t, Eigen::Index rows, Eigen::Index cols,
                    const std::string& name) {
  if (t.shape.size() != 2 || t.shape[0] != rows || t.shape[1] != cols) {
    std::string got;
    for (uint32_t d : t.shape) got += (got.empty() ? "" : "x") + std::to_string(d);
    throw DataError(
        fmt::format("checkpoint: parameter '{}' has shape {}, expected {}x{}", name, got, rows, cols));
  }
  nn::Matrix m(rows, cols);
  size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = t.data[k++];
  }
  return m;
}

const std::string& Checkpoint::Config(const std::string& key) const {
  const auto it = config.find(key);
  if (it == config.end()) throw DataError("checkpoint: missing config key '" + key + "'");
  return it->second;
}

const std::vector<std::string>& Checkpoint::Vocab(const std::string& name) const {
  const auto it = vocabs.find(name);
  if (it == vocabs.end()) throw DataError("checkpoint: missing vocabulary '" + name + "'");
  return it->second;
}

const Tensor& Checkpoint::Param(const std::string& name) const {
  for (const auto& [key, tensor] : params) {
    if (key == name) return tensor;
  }
  throw DataError("checkpoint: missing parameter '" + name + "'");
}

void WriteCheckpoint(std::ostream& out, const Checkpoint& checkpoint) {
  Writer w(out);
  out.write(kMagic.data(), kMagic.size());
  w.U32(kCheckpointVersion);
  w.U32(static_cast<uint32_t>(checkpoint.type));
  w.U32(static_cast<uint32_t>(checkpoint.config.size()));
  for (const auto& [key, value] : checkpoint.config) {
    w.Str(key);
    w.Str(value);
  }
  w.U32(static_cast<uint32_t>(checkpoint.vocabs.size()));
  for (const auto& [name, entries] : checkpoint.vocabs) {
    w.Str(name);
    w.U32(static_cast<uint32_t>(entries.size()));
    for (const std::string& entry : entries) w.Str(entry);
  }
  w.U32(static_cast<uint32_t>(checkpoint.params.size()));
  for (const auto& [name, tensor] : checkpoint.params) {
    w.Str(name);
    w.U32(static_cast<uint32_t>(tensor.shape.size()));
    for (uint32_t d : tensor.shape) w.U32(d);
    for (double v : tensor.data) w.F64(v);
  }
  if (!out) throw DataError("checkpoint: write failed");
}

Checkpoint ReadCheckpoint(std::istream& in) {
  Reader r(in);
  std::array<char, 4> magic;
  r.Bytes(magic.data(), magic.size(), "magic");
  if (magic != kMagic) throw DataError("checkpoint: bad magic (not a lexnorm model file)");
  const uint32_t version = r.U32("version");
  if (version != kCheckpointVersion) {
    throw DataError(fmt::format("checkpoint: unsupported format version {}", version));
  }
  Checkpoint checkpoint;
  const uint32_t type = r.U32("model type");
  if (type != static_cast<uint32_t>(ModelType::kSiamese) &&
      type != static_cast<uint32_t>(ModelType::kNormalizer)) {
    throw DataError(fmt::format("checkpoint: unknown model type {}", type));
  }
  checkpoint.type = static_cast<ModelType>(type);

  const uint32_t n_config = r.U32("config count");
  for (uint32_t k = 0; k < n_config; ++k) {
    std::string key = r.Str("config key");
    checkpoint.config[std::move(key)] = r.Str("config value");
  }
  const uint32_t n_vocabs = r.U32("vocabulary count");
  for (uint32_t k = 0; k < n_vocabs; ++k) {
    std::string name = r.Str("vocabulary name");
    const uint32_t count = r.U32("vocabulary size");
    std::vector<std::string> entries;
    for (uint32_t e = 0; e < count; ++e) entries.push_back(r.Str("vocabulary entry"));
    checkpoint.vocabs[std::move(name)] = std::move(entries);
  }
  const uint32_t n_params = r.U32("parameter count");
  for (uint32_t k = 0; k < n_params; ++k) {
    std::string name = r.Str("parameter name");
    Tensor tensor;
    const uint32_t rank = r.U32("parameter rank");
    if (rank == 0 || rank > 8) {
      throw DataError(fmt::format("checkpoint: parameter '{}' has rank {}", name, rank));
    }
    uint64_t elements = 1;
    for (uint32_t d = 0; d < rank; ++d) {
      const uint32_t dim = r.U32("parameter shape");
      if (dim == 0) throw DataError(fmt::format("checkpoint: parameter '{}' has a zero dimension", name));
      elements *= dim;
      if (elements > kMaxTensorElements) {
        throw DataError(fmt::format("checkpoint: parameter '{}' is implausibly large", name));
      }
      tensor.shape.push_back(dim);
    }
    tensor.data.resize(elements);
    for (uint64_t e = 0; e < elements; ++e) {
      tensor.data[e] = r.F64("parameter data");
      if (!std::isfinite(tensor.data[e])) {
        throw DataError(
            fmt::format("checkpoint: parameter '{}' has a non-finite value at entry {}", name, e));
      }
    }
    checkpoint.params.emplace_back(std::move(name), std::move(tensor));
  }
  if (!r.AtEnd()) throw DataError("checkpoint: trailing bytes after the last parameter");
  return checkpoint;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  WriteCheckpoint(out, checkpoint);
  out.close();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return ReadCheckpoint(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace lexnorm
