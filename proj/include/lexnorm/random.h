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

#ifndef LEXNORM_RANDOM_H_
#define LEXNORM_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace lexnorm {

// Mixes a global seed with a stream id (splitmix64 finalizer). Every pipeline
// stage draws from its own stream, so adding a stage never shifts the
// randomness of another.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

// Named stream ids for DeriveSeed.
enum class SeedStream : uint64_t {
  kNoise = 1,
  kSiameseInit = 2,
  kSiameseShuffle = 3,
  kNormalizerInit = 4,
  kNormalizerShuffle = 5,
  kSplit = 6,
};

inline uint64_t DeriveSeed(uint64_t seed, SeedStream stream) {
  return DeriveSeed(seed, static_cast<uint64_t>(stream));
}

// Seeded random source. The standard distributions are implementation
// defined, so draws are computed here from raw mt19937_64 output to keep
// results identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  // Uniform in [lo, hi].
  int64_t UniformRange(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(UniformInt(static_cast<uint64_t>(hi - lo) + 1));
  }

  // Index drawn proportionally to non-negative weights; at least one weight
  // must be positive.
  size_t Categorical(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformInt(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lexnorm

#endif  // LEXNORM_RANDOM_H_
