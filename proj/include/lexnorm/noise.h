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

#ifndef LEXNORM_NOISE_H_
#define LEXNORM_NOISE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexnorm/random.h"
#include "lexnorm/text.h"

namespace lexnorm {

// The nine corruption procedures of the noise generator, in table order.
enum class NoisePattern {
  kDoNothing,
  kDeleteChars,
  kReplaceChars,
  kExtendChars,
  kExtendShortVowels,
  kDeleteSymbol,
  kMisplacedSign,
  kTypo,
  kConvertToken,
};

inline constexpr size_t kNumNoisePatterns = 9;
inline constexpr std::array<NoisePattern, kNumNoisePatterns> kAllNoisePatterns = {
    NoisePattern::kDoNothing,         NoisePattern::kDeleteChars,
    NoisePattern::kReplaceChars,      NoisePattern::kExtendChars,
    NoisePattern::kExtendShortVowels, NoisePattern::kDeleteSymbol,
    NoisePattern::kMisplacedSign,     NoisePattern::kTypo,
    NoisePattern::kConvertToken,
};

std::string_view PatternName(NoisePattern pattern);

// US QWERTY letter adjacency: horizontal neighbours plus the diagonally
// nearest keys on the rows above and below.
class KeyboardLayout {
 public:
  static const KeyboardLayout& Qwerty();

  // Neighbours of a lowercase Latin letter; empty for anything else.
  std::u32string_view Neighbors(char32_t key) const;
  bool Adjacent(char32_t a, char32_t b) const;

 private:
  explicit KeyboardLayout(std::array<std::u32string, 26> table) : table_(std::move(table)) {}
  std::array<std::u32string, 26> table_;
};

// Corrupts one word. When the pattern's precondition does not hold (no
// apostrophe to delete, no vowel to stretch, no other vocabulary word to
// convert to, ...) the word comes back unchanged. ConvertToken draws from
// `vocab`. Throws std::invalid_argument on an empty word.
Word ApplyPattern(std::u32string_view word, NoisePattern pattern, Rng& rng,
                  std::span<const Word> vocab = {});

// Target function behind a pair: string or phonetic edit similarity.
enum class SimilarityMode { kLevenshtein, kMetaphone };

std::string_view ModeName(SimilarityMode mode);
// Accepts "leven", "levenshtein" and "metaphone".
std::optional<SimilarityMode> ParseMode(std::string_view name);

double TargetSimilarity(SimilarityMode mode, std::string_view x, std::string_view y);

// One siamese training instance. Words are UTF-8.
struct SimilarityPair {
  std::string x;
  std::string y;
  double target = 0.0;
  SimilarityMode mode = SimilarityMode::kLevenshtein;

  bool operator==(const SimilarityPair&) const = default;
};

struct NoiseConfig {
  // Sampling weight per pattern, indexed like kAllNoisePatterns.
  std::array<double, kNumNoisePatterns> pattern_weights = {1, 1, 1, 1, 1, 1, 1, 1, 1};
};

// Builds training pairs. Vocabulary words are lowercased and de-duplicated
// (first occurrence wins). For each word w, in order: `per_word` pairs
// (noisy(w), w), the identity pair (w, w), and one cross pair (w, w') with w'
// drawn from the rest of the vocabulary (omitted for a one-word vocabulary).
// Word i draws from its own stream DeriveSeed(seed, i), so the output does
// not depend on `workers`.
std::vector<SimilarityPair> GeneratePairs(std::span<const std::string> vocab, int per_word,
                                          SimilarityMode mode, uint64_t seed,
                                          const NoiseConfig& config = {}, int workers = 1);

// Pairs file: `x<TAB>y<TAB>target<TAB>mode` per line, target with nine
// fractional digits.
void WritePairs(std::ostream& out, std::span<const SimilarityPair> pairs);

// Parses a pairs file. Each target is recomputed from its strings and must
// agree with the stored value to 1e-6; the recomputed value is kept. Throws
// DataError naming the offending line.
std::vector<SimilarityPair> ReadPairs(std::istream& in);

}  // namespace lexnorm

#endif  // LEXNORM_NOISE_H_
