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

#include "lexnorm/noise.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <fmt/format.h>

#include "lexnorm/error.h"
#include "lexnorm/metaphone.h"
#include "lexnorm/strdist.h"

namespace lexnorm {
namespace {

// Row-offset QWERTY adjacency, letters a..z.
constexpr std::array<std::u32string_view, 26> kQwertyNeighbors = {
    U"qswz",    // a
    U"ghnv",    // b
    U"dfvx",    // c
    U"cefrsx",  // d
    U"drsw",    // e
    U"cdgrtv",  // f
    U"bfhtvy",  // g
    U"bgjnuy",  // h
    U"jkou",    // i
    U"hikmnu",  // j
    U"ijlmo",   // k
    U"kop",     // l
    U"jkn",     // m
    U"bhjm",    // n
    U"iklp",    // o
    U"lo",      // p
    U"aw",      // q
    U"deft",    // r
    U"adewxz",  // s
    U"fgry",    // t
    U"hijy",    // u
    U"bcfg",    // v
    U"aeqs",    // w
    U"cdsz",    // x
    U"ghtu",    // y
    U"asx",     // z
};

constexpr char32_t kApostrophe = U'\'';

bool IsShortVowel(char32_t c) {
  return c == U'a' || c == U'i' || c == U'u' || c == U'e' || c == U'o';
}

bool IsExtendableEnding(char32_t c) {
  return c == U'u' || c == U'y' || c == U's' || c == U'r';
}

// Repeat count for the two extension patterns.
size_t DrawRepeat(Rng& rng) { return static_cast<size_t>(rng.UniformRange(2, 4)); }

std::vector<size_t> PositionsOf(std::u32string_view word, auto predicate) {
  std::vector<size_t> out;
  for (size_t i = 0; i < word.size(); ++i) {
    if (predicate(word[i])) out.push_back(i);
  }
  return out;
}

Word DeleteChars(std::u32string_view word, Rng& rng) {
  size_t count = static_cast<size_t>(rng.UniformRange(1, 2));
  count = std::min(count, word.size() - 1);
  if (count == 0) return Word(word);
  std::vector<size_t> positions(word.size());
  for (size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  // Partial Fisher-Yates: the first `count` entries are a uniform sample.
  for (size_t i = 0; i < count; ++i) {
    std::swap(positions[i], positions[i + rng.UniformInt(positions.size() - i)]);
  }
  std::vector<bool> drop(word.size(), false);
  for (size_t i = 0; i < count; ++i) drop[positions[i]] = true;
  Word out;
  for (size_t i = 0; i < word.size(); ++i) {
    if (!drop[i]) out.push_back(word[i]);
  }
  return out;
}

Word ReplaceChars(std::u32string_view word, Rng& rng) {
  Word out(word);
  if (out.size() < 2) return out;
  const size_t i = rng.UniformInt(out.size());
  size_t j = rng.UniformInt(out.size() - 1);
  if (j >= i) ++j;
  std::swap(out[i], out[j]);
  return out;
}

Word ExtendChars(std::u32string_view word, Rng& rng) {
  Word out(word);
  if (!IsExtendableEnding(out.back())) return out;
  out.append(DrawRepeat(rng), out.back());
  return out;
}

Word ExtendShortVowels(std::u32string_view word, Rng& rng) {
  const auto vowels = PositionsOf(word, IsShortVowel);
  Word out(word);
  if (vowels.empty()) return out;
  const size_t at = vowels[rng.UniformInt(vowels.size())];
  out.insert(at, DrawRepeat(rng), out[at]);
  return out;
}

Word DeleteSymbol(std::u32string_view word, Rng& rng) {
  const auto marks = PositionsOf(word, [](char32_t c) { return c == kApostrophe; });
  Word out(word);
  if (marks.empty()) return out;
  out.erase(marks[rng.UniformInt(marks.size())], 1);
  return out;
}

Word MisplacedSign(std::u32string_view word, Rng& rng) {
  const auto marks = PositionsOf(word, [](char32_t c) { return c == kApostrophe; });
  if (marks.empty()) return Word(word);
  const size_t original = marks[rng.UniformInt(marks.size())];
  Word base(word);
  base.erase(original, 1);
  // Interior positions only; an apostrophe at either edge reads as a quote.
  std::vector<Word> candidates;
  for (size_t at = 1; at < base.size(); ++at) {
    if (at == original) continue;
    Word moved = base;
    moved.insert(at, 1, kApostrophe);
    if (moved != word) candidates.push_back(std::move(moved));
  }
  if (candidates.empty()) return Word(word);
  return candidates[rng.UniformInt(candidates.size())];
}

Word Typo(std::u32string_view word, Rng& rng) {
  const KeyboardLayout& layout = KeyboardLayout::Qwerty();
  const auto keys =
      PositionsOf(word, [&](char32_t c) { return !layout.Neighbors(c).empty(); });
  Word out(word);
  if (keys.empty()) return out;
  const size_t at = keys[rng.UniformInt(keys.size())];
  const std::u32string_view neighbors = layout.Neighbors(out[at]);
  out[at] = neighbors[rng.UniformInt(neighbors.size())];
  return out;
}

Word ConvertToken(std::u32string_view word, Rng& rng, std::span<const Word> vocab) {
  std::vector<const Word*> others;
  for (const Word& candidate : vocab) {
    if (candidate != word) others.push_back(&candidate);
  }
  if (others.empty()) return Word(word);
  return *others[rng.UniformInt(others.size())];
}

// Pairs for vocabulary entry `index`.
void PairsForWord(const std::vector<Word>& words, size_t index, int per_word,
                  SimilarityMode mode, uint64_t seed, const NoiseConfig& config,
                  std::vector<SimilarityPair>& out) {
  Rng rng(DeriveSeed(seed, index));
  const Word& word = words[index];
  const std::string clean = EncodeUtf8(word);
  auto emit = [&](std::string x, std::string y) {
    const double target = TargetSimilarity(mode, x, y);
    out.push_back({std::move(x), std::move(y), target, mode});
  };
  for (int k = 0; k < per_word; ++k) {
    const size_t pattern_index = rng.Categorical(config.pattern_weights);
    emit(EncodeUtf8(ApplyPattern(word, kAllNoisePatterns[pattern_index], rng, words)),
         clean);
  }
  emit(clean, clean);
  if (words.size() > 1) {
    size_t other = rng.UniformInt(words.size() - 1);
    if (other >= index) ++other;
    emit(clean, EncodeUtf8(words[other]));
  }
}

}  // namespace

std::string_view PatternName(NoisePattern pattern) {
  switch (pattern) {
    case NoisePattern::kDoNothing: return "do-nothing";
    case NoisePattern::kDeleteChars: return "delete-chars";
    case NoisePattern::kReplaceChars: return "replace-chars";
    case NoisePattern::kExtendChars: return "extend-chars";
    case NoisePattern::kExtendShortVowels: return "extend-short-vowels";
    case NoisePattern::kDeleteSymbol: return "delete-symbol";
    case NoisePattern::kMisplacedSign: return "misplaced-sign";
    case NoisePattern::kTypo: return "typo";
    case NoisePattern::kConvertToken: return "convert-token";
  }
  return "unknown";
}

const KeyboardLayout& KeyboardLayout::Qwerty() {
  static const KeyboardLayout* layout = [] {
    std::array<std::u32string, 26> table;
    for (size_t i = 0; i < table.size(); ++i) table[i] = std::u32string(kQwertyNeighbors[i]);
    return new KeyboardLayout(std::move(table));
  }();
  return *layout;
}

std::u32string_view KeyboardLayout::Neighbors(char32_t key) const {
  if (key < U'a' || key > U'z') return {};
  return table_[key - U'a'];
}

bool KeyboardLayout::Adjacent(char32_t a, char32_t b) const {
  return Neighbors(a).find(b) != std::u32string_view::npos;
}

Word ApplyPattern(std::u32string_view word, NoisePattern pattern, Rng& rng,
                  std::span<const Word> vocab) {
  if (word.empty()) throw std::invalid_argument("ApplyPattern: empty word");
  switch (pattern) {
    case NoisePattern::kDoNothing: return Word(word);
    case NoisePattern::kDeleteChars: return DeleteChars(word, rng);
    case NoisePattern::kReplaceChars: return ReplaceChars(word, rng);
    case NoisePattern::kExtendChars: return ExtendChars(word, rng);
    case NoisePattern::kExtendShortVowels: return ExtendShortVowels(word, rng);
    case NoisePattern::kDeleteSymbol: return DeleteSymbol(word, rng);
    case NoisePattern::kMisplacedSign: return MisplacedSign(word, rng);
    case NoisePattern::kTypo: return Typo(word, rng);
    case NoisePattern::kConvertToken: return ConvertToken(word, rng, vocab);
  }
  throw std::invalid_argument("ApplyPattern: unknown pattern");
}

std::string_view ModeName(SimilarityMode mode) {
  return mode == SimilarityMode::kLevenshtein ? "leven" : "metaphone";
}

std::optional<SimilarityMode> ParseMode(std::string_view name) {
  if (name == "leven" || name == "levenshtein") return SimilarityMode::kLevenshtein;
  if (name == "metaphone") return SimilarityMode::kMetaphone;
  return std::nullopt;
}

double TargetSimilarity(SimilarityMode mode, std::string_view x, std::string_view y) {
  return mode == SimilarityMode::kLevenshtein ? EditSimilarity(x, y)
                                              : PhoneticSimilarity(x, y);
}

std::vector<SimilarityPair> GeneratePairs(std::span<const std::string> vocab, int per_word,
                                          SimilarityMode mode, uint64_t seed,
                                          const NoiseConfig& config, int workers) {
  if (vocab.empty()) throw std::invalid_argument("GeneratePairs: empty vocabulary");
  if (per_word < 1) throw std::invalid_argument("GeneratePairs: per_word must be >= 1");
  if (workers < 1) throw std::invalid_argument("GeneratePairs: workers must be >= 1");

  std::vector<Word> words;
  std::unordered_set<Word> seen;
  for (const std::string& raw : vocab) {
    Word word = ToLower(DecodeUtf8(raw));
    if (word.empty()) throw std::invalid_argument("GeneratePairs: empty vocabulary word");
    if (seen.insert(word).second) words.push_back(std::move(word));
  }

  const size_t n = words.size();
  const size_t shards = std::min<size_t>(static_cast<size_t>(workers), n);
  std::vector<std::vector<SimilarityPair>> parts(shards);
  auto run_shard = [&](size_t shard) {
    const size_t begin = n * shard / shards;
    const size_t end = n * (shard + 1) / shards;
    for (size_t i = begin; i < end; ++i) {
      PairsForWord(words, i, per_word, mode, seed, config, parts[shard]);
    }
  };
  if (shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::jthread> threads;
    for (size_t s = 0; s < shards; ++s) threads.emplace_back(run_shard, s);
  }

  std::vector<SimilarityPair> pairs;
  for (auto& part : parts) {
    pairs.insert(pairs.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  return pairs;
}

void WritePairs(std::ostream& out, std::span<const SimilarityPair> pairs) {
  for (const SimilarityPair& pair : pairs) {
    out << fmt::format("{}\t{}\t{:.9f}\t{}\n", pair.x, pair.y, pair.target,
                       ModeName(pair.mode));
  }
}

std::vector<SimilarityPair> ReadPairs(std::istream& in) {
  std::vector<SimilarityPair> pairs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      fields.emplace_back(std::string_view(line).substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    auto fail = [&](const std::string& why) {
      return DataError(fmt::format("pairs line {}: {}", line_no, why));
    };
    if (fields.size() != 4) throw fail("expected 4 tab-separated fields");
    if (fields[0].empty() || fields[1].empty()) throw fail("empty word");
    double stored = 0.0;
    const auto [ptr, ec] =
        std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), stored);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size()) {
      throw fail("unparsable target '" + std::string(fields[2]) + "'");
    }
    const auto mode = ParseMode(fields[3]);
    if (!mode) throw fail("unknown mode '" + std::string(fields[3]) + "'");
    SimilarityPair pair{std::string(fields[0]), std::string(fields[1]), 0.0, *mode};
    pair.target = TargetSimilarity(*mode, pair.x, pair.y);
    if (!(std::abs(pair.target - stored) <= 1e-6)) {
      throw fail(fmt::format("stored target {} disagrees with recomputed {:.9f}", stored,
                             pair.target));
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace lexnorm
