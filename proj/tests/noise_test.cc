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

#include <sstream>
#include <gtest/gtest.h>

#include "lexnorm/error.h"
#include "lexnorm/metaphone.h"
#include "lexnorm/strdist.h"
#include "noise_conformance.h"
#include "test_util.h"

namespace lexnorm {
namespace {

std::string Apply(std::string_view word, NoisePattern pattern, uint64_t seed) {
  Rng rng(seed);
  return EncodeUtf8(ApplyPattern(DecodeUtf8(word), pattern, rng));
}

TEST(ApplyPatternTest, TableExemplarsUnderDocumentedSeeds) {
  EXPECT_EQ(Apply("python", NoisePattern::kDoNothing, 0), "python");
  EXPECT_EQ(Apply("I'm", NoisePattern::kDeleteSymbol, 0), "Im");
  EXPECT_EQ(Apply("don't", NoisePattern::kMisplacedSign, 0), "do'nt");
  EXPECT_EQ(Apply("beer", NoisePattern::kExtendChars, 5), "beerrrr");
  EXPECT_EQ(Apply("hello", NoisePattern::kTypo, 53), "jello");
  EXPECT_EQ(Apply("cat", NoisePattern::kExtendShortVowels, 1), "caaat");
  EXPECT_EQ(Apply("python", NoisePattern::kReplaceChars, 1), "pyhton");
}

TEST(ApplyPatternTest, RejectsEmptyWord) {
  Rng rng(1);
  EXPECT_THROW(ApplyPattern(U"", NoisePattern::kDoNothing, rng), std::invalid_argument);
}

TEST(ApplyPatternTest, FallsBackWhenPreconditionFails) {
  EXPECT_EQ(Apply("python", NoisePattern::kDeleteSymbol, 3), "python");
  EXPECT_EQ(Apply("python", NoisePattern::kMisplacedSign, 3), "python");
  EXPECT_EQ(Apply("cat", NoisePattern::kExtendChars, 3), "cat");
  EXPECT_EQ(Apply("rhythm", NoisePattern::kExtendShortVowels, 3), "rhythm");
  EXPECT_EQ(Apply("x", NoisePattern::kDeleteChars, 3), "x");
  EXPECT_EQ(Apply("123", NoisePattern::kTypo, 3), "123");
  EXPECT_EQ(Apply("ruby", NoisePattern::kConvertToken, 3), "ruby");
}

TEST(ApplyPatternTest, ConvertTokenDrawsAnotherVocabularyWord) {
  const std::vector<Word> vocab = {U"python", U"ruby", U"java"};
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const Word out = ApplyPattern(U"python", NoisePattern::kConvertToken, rng, vocab);
    EXPECT_NE(out, U"python");
    EXPECT_NE(std::find(vocab.begin(), vocab.end(), out), vocab.end());
  }
}

class PatternConformanceTest : public ::testing::TestWithParam<NoisePattern> {};

TEST_P(PatternConformanceTest, ThousandSeededTrials) {
  const std::vector<Word> vocab = {U"you", U"are", U"great", U"don't", U"home"};
  Rng words(static_cast<uint64_t>(GetParam()) + 100);
  int changed = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Word in = DecodeUtf8(testing::RandomWord(words, "abeiorsuyt'", 1, 9));
    Rng rng(static_cast<uint64_t>(trial));
    const Word out = ApplyPattern(in, GetParam(), rng, vocab);
    ASSERT_EQ(testing::CheckPattern(in, GetParam(), out, vocab), "")
        << EncodeUtf8(in) << " -> " << EncodeUtf8(out);
    if (out != in) ++changed;
  }
  if (GetParam() != NoisePattern::kDoNothing) EXPECT_GT(changed, 0);
}

INSTANTIATE_TEST_SUITE_P(AllPatterns, PatternConformanceTest,
                         ::testing::ValuesIn(kAllNoisePatterns),
                         [](const auto& info) {
                           std::string name(PatternName(info.param));
                           std::erase(name, '-');
                           return name;
                         });

TEST(KeyboardLayoutTest, SymmetricAndComplete) {
  const auto& layout = KeyboardLayout::Qwerty();
  for (char32_t a = U'a'; a <= U'z'; ++a) {
    EXPECT_FALSE(layout.Neighbors(a).empty());
    for (char32_t b : layout.Neighbors(a)) {
      EXPECT_TRUE(layout.Adjacent(b, a)) << static_cast<char>(a) << static_cast<char>(b);
      EXPECT_NE(a, b);
    }
  }
  EXPECT_TRUE(layout.Adjacent(U'h', U'j'));
  EXPECT_FALSE(layout.Adjacent(U'q', U'p'));
  EXPECT_TRUE(layout.Neighbors(U'\'').empty());
}

TEST(GeneratePairsTest, YesExample) {
  NoiseConfig only_vowels;
  only_vowels.pattern_weights.fill(0);
  only_vowels.pattern_weights[static_cast<size_t>(NoisePattern::kExtendShortVowels)] = 1;
  const std::vector<std::string> vocab = {"yes"};
  const auto pairs = GeneratePairs(vocab, 1, SimilarityMode::kLevenshtein, 9, only_vowels);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[1], (SimilarityPair{"yes", "yes", 1.0, SimilarityMode::kLevenshtein}));
  const std::string noisy = pairs[0].x;
  EXPECT_EQ(pairs[0].y, "yes");
  EXPECT_DOUBLE_EQ(pairs[0].target, EditSimilarity(noisy, "yes"));
  EXPECT_DOUBLE_EQ(EditSimilarity("yeees", "yes"), 0.6);
}

TEST(GeneratePairsTest, MetaphoneTargetForStretchedYes) {
  EXPECT_DOUBLE_EQ(TargetSimilarity(SimilarityMode::kMetaphone, "yeeeees", "yes"), 1.0);
  NoiseConfig only_vowels;
  only_vowels.pattern_weights.fill(0);
  only_vowels.pattern_weights[static_cast<size_t>(NoisePattern::kExtendShortVowels)] = 1;
  const std::vector<std::string> vocab = {"yes"};
  for (const auto& pair : GeneratePairs(vocab, 5, SimilarityMode::kMetaphone, 3, only_vowels)) {
    EXPECT_DOUBLE_EQ(pair.target, 1.0) << pair.x;
  }
}

TEST(GeneratePairsTest, DoNothingGivesUnitTargets) {
  NoiseConfig none;
  none.pattern_weights.fill(0);
  none.pattern_weights[0] = 1;
  const std::vector<std::string> vocab = {"you", "see", "car"};
  const auto pairs = GeneratePairs(vocab, 3, SimilarityMode::kLevenshtein, 1, none);
  ASSERT_EQ(pairs.size(), 3u * 5u);
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (k % 5 == 4) continue;  // cross pair
    EXPECT_EQ(pairs[k].target, 1.0);
  }
}

TEST(GeneratePairsTest, LayoutPerWord) {
  const std::vector<std::string> vocab = {"When", "you", "when"};
  const auto pairs = GeneratePairs(vocab, 2, SimilarityMode::kLevenshtein, 4);
  ASSERT_EQ(pairs.size(), 2u * 4u);
  EXPECT_EQ(pairs[0].y, "when");
  EXPECT_EQ(pairs[2], (SimilarityPair{"when", "when", 1.0, SimilarityMode::kLevenshtein}));
  EXPECT_EQ(pairs[3].x, "when");
  EXPECT_EQ(pairs[3].y, "you");
  EXPECT_EQ(pairs[7].y, "when");
}

TEST(GeneratePairsTest, SingleWordHasNoCrossPair) {
  const std::vector<std::string> vocab = {"home"};
  EXPECT_EQ(GeneratePairs(vocab, 3, SimilarityMode::kMetaphone, 1).size(), 4u);
}

TEST(GeneratePairsTest, RejectsBadArguments) {
  const std::vector<std::string> vocab = {"home"};
  EXPECT_THROW(GeneratePairs(vocab, 0, SimilarityMode::kLevenshtein, 1), std::invalid_argument);
  EXPECT_THROW(GeneratePairs({}, 1, SimilarityMode::kLevenshtein, 1), std::invalid_argument);
}

TEST(GeneratePairsTest, ReproducibleAndIndependentOfWorkers) {
  std::vector<std::string> vocab;
  Rng rng(8);
  for (int k = 0; k < 40; ++k) vocab.push_back(testing::RandomWord(rng, "abcdefgo'rsuy", 2, 8));
  const auto one = GeneratePairs(vocab, 4, SimilarityMode::kMetaphone, 77, {}, 1);
  EXPECT_EQ(one, GeneratePairs(vocab, 4, SimilarityMode::kMetaphone, 77, {}, 1));
  EXPECT_EQ(one, GeneratePairs(vocab, 4, SimilarityMode::kMetaphone, 77, {}, 3));
  EXPECT_EQ(one, GeneratePairs(vocab, 4, SimilarityMode::kMetaphone, 77, {}, 16));
  EXPECT_NE(one, GeneratePairs(vocab, 4, SimilarityMode::kMetaphone, 78, {}, 1));
}

TEST(GeneratePairsTest, TargetsRecompute) {
  const std::vector<std::string> vocab = {"tomorrow", "don't", "beer", "hello", "python"};
  for (SimilarityMode mode : {SimilarityMode::kLevenshtein, SimilarityMode::kMetaphone}) {
    for (const auto& p : GeneratePairs(vocab, 20, mode, 5)) {
      EXPECT_EQ(p.target, TargetSimilarity(mode, p.x, p.y));
      EXPECT_GE(p.target, 0.0);
      EXPECT_LE(p.target, 1.0);
    }
  }
}

TEST(PairsFileTest, RoundTrip) {
  const std::vector<std::string> vocab = {"tomorrow", "don't", "café"};
  const auto pairs = GeneratePairs(vocab, 5, SimilarityMode::kLevenshtein, 2);
  std::stringstream text;
  WritePairs(text, pairs);
  EXPECT_EQ(ReadPairs(text), pairs);
}

TEST(PairsFileTest, RejectsInconsistentTarget) {
  std::stringstream text("yes\tyes\t1.000000000\tleven\nyeees\tyes\t0.9\tleven\n");
  try {
    ReadPairs(text);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(PairsFileTest, RejectsMalformedLines) {
  std::stringstream few_fields("yes\tyes\n");
  EXPECT_THROW(ReadPairs(few_fields), DataError);
  std::stringstream bad_mode("yes\tyes\t1.0\tsoundex\n");
  EXPECT_THROW(ReadPairs(bad_mode), DataError);
}

TEST(ModeTest, Names) {
  EXPECT_EQ(ParseMode("leven"), SimilarityMode::kLevenshtein);
  EXPECT_EQ(ParseMode("levenshtein"), SimilarityMode::kLevenshtein);
  EXPECT_EQ(ParseMode("metaphone"), SimilarityMode::kMetaphone);
  EXPECT_EQ(ParseMode("soundex"), std::nullopt);
  EXPECT_EQ(ModeName(SimilarityMode::kMetaphone), "metaphone");
}

}  // namespace
}  // namespace lexnorm
