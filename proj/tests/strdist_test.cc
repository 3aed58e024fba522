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


#include "lexnorm/strdist.h"

#include <algorithm>
#include <gtest/gtest.h>

#include "test_util.h"

namespace lexnorm {
namespace {

using testing::RandomWord;

// Plain recursion over the last characters; exponential but obviously right.
size_t RecursiveDistance(std::string_view a, std::string_view b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const size_t cost = a.back() == b.back() ? 0 : 1;
  const auto a1 = a.substr(0, a.size() - 1);
  const auto b1 = b.substr(0, b.size() - 1);
  return std::min({RecursiveDistance(a1, b) + 1, RecursiveDistance(a, b1) + 1,
                   RecursiveDistance(a1, b1) + cost});
}

TEST(LevenshteinTest, Examples) {
  EXPECT_EQ(Levenshtein("python", "python"), 0u);
  EXPECT_EQ(Levenshtein("", "abc"), 3u);
  EXPECT_EQ(Levenshtein("kitten", "sitting"), RecursiveDistance("kitten", "sitting"));
  EXPECT_EQ(Levenshtein("kitten", "sitting"), 3u);
  EXPECT_EQ(Levenshtein("yeeeees", "yes"), RecursiveDistance("yeeeees", "yes"));
  EXPECT_EQ(Levenshtein("yeeeees", "yes"), 4u);
}

TEST(LevenshteinTest, CountsScalarsNotBytes) {
  EXPECT_EQ(Levenshtein("café", "cafe"), 1u);
  EXPECT_EQ(Levenshtein("ü", ""), 1u);
  EXPECT_EQ(Levenshtein(U"\U0001F600a", U"a"), 1u);
}

TEST(LevenshteinTest, CaseSensitive) { EXPECT_EQ(Levenshtein("Yes", "yes"), 1u); }

TEST(LevenshteinTest, NoTransposition) { EXPECT_EQ(Levenshtein("ab", "ba"), 2u); }

TEST(LevenshteinTest, MatchesRecursionOnRandomShortWords) {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string a = RandomWord(rng, "abc", 0, 6);
    const std::string b = RandomWord(rng, "abc", 0, 6);
    ASSERT_EQ(Levenshtein(a, b), RecursiveDistance(a, b)) << a << " / " << b;
  }
}

TEST(LevenshteinTest, MetricAxiomsAndLengthBounds) {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string a = RandomWord(rng, "abcde", 0, 12);
    const std::string b = RandomWord(rng, "abcde", 0, 12);
    const std::string c = RandomWord(rng, "abcde", 0, 12);
    const size_t ab = Levenshtein(a, b);
    EXPECT_EQ(ab, Levenshtein(b, a));
    EXPECT_EQ(ab == 0, a == b);
    EXPECT_LE(Levenshtein(a, c), ab + Levenshtein(b, c));
    const size_t diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    EXPECT_GE(ab, diff);
    EXPECT_LE(ab, std::max(a.size(), b.size()));
  }
}

TEST(EditSimilarityTest, Examples) {
  EXPECT_DOUBLE_EQ(EditSimilarity("yes", "yes"), 1.0);
  EXPECT_DOUBLE_EQ(EditSimilarity("yeeeees", "yes"), 1.0 - 4.0 / 7.0);
  EXPECT_DOUBLE_EQ(EditSimilarity("", "abc"), 0.0);
  EXPECT_DOUBLE_EQ(EditSimilarity("", ""), 1.0);
  EXPECT_DOUBLE_EQ(EditSimilarity("yeees", "yes"), 0.6);
}

TEST(EditSimilarityTest, BoundedSymmetricAndOneOnlyForEqualWords) {
  Rng rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string a = RandomWord(rng, "xyz", 0, 8);
    const std::string b = RandomWord(rng, "xyz", 0, 8);
    const double s = EditSimilarity(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(s, EditSimilarity(b, a));
    EXPECT_EQ(s == 1.0, a == b);
    EXPECT_EQ(EditSimilarity(a, a), 1.0);
  }
}

}  // namespace
}  // namespace lexnorm
