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


#include "lexnorm/metaphone.h"

#include <fstream>
#include <sstream>
#include <gtest/gtest.h>

#include "test_util.h"

namespace lexnorm {
namespace {

struct OracleRow {
  std::string word;
  PhoneticCode code;
};

std::vector<OracleRow> LoadOracle() {
  std::ifstream in(testing::DataPath("metaphone_oracle.tsv"));
  std::vector<OracleRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    OracleRow row;
    std::getline(fields, row.word, '\t');
    std::getline(fields, row.code.primary, '\t');
    std::getline(fields, row.code.secondary, '\t');
    rows.push_back(row);
  }
  return rows;
}

TEST(DoubleMetaphoneTest, AgreesWithReferenceFixture) {
  const auto rows = LoadOracle();
  ASSERT_EQ(rows.size(), 100u);
  for (const OracleRow& row : rows) {
    EXPECT_EQ(DoubleMetaphone(row.word), row.code) << row.word;
  }
}

TEST(DoubleMetaphoneTest, Examples) {
  EXPECT_EQ(DoubleMetaphone("yes").primary, "AS");
  EXPECT_EQ(DoubleMetaphone("yeeeees").primary, "AS");
  EXPECT_EQ(DoubleMetaphone("smith"), (PhoneticCode{"SM0", "XMT"}));
  EXPECT_EQ(DoubleMetaphone("python"), (PhoneticCode{"P0N", "PTN"}));
}

TEST(DoubleMetaphoneTest, YesFamilyCollapsesToAs) {
  for (int run = 1; run <= 10; ++run) {
    const std::string e(static_cast<size_t>(run), 'e');
    EXPECT_EQ(DoubleMetaphone("y" + e + "s"), (PhoneticCode{"AS", "AS"})) << run;
    EXPECT_EQ(DoubleMetaphone(e + "s").primary, "AS") << run;
  }
}

TEST(DoubleMetaphoneTest, SanitizesInput) {
  EXPECT_EQ(DoubleMetaphone("don't"), DoubleMetaphone("dont"));
  EXPECT_EQ(DoubleMetaphone("SMITH"), DoubleMetaphone("smith"));
  EXPECT_EQ(DoubleMetaphone("gr8"), DoubleMetaphone("gr"));
  EXPECT_EQ(DoubleMetaphone("1234"), (PhoneticCode{"", ""}));
  EXPECT_EQ(DoubleMetaphone(""), (PhoneticCode{"", ""}));
}

TEST(DoubleMetaphoneTest, CodeLengthCap) {
  EXPECT_LE(DoubleMetaphone("internationalization").primary.size(), 4u);
  EXPECT_GT(DoubleMetaphone("internationalization", 12).primary.size(), 4u);
}

TEST(DoubleMetaphoneTest, OutputAlphabet) {
  const std::string alphabet = "AFHJKLMNPRSTWX0";
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string word = testing::RandomWord(rng, "abcdefghijklmnopqrstuvwxyz'", 1, 10);
    const PhoneticCode code = DoubleMetaphone(word);
    for (const std::string* s : {&code.primary, &code.secondary}) {
      EXPECT_LE(s->size(), 4u);
      for (size_t k = 0; k < s->size(); ++k) {
        ASSERT_NE(alphabet.find((*s)[k]), std::string::npos) << word << " -> " << *s;
        if (k > 0) EXPECT_NE((*s)[k], 'A') << word;
      }
    }
    EXPECT_EQ(DoubleMetaphone(word), code);
  }
}

TEST(PhoneticSimilarityTest, Examples) {
  EXPECT_DOUBLE_EQ(PhoneticSimilarity("yeeeees", "yes"), 1.0);
  EXPECT_DOUBLE_EQ(PhoneticSimilarity("yes", "yes"), 1.0);
  EXPECT_DOUBLE_EQ(PhoneticSimilarity("cat", "dog"), 0.0);
  EXPECT_DOUBLE_EQ(PhoneticSimilarity("123", "!!"), 1.0);
}

TEST(PhoneticSimilarityTest, SymmetricAndBounded) {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string a = testing::RandomWord(rng, "abcdeghkst", 1, 8);
    const std::string b = testing::RandomWord(rng, "abcdeghkst", 1, 8);
    const double s = PhoneticSimilarity(a, b);
    EXPECT_EQ(s, PhoneticSimilarity(b, a));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

}  // namespace
}  // namespace lexnorm
