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

#ifndef LEXNORM_METAPHONE_H_
#define LEXNORM_METAPHONE_H_

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>

namespace lexnorm {

// Double Metaphone output. Both codes use the alphabet
// {A,F,H,J,K,L,M,N,P,R,S,T,W,X,0}; 'A' only ever appears for an initial
// vowel. When no branching rule fires, secondary == primary.
struct PhoneticCode {
  std::string primary;
  std::string secondary;

  bool operator==(const PhoneticCode&) const = default;
};

std::ostream& operator<<(std::ostream& os, const PhoneticCode& code);

inline constexpr size_t kDefaultMaxCodeLength = 4;

// Encodes a word with the Double Metaphone rule set. Characters outside
// [A-Za-z] are stripped first (apostrophes, digits, non-Latin text); a word
// with no Latin letters yields two empty codes.
PhoneticCode DoubleMetaphone(std::string_view word,
                             size_t max_code_length = kDefaultMaxCodeLength);

// Edit similarity between the primary codes of two UTF-8 words.
double PhoneticSimilarity(std::string_view a, std::string_view b);

}  // namespace lexnorm

#endif  // LEXNORM_METAPHONE_H_
