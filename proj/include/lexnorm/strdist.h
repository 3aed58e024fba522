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

#ifndef LEXNORM_STRDIST_H_
#define LEXNORM_STRDIST_H_

#include <cstddef>
#include <string_view>

namespace lexnorm {

// Unit-cost Levenshtein distance (insert, delete, substitute) over Unicode
// scalar values. No transpositions and no case folding.
size_t Levenshtein(std::u32string_view a, std::u32string_view b);

// Same, with both arguments given as UTF-8.
size_t Levenshtein(std::string_view a_utf8, std::string_view b_utf8);

// s(a, b) = 1 - d(a, b) / max(|a|, |b|), always in [0, 1]. Two empty words
// are identical and score 1.
double EditSimilarity(std::u32string_view a, std::u32string_view b);
double EditSimilarity(std::string_view a_utf8, std::string_view b_utf8);

}  // namespace lexnorm

#endif  // LEXNORM_STRDIST_H_
