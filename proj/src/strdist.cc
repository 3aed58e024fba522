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
#include <numeric>
#include <vector>

#include "lexnorm/text.h"

namespace lexnorm {

size_t Levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();

  // Single row over the shorter word.
  std::vector<size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diagonal = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t above = row[j];
      const size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

size_t Levenshtein(std::string_view a_utf8, std::string_view b_utf8) {
  return Levenshtein(DecodeUtf8(a_utf8), DecodeUtf8(b_utf8));
}

double EditSimilarity(std::u32string_view a, std::u32string_view b) {
  const size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  const double d = static_cast<double>(Levenshtein(a, b));
  return 1.0 - d / static_cast<double>(longest);
}

double EditSimilarity(std::string_view a_utf8, std::string_view b_utf8) {
  return EditSimilarity(DecodeUtf8(a_utf8), DecodeUtf8(b_utf8));
}

}  // namespace lexnorm
