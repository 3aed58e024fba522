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

#ifndef LEXNORM_TEXT_H_
#define LEXNORM_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace lexnorm {

// A token as a sequence of Unicode scalar values. Case is kept as given.
using Word = std::u32string;

// Decodes UTF-8. Malformed sequences decode to U+FFFD.
Word DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view word);

// Lowercases ASCII and Latin-1 letters. Other scalars are left alone so the
// result never depends on the process locale.
char32_t ToLower(char32_t c);
Word ToLower(std::u32string_view word);
std::string ToLowerUtf8(std::string_view text);

// Splits on ASCII whitespace, dropping empty fields.
std::vector<std::string> SplitWhitespace(std::string_view line);

}  // namespace lexnorm

#endif  // LEXNORM_TEXT_H_
