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

#ifndef LEXNORM_EVALKIT_H_
#define LEXNORM_EVALKIT_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexnorm {

// One aligned sentence: output[i] is the normalization of input[i].
struct Sentence {
  std::vector<std::string> input;
  std::vector<std::string> output;

  bool operator==(const Sentence&) const = default;
};

struct Dataset {
  std::vector<Sentence> sentences;
};

enum class DatasetFormat { kJsonArray, kJsonLines };

// Parses records carrying "input" and "output" token arrays (extra fields,
// such as WNUT's "tid" and "index", are ignored). Tokens are lowercased.
// Throws DataError naming the record index for malformed records, unequal
// lengths and empty sentences.
Dataset ParseDataset(std::string_view text, DatasetFormat format);

// Detects the format from the first non-blank character when not given.
Dataset LoadDataset(const std::filesystem::path& path,
                    std::optional<DatasetFormat> format = std::nullopt);

void WriteDataset(std::ostream& out, const Dataset& dataset, DatasetFormat format);

struct EvalReport {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Fills precision/recall/F1 from the counts. With nothing to score on a side
// the ratio is 1 when the other error count is also 0, else 0; F1 is 0 when
// precision + recall is 0.
EvalReport MakeReport(size_t tp, size_t fp, size_t fn);

// Token-level normalization scoring. At each position a change is needed when
// gold output differs from gold input, and made when the prediction differs
// from gold input. A made change that matches gold output is a true positive;
// any other made change is a false positive; a needed change not correctly
// made is a false negative, so a wrong change at a needed position counts as
// both. Comparison is on lowercased strings. Throws std::invalid_argument if
// `predictions` is not aligned with `gold`.
EvalReport Evaluate(const Dataset& gold, std::span<const std::vector<std::string>> predictions);

// Table with one row per model and P/R/F1 as percentages with two decimals.
// Throws std::invalid_argument for an empty list.
std::string ReportTable(std::span<const std::pair<std::string, EvalReport>> rows,
                        bool csv = false);

// Spearman rank correlation with average ranks for ties. Returns 0 when either
// side is constant.
double SpearmanCorrelation(std::span<const double> a, std::span<const double> b);

}  // namespace lexnorm

#endif  // LEXNORM_EVALKIT_H_
