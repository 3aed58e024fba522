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

#include "lexnorm/evalkit.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "lexnorm/error.h"
#include "lexnorm/text.h"

namespace lexnorm {
namespace {

using json = nlohmann::json;

std::vector<std::string> TokenArray(const json& record, const char* field, size_t index) {
  const auto it = record.find(field);
  if (it == record.end()) {
    throw DataError(fmt::format("record {}: missing \"{}\"", index, field));
  }
  if (!it->is_array()) {
    throw DataError(fmt::format("record {}: \"{}\" is not an array", index, field));
  }
  std::vector<std::string> tokens;
  for (const json& token : *it) {
    if (!token.is_string()) {
      throw DataError(fmt::format("record {}: \"{}\" holds a non-string token", index, field));
    }
    tokens.push_back(ToLowerUtf8(token.get<std::string>()));
  }
  return tokens;
}

Sentence ParseRecord(const json& record, size_t index) {
  if (!record.is_object()) throw DataError(fmt::format("record {}: not an object", index));
  Sentence s{TokenArray(record, "input", index), TokenArray(record, "output", index)};
  if (s.input.empty()) throw DataError(fmt::format("record {}: empty sentence", index));
  if (s.input.size() != s.output.size()) {
    throw DataError(fmt::format("record {}: input has {} tokens but output has {}", index,
                                s.input.size(), s.output.size()));
  }
  return s;
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

Dataset ParseDataset(std::string_view text, DatasetFormat format) {
  Dataset dataset;
  if (format == DatasetFormat::kJsonArray) {
    json root;
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw DataError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_array()) throw DataError("dataset root is not a JSON array");
    for (size_t k = 0; k < root.size(); ++k) dataset.sentences.push_back(ParseRecord(root[k], k));
    return dataset;
  }
  size_t index = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(fmt::format("record {}: malformed JSON: {}", index, e.what()));
    }
    dataset.sentences.push_back(ParseRecord(record, index));
    ++index;
  }
  return dataset;
}

Dataset LoadDataset(const std::filesystem::path& path, std::optional<DatasetFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (!format) {
    const size_t first = text.find_first_not_of(" \t\r\n");
    format = (first != std::string::npos && text[first] == '[') ? DatasetFormat::kJsonArray
                                                                : DatasetFormat::kJsonLines;
  }
  try {
    return ParseDataset(text, *format);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteDataset(std::ostream& out, const Dataset& dataset, DatasetFormat format) {
  json array = json::array();
  for (const Sentence& s : dataset.sentences) {
    json record = {{"input", s.input}, {"output", s.output}};
    if (format == DatasetFormat::kJsonLines) {
      out << record.dump() << '\n';
    } else {
      array.push_back(std::move(record));
    }
  }
  if (format == DatasetFormat::kJsonArray) out << array.dump(1) << '\n';
}

EvalReport MakeReport(size_t tp, size_t fp, size_t fn) {
  EvalReport r{tp, fp, fn, 0.0, 0.0, 0.0};
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                            : (fn == 0 ? 1.0 : 0.0);
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                         : (fp == 0 ? 1.0 : 0.0);
  const double sum = r.precision + r.recall;
  r.f1 = sum > 0.0 ? 2.0 * r.precision * r.recall / sum : 0.0;
  return r;
}

EvalReport Evaluate(const Dataset& gold, std::span<const std::vector<std::string>> predictions) {
  if (predictions.size() != gold.sentences.size()) {
    throw std::invalid_argument(fmt::format("Evaluate: {} predicted sentences for {} gold",
                                            predictions.size(), gold.sentences.size()));
  }
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  for (size_t s = 0; s < predictions.size(); ++s) {
    const Sentence& g = gold.sentences[s];
    const auto& pred = predictions[s];
    if (pred.size() != g.input.size() || g.output.size() != g.input.size()) {
      throw std::invalid_argument(
          fmt::format("Evaluate: sentence {} has {} predicted tokens for {} gold", s,
                      pred.size(), g.input.size()));
    }
    for (size_t t = 0; t < pred.size(); ++t) {
      const std::string source = ToLowerUtf8(g.input[t]);
      const std::string target = ToLowerUtf8(g.output[t]);
      const std::string guess = ToLowerUtf8(pred[t]);
      const bool needed = target != source;
      const bool changed = guess != source;
      const bool correct = changed && guess == target;
      if (correct && needed) ++tp;
      if (changed && guess != target) ++fp;
      if (needed && !correct) ++fn;
    }
  }
  return MakeReport(tp, fp, fn);
}

std::string ReportTable(std::span<const std::pair<std::string, EvalReport>> rows, bool csv) {
  if (rows.empty()) throw std::invalid_argument("ReportTable: no reports");
  std::string out;
  if (csv) {
    out += "model,precision,recall,f1\n";
    for (const auto& [name, r] : rows) {
      out += fmt::format("{},{:.2f},{:.2f},{:.2f}\n", name, 100.0 * r.precision, 100.0 * r.recall,
                         100.0 * r.f1);
    }
    return out;
  }
  size_t width = 5;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  out += fmt::format("{:<{}}  {:>9} {:>9} {:>9}\n", "Model", width, "Precision", "Recall", "F1");
  for (const auto& [name, r] : rows) {
    out += fmt::format("{:<{}}  {:>9.2f} {:>9.2f} {:>9.2f}\n", name, width, 100.0 * r.precision,
                       100.0 * r.recall, 100.0 * r.f1);
  }
  return out;
}

double SpearmanCorrelation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("SpearmanCorrelation: size mismatch");
  if (a.size() < 2) return 0.0;
  const auto ra = AverageRanks(a);
  const auto rb = AverageRanks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  for (size_t k = 0; k < ra.size(); ++k) {
    cov += (ra[k] - mean) * (rb[k] - mean);
    va += (ra[k] - mean) * (ra[k] - mean);
    vb += (rb[k] - mean) * (rb[k] - mean);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace lexnorm
