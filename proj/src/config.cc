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


#include "lexnorm/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "lexnorm/error.h"

namespace lexnorm {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(fmt::format("config key '{}': cannot parse '{}'", key, text));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ConfigError(fmt::format("config key '{}': value must be finite", key));
    }
  }
  return value;
}

int PositiveInt(const std::string& key, const std::string& text) {
  const int v = ParseNumber<int>(key, text);
  if (v <= 0) throw ConfigError(fmt::format("config key '{}': must be positive, got {}", key, v));
  return v;
}

double PositiveDouble(const std::string& key, const std::string& text) {
  const double v = ParseNumber<double>(key, text);
  if (v <= 0) throw ConfigError(fmt::format("config key '{}': must be positive, got {}", key, text));
  return v;
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field IntField(std::string key, T RunConfig::*member) {
  return {std::move(key),
          [member](RunConfig& c, const std::string& k, const std::string& v) {
            c.*member = PositiveInt(k, v);
          },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field DoubleField(std::string key, double RunConfig::*member) {
  return {std::move(key),
          [member](RunConfig& c, const std::string& k, const std::string& v) {
            c.*member = PositiveDouble(k, v);
          },
          [member](const RunConfig& c) { return fmt::format("{}", c.*member); }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back({"seed",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.seed = ParseNumber<uint64_t>(k, v);
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    f.push_back(IntField("workers", &RunConfig::workers));
    f.push_back(IntField("per_word", &RunConfig::per_word));
    for (size_t k = 0; k < kNumNoisePatterns; ++k) {
      f.push_back({fmt::format("weight.{}", PatternName(kAllNoisePatterns[k])),
                   [k](RunConfig& c, const std::string& key, const std::string& v) {
                     const double w = ParseNumber<double>(key, v);
                     if (w < 0) throw ConfigError(fmt::format("config key '{}': negative", key));
                     c.pattern_weights[k] = w;
                   },
                   [k](const RunConfig& c) { return fmt::format("{}", c.pattern_weights[k]); }});
    }
    f.push_back(IntField("char_dim", &RunConfig::char_dim));
    f.push_back(IntField("leven_hidden", &RunConfig::leven_hidden));
    f.push_back(IntField("metaphone_hidden", &RunConfig::metaphone_hidden));
    f.push_back(IntField("siamese_epochs", &RunConfig::siamese_epochs));
    f.push_back(IntField("siamese_batch", &RunConfig::siamese_batch));
    f.push_back(DoubleField("siamese_lr", &RunConfig::siamese_lr));
    f.push_back({"validation_fraction",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   const double x = ParseNumber<double>(k, v);
                   if (x < 0 || x >= 1) {
                     throw ConfigError(fmt::format("config key '{}': must be in [0, 1)", k));
                   }
                   c.validation_fraction = x;
                 },
                 [](const RunConfig& c) { return fmt::format("{}", c.validation_fraction); }});
    f.push_back(IntField("patience", &RunConfig::patience));
    f.push_back(IntField("emb", &RunConfig::emb));
    f.push_back(IntField("encoder_hidden", &RunConfig::encoder_hidden));
    f.push_back(IntField("detector_hidden", &RunConfig::detector_hidden));
    f.push_back(IntField("decoder_emb", &RunConfig::decoder_emb));
    f.push_back(IntField("normalizer_epochs", &RunConfig::normalizer_epochs));
    f.push_back(IntField("normalizer_batch", &RunConfig::normalizer_batch));
    f.push_back(DoubleField("normalizer_lr", &RunConfig::normalizer_lr));
    f.push_back(IntField("max_len", &RunConfig::max_len));
    f.push_back(DoubleField("clip_norm", &RunConfig::clip_norm));
    return f;
  }();
  return fields;
}

}  // namespace

SiameseConfig RunConfig::Siamese(SimilarityMode mode) const {
  SiameseConfig c;
  c.char_dim = char_dim;
  c.hidden = mode == SimilarityMode::kLevenshtein ? leven_hidden : metaphone_hidden;
  c.epochs = siamese_epochs;
  c.batch_size = siamese_batch;
  c.learning_rate = siamese_lr;
  c.seed = seed;
  c.validation_fraction = validation_fraction;
  c.patience = patience;
  c.clip_norm = clip_norm;
  return c;
}

NormalizerConfig RunConfig::Normalizer() const {
  NormalizerConfig c;
  c.emb_dim = emb;
  c.encoder_hidden = encoder_hidden;
  c.detector_hidden = detector_hidden;
  c.decoder_emb_dim = decoder_emb;
  c.max_len = max_len;
  c.epochs = normalizer_epochs;
  c.batch_size = normalizer_batch;
  c.learning_rate = normalizer_lr;
  c.clip_norm = clip_norm;
  c.seed = seed;
  return c;
}

NoiseConfig RunConfig::Noise() const {
  NoiseConfig c;
  c.pattern_weights = pattern_weights;
  return c;
}

void SetConfigValue(RunConfig& config, const std::string& key, const std::string& value) {
  for (const Field& field : Fields()) {
    if (field.key == key) {
      field.set(config, key, value);
      return;
    }
  }
  throw ConfigError(fmt::format("unknown config key '{}'", key));
}

void ApplyConfigText(RunConfig& config, std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected key = value", source, line_number));
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    try {
      SetConfigValue(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", source, line_number, e.what()));
    }
  }
}

RunConfig LoadConfig(const std::optional<std::filesystem::path>& path,
                     const std::map<std::string, std::string>& overrides,
                     const std::optional<std::string>& env_seed) {
  RunConfig config;
  if (env_seed) {
    try {
      SetConfigValue(config, "seed", *env_seed);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("LEXNORM_SEED: {}", e.what()));
    }
  }
  if (path) {
    std::ifstream in(*path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot read config file {}", path->string()));
    std::ostringstream text;
    text << in.rdbuf();
    ApplyConfigText(config, text.str(), path->string());
  }
  for (const auto& [key, value] : overrides) SetConfigValue(config, key, value);
  return config;
}

std::string FormatConfig(const RunConfig& config) {
  std::string out;
  for (const Field& field : Fields()) out += fmt::format("{} = {}\n", field.key, field.get(config));
  return out;
}

}  // namespace lexnorm
