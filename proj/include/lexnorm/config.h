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


#ifndef LEXNORM_CONFIG_H_
#define LEXNORM_CONFIG_H_

// Run configuration shared by the command-line tool. Values resolve from, in
// increasing precedence: built-in defaults, the LEXNORM_SEED environment
// variable (seed only), a key=value file, and explicit overrides.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "lexnorm/noise.h"
#include "lexnorm/normalizer.h"
#include "lexnorm/siamese.h"

namespace lexnorm {

struct RunConfig {
  uint64_t seed = 42;
  int workers = 1;

  int per_word = 10;
  std::array<double, kNumNoisePatterns> pattern_weights = NoiseConfig{}.pattern_weights;

  int char_dim = 30;
  int leven_hidden = kLevenshteinHidden;
  int metaphone_hidden = kMetaphoneHidden;
  int siamese_epochs = 30;
  int siamese_batch = 32;
  double siamese_lr = 1e-3;
  double validation_fraction = 0.1;
  int patience = 5;

  int emb = 100;
  int encoder_hidden = 32;
  int detector_hidden = 16;
  int decoder_emb = 32;
  int normalizer_epochs = 100;
  int normalizer_batch = 4;
  double normalizer_lr = 3e-3;
  int max_len = 64;

  double clip_norm = 5.0;

  SiameseConfig Siamese(SimilarityMode mode) const;
  NormalizerConfig Normalizer() const;
  NoiseConfig Noise() const;
};

// Sets one key from its text form. Throws ConfigError for an unknown key or
// an unparsable or out-of-range value.
void SetConfigValue(RunConfig& config, const std::string& key, const std::string& value);

// Applies a key=value file: one assignment per line, '#' starts a comment,
// blank lines ignored. Errors name the file line.
void ApplyConfigText(RunConfig& config, std::string_view text, const std::string& source);

// Resolves a configuration. `env_seed` is the raw LEXNORM_SEED value, if set.
// Overrides are applied in key order after the file.
RunConfig LoadConfig(const std::optional<std::filesystem::path>& path,
                     const std::map<std::string, std::string>& overrides,
                     const std::optional<std::string>& env_seed);

// Every key with its resolved value, one "key = value" line each, in a form
// that ApplyConfigText reads back.
std::string FormatConfig(const RunConfig& config);

}  // namespace lexnorm

#endif  // LEXNORM_CONFIG_H_
