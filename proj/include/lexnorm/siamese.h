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

#ifndef LEXNORM_SIAMESE_H_
#define LEXNORM_SIAMESE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexnorm/checkpoint.h"
#include "lexnorm/neural.h"
#include "lexnorm/noise.h"

namespace lexnorm {

// Character inventory of a siamese encoder. Index 0 is reserved for unseen
// characters.
class CharVocab {
 public:
  static constexpr int kUnk = 0;
  static constexpr std::string_view kUnkToken = "<unk>";

  CharVocab() = default;
  // Every character of every pair, sorted by scalar value.
  static CharVocab FromPairs(std::span<const SimilarityPair> pairs);
  static CharVocab FromEntries(std::span<const std::string> entries);

  int Index(char32_t c) const;
  int size() const { return static_cast<int>(chars_.size()) + 1; }
  // UTF-8 entries in index order, starting with kUnkToken.
  std::vector<std::string> Entries() const;

 private:
  std::u32string chars_;
  std::unordered_map<char32_t, int> index_;
};

// Siamese hyperparameters. Hidden sizes come from {10, 20, 30, 40, 50}:
// 20 for Levenshtein features alone, 50 for phonetic features alone, 10 each
// when both feed the normalizer.
struct SiameseConfig {
  int char_dim = 30;
  int hidden = 20;
  int epochs = 30;
  int batch_size = 32;
  double learning_rate = 1e-3;
  uint64_t seed = 42;
  // Early stopping on a held-out slice of the pairs; disabled when the
  // fraction is 0 or fewer than 10 pairs are given.
  double validation_fraction = 0.1;
  int patience = 5;
  double clip_norm = 5.0;
};

inline constexpr int kLevenshteinHidden = 20;
inline constexpr int kMetaphoneHidden = 50;
inline constexpr int kCombinedHidden = 10;

int DefaultHidden(SimilarityMode mode);

// Character embedding table feeding a bi-LSTM; a word's vector is the
// concatenation of the two terminal hidden states. Deep Levenshtein and Deep
// Metaphone share this structure and differ only in their training targets,
// which is what `mode` records.
class SiameseEncoder {
 public:
  // Activations of one word, kept for backpropagation.
  struct Trace {
    std::vector<int> ids;
    nn::BiLstmTrace lstm;
  };

  SiameseEncoder() = default;
  // All weights zero.
  SiameseEncoder(SimilarityMode mode, CharVocab vocab, int char_dim, int hidden);

  // Uniform weights in [-0.08, 0.08] and forget-gate bias 1.
  void InitWeights(Rng& rng);

  SimilarityMode mode() const { return mode_; }
  int char_dim() const { return static_cast<int>(char_emb_.value.cols()); }
  int hidden_dim() const { return lstm_.hidden_dim(); }
  int output_dim() const { return 2 * hidden_dim(); }
  const CharVocab& vocab() const { return vocab_; }

  // Throws std::invalid_argument on an empty word.
  nn::Vector EncodeWord(std::u32string_view word) const;
  nn::Vector EncodeWordUtf8(std::string_view word) const;

  // (cos(c_x, c_y) + 1) / 2; exactly 1 when the two encodings coincide.
  double PredictSimilarity(std::string_view x, std::string_view y) const;

  nn::Vector Forward(std::u32string_view word, Trace* trace) const;
  // Accumulates parameter gradients for d loss / d output.
  void Backward(const Trace& trace, const nn::Vector& d_output);

  nn::ParameterList Parameters();
  uint64_t Fingerprint() const;

  // Keys are prefixed with `prefix` so encoders can nest in other models.
  void AppendToCheckpoint(Checkpoint& checkpoint, const std::string& prefix) const;
  Checkpoint ToCheckpoint() const;
  static SiameseEncoder FromCheckpoint(const Checkpoint& checkpoint, const std::string& prefix = "");

  // Test access to the raw tables.
  nn::Parameter& char_embedding() { return char_emb_; }
  nn::BiLstm& lstm() { return lstm_; }

 private:
  SimilarityMode mode_ = SimilarityMode::kLevenshtein;
  CharVocab vocab_;
  nn::Parameter char_emb_;
  nn::BiLstm lstm_;
};

// (0.5 * (cos(c_x, c_y) + 1) - s)^2. Throws std::invalid_argument on a
// dimension mismatch or a target outside [0, 1].
double SiameseLoss(const nn::Vector& c_x, const nn::Vector& c_y, double target);

// Loss of one pair, accumulating gradients into the encoder.
double SiamesePairLoss(SiameseEncoder& model, std::string_view x, std::string_view y,
                       double target);

struct SiameseTrainResult {
  SiameseEncoder model;
  // Mean training loss per epoch, running average over the epoch's batches.
  std::vector<double> loss_curve;
  std::vector<double> validation_curve;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool converged = false;
  int epochs_run = 0;
};

// Trains an encoder with Adam on the mean pair loss. Every pair must carry
// `mode`; mixing Levenshtein and phonetic targets is rejected.
SiameseTrainResult TrainSiamese(std::span<const SimilarityPair> pairs, SimilarityMode mode,
                                const SiameseConfig& config);

// Mean pair loss without touching gradients.
double MeanPairLoss(const SiameseEncoder& model, std::span<const SimilarityPair> pairs);

}  // namespace lexnorm

#endif  // LEXNORM_SIAMESE_H_
