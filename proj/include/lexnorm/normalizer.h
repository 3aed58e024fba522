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

#ifndef LEXNORM_NORMALIZER_H_
#define LEXNORM_NORMALIZER_H_

// Two-stage normalizer. Stage one flags non-standard tokens; stage two
// decodes a replacement per flagged position with an attention LSTM over the
// encoder states, emitting either a target word or COPY. The encoder reads
// each token as [token embedding; Levenshtein feature; phonetic feature],
// where the features come from frozen siamese encoders.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexnorm/checkpoint.h"
#include "lexnorm/evalkit.h"
#include "lexnorm/neural.h"
#include "lexnorm/siamese.h"

namespace lexnorm {

// Dense token index with reserved entries at fixed positions.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kCopy = 4;
  static constexpr int kNumReserved = 5;

  Vocab();
  // Throws DataError unless the reserved entries lead, each exactly once.
  static Vocab FromEntries(std::span<const std::string> entries);

  int Add(const std::string& token);
  // kUnk for unknown tokens.
  int Index(const std::string& token) const;
  bool Contains(const std::string& token) const { return index_.contains(token); }
  const std::string& Token(int index) const { return tokens_.at(static_cast<size_t>(index)); }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& Entries() const { return tokens_; }

  static bool IsReserved(int index) { return index >= 0 && index < kNumReserved; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct NormalizerConfig {
  int emb_dim = 100;
  int encoder_hidden = 32;
  int detector_hidden = 16;
  // Target-side embedding fed back into the decoder.
  int decoder_emb_dim = 32;
  bool use_levenshtein = false;
  bool use_metaphone = false;
  int max_len = 64;
  int epochs = 100;
  int batch_size = 4;
  double learning_rate = 3e-3;
  double clip_norm = 5.0;
  uint64_t seed = 42;
};

struct NormalizerTrainingLog {
  std::vector<double> epoch_loss;
};

class NormalizerModel {
 public:
  NormalizerModel() = default;
  // Zero weights. Feature encoders must be given exactly when enabled in
  // `config`; otherwise throws ConfigError.
  NormalizerModel(const NormalizerConfig& config, Vocab source, Vocab target,
                  std::optional<SiameseEncoder> leven, std::optional<SiameseEncoder> phone);

  void InitWeights(Rng& rng);

  // Encoder input width: emb_dim plus 2H for each enabled feature encoder.
  int input_width() const;
  int state_dim() const { return encoder_.output_dim(); }
  const NormalizerConfig& config() const { return config_; }
  const Vocab& source_vocab() const { return source_; }
  const Vocab& target_vocab() const { return target_; }
  const std::optional<SiameseEncoder>& leven_encoder() const { return leven_; }
  const std::optional<SiameseEncoder>& phone_encoder() const { return phone_; }

  // [token embedding; leven feature; phone feature] for the lowercased token,
  // with the UNK row for unknown tokens. Throws std::invalid_argument on an
  // empty token.
  nn::Vector FeaturizeToken(const std::string& token) const;

  // One encoder state per token. Throws std::invalid_argument for an empty
  // sentence or one longer than max_len.
  std::vector<nn::Vector> EncodeSentence(std::span<const std::string> tokens) const;

  std::vector<double> DetectProbabilities(std::span<const nn::Vector> states) const;
  // p > 0.5; a probability of exactly 0.5 is not flagged.
  std::vector<bool> DetectFlags(std::span<const nn::Vector> states) const;

  // Greedy decoding. Unflagged positions, and flagged positions decoded to a
  // reserved entry (COPY, UNK, ...), keep the source token verbatim.
  std::vector<std::string> DecodeTokens(std::span<const nn::Vector> states,
                                        const std::vector<bool>& flags,
                                        std::span<const std::string> tokens) const;

  // Encode, detect, decode. Output length always equals input length.
  std::vector<std::string> Normalize(std::span<const std::string> tokens) const;

  // Joint loss of one aligned sentence, averaged over its tokens: detector
  // cross-entropy plus teacher-forced decoder cross-entropy. Accumulates
  // gradients into the trainable parameters only.
  double SentenceLoss(const Sentence& sentence);

  // Trainable parameters; the feature encoders are not included.
  nn::ParameterList Parameters();
  uint64_t Fingerprint() const;

  Checkpoint ToCheckpoint() const;
  static NormalizerModel FromCheckpoint(const Checkpoint& checkpoint);

  // Gold decoder index at one position: COPY when the token is unchanged.
  int GoldIndex(const std::string& input, const std::string& output) const;

  nn::Parameter& token_embedding() { return token_emb_; }

 private:
  nn::Vector Features(const std::string& lowered) const;
  void PrecomputeFeatures();
  void CheckLength(size_t n) const;

  NormalizerConfig config_;
  Vocab source_;
  Vocab target_;
  std::optional<SiameseEncoder> leven_;
  std::optional<SiameseEncoder> phone_;

  nn::Parameter token_emb_;
  nn::BiLstm encoder_;
  nn::BiLstm detector_;
  nn::Parameter detector_w_;
  nn::Parameter detector_b_;
  nn::Parameter target_emb_;
  nn::Lstm decoder_;
  nn::Parameter out_w_;
  nn::Parameter out_b_;

  // Features of every source-vocabulary token, filled at construction and
  // read-only afterwards.
  std::unordered_map<std::string, nn::Vector> feature_cache_;
};

// Builds vocabularies from `train` (source: every input token; target: every
// output that differs from its input), initializes from config.seed and
// trains with Adam. Feature encoders are copied in and never updated.
// Throws std::invalid_argument for an empty or misaligned dataset and
// ConfigError when an enabled feature has no encoder.
NormalizerModel TrainNormalizer(const Dataset& train, const SiameseEncoder* leven,
                                const SiameseEncoder* phone, const NormalizerConfig& config,
                                NormalizerTrainingLog* log = nullptr);

// Runs Normalize over every input sentence of `data`.
std::vector<std::vector<std::string>> Predict(const NormalizerModel& model, const Dataset& data);

}  // namespace lexnorm

#endif  // LEXNORM_NORMALIZER_H_
