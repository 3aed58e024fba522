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

#include "lexnorm/siamese.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "lexnorm/error.h"
#include "lexnorm/text.h"

namespace lexnorm {
namespace {

int ParseInt(const Checkpoint& checkpoint, const std::string& key) {
  const std::string& text = checkpoint.Config(key);
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw DataError(fmt::format("checkpoint: config '{}' is not an integer: '{}'", key, text));
}

}  // namespace

CharVocab CharVocab::FromPairs(std::span<const SimilarityPair> pairs) {
  std::set<char32_t> chars;
  for (const SimilarityPair& pair : pairs) {
    for (char32_t c : DecodeUtf8(pair.x)) chars.insert(c);
    for (char32_t c : DecodeUtf8(pair.y)) chars.insert(c);
  }
  std::vector<std::string> entries = {std::string(kUnkToken)};
  for (char32_t c : chars) entries.push_back(EncodeUtf8(std::u32string(1, c)));
  return FromEntries(entries);
}

CharVocab CharVocab::FromEntries(std::span<const std::string> entries) {
  if (entries.empty() || entries[0] != kUnkToken) {
    throw DataError("character vocabulary must start with " + std::string(kUnkToken));
  }
  CharVocab vocab;
  for (size_t k = 1; k < entries.size(); ++k) {
    const Word decoded = DecodeUtf8(entries[k]);
    if (decoded.size() != 1) {
      throw DataError(fmt::format("character vocabulary entry {} is not one character", k));
    }
    if (!vocab.index_.emplace(decoded[0], static_cast<int>(k)).second) {
      throw DataError(fmt::format("character vocabulary entry {} is duplicated", k));
    }
    vocab.chars_.push_back(decoded[0]);
  }
  return vocab;
}

int CharVocab::Index(char32_t c) const {
  const auto it = index_.find(c);
  return it == index_.end() ? kUnk : it->second;
}

std::vector<std::string> CharVocab::Entries() const {
  std::vector<std::string> out = {std::string(kUnkToken)};
  for (char32_t c : chars_) out.push_back(EncodeUtf8(std::u32string(1, c)));
  return out;
}

int DefaultHidden(SimilarityMode mode) {
  return mode == SimilarityMode::kLevenshtein ? kLevenshteinHidden : kMetaphoneHidden;
}

SiameseEncoder::SiameseEncoder(SimilarityMode mode, CharVocab vocab, int char_dim, int hidden)
    : mode_(mode), vocab_(std::move(vocab)) {
  if (char_dim <= 0) throw std::invalid_argument("SiameseEncoder: char_dim must be positive");
  if (hidden <= 0) throw std::invalid_argument("SiameseEncoder: hidden must be positive");
  char_emb_ = nn::Parameter("char_emb", vocab_.size(), char_dim);
  lstm_ = nn::BiLstm("lstm", char_dim, hidden);
}

void SiameseEncoder::InitWeights(Rng& rng) {
  nn::UniformInit(Parameters(), rng);
  lstm_.SetForgetBias(1.0);
}

nn::Vector SiameseEncoder::Forward(std::u32string_view word, Trace* trace) const {
  if (word.empty()) throw std::invalid_argument("SiameseEncoder: empty word");
  std::vector<nn::Vector> xs;
  xs.reserve(word.size());
  std::vector<int> ids;
  for (char32_t c : word) {
    const int id = vocab_.Index(c);
    ids.push_back(id);
    xs.push_back(char_emb_.value.row(id).transpose());
  }
  nn::BiLstmOutput out = lstm_.Encode(xs, trace != nullptr ? &trace->lstm : nullptr);
  if (trace != nullptr) trace->ids = std::move(ids);
  return std::move(out.final);
}

void SiameseEncoder::Backward(const Trace& trace, const nn::Vector& d_output) {
  const auto dxs = lstm_.Backward(trace.lstm, {}, &d_output);
  for (size_t t = 0; t < trace.ids.size(); ++t) {
    char_emb_.grad.row(trace.ids[t]) += dxs[t].transpose();
  }
}

nn::Vector SiameseEncoder::EncodeWord(std::u32string_view word) const {
  return Forward(word, nullptr);
}

nn::Vector SiameseEncoder::EncodeWordUtf8(std::string_view word) const {
  return EncodeWord(DecodeUtf8(word));
}

double SiameseEncoder::PredictSimilarity(std::string_view x, std::string_view y) const {
  const nn::Vector cx = EncodeWordUtf8(x);
  const nn::Vector cy = EncodeWordUtf8(y);
  if (cx == cy) return 1.0;
  return 0.5 * (nn::Cosine(cx, cy) + 1.0);
}

nn::ParameterList SiameseEncoder::Parameters() {
  nn::ParameterList out = {&char_emb_};
  for (nn::Parameter* p : lstm_.Parameters()) out.push_back(p);
  return out;
}

uint64_t SiameseEncoder::Fingerprint() const {
  auto* self = const_cast<SiameseEncoder*>(this);
  return nn::Fingerprint(self->Parameters());
}

void SiameseEncoder::AppendToCheckpoint(Checkpoint& checkpoint, const std::string& prefix) const {
  checkpoint.config[prefix + "mode"] = std::string(ModeName(mode_));
  checkpoint.config[prefix + "char_dim"] = std::to_string(char_dim());
  checkpoint.config[prefix + "hidden"] = std::to_string(hidden_dim());
  checkpoint.vocabs[prefix + "chars"] = vocab_.Entries();
  auto* self = const_cast<SiameseEncoder*>(this);
  for (const nn::Parameter* p : self->Parameters()) {
    checkpoint.params.emplace_back(prefix + p->name, ToTensor(p->value));
  }
}

Checkpoint SiameseEncoder::ToCheckpoint() const {
  Checkpoint checkpoint;
  checkpoint.type = ModelType::kSiamese;
  AppendToCheckpoint(checkpoint, "");
  return checkpoint;
}

SiameseEncoder SiameseEncoder::FromCheckpoint(const Checkpoint& checkpoint,
                                              const std::string& prefix) {
  // Nested encoders live inside other model types; only a bare one must be
  // tagged as siamese.
  if (prefix.empty() && checkpoint.type != ModelType::kSiamese) {
    throw DataError("checkpoint holds a normalizer, not a siamese encoder");
  }
  const auto mode = ParseMode(checkpoint.Config(prefix + "mode"));
  if (!mode) throw DataError("checkpoint: unknown siamese mode");
  const int char_dim = ParseInt(checkpoint, prefix + "char_dim");
  const int hidden = ParseInt(checkpoint, prefix + "hidden");
  if (char_dim <= 0 || hidden <= 0) throw DataError("checkpoint: non-positive siamese dimension");
  SiameseEncoder model(*mode, CharVocab::FromEntries(checkpoint.Vocab(prefix + "chars")),
                       char_dim, hidden);
  for (nn::Parameter* p : model.Parameters()) {
    const std::string name = prefix + p->name;
    p->value = ToMatrix(checkpoint.Param(name), p->value.rows(), p->value.cols(), name);
  }
  return model;
}

double SiameseLoss(const nn::Vector& c_x, const nn::Vector& c_y, double target) {
  if (c_x.size() != c_y.size()) throw std::invalid_argument("SiameseLoss: dimension mismatch");
  if (!(target >= 0.0 && target <= 1.0)) {
    throw std::invalid_argument("SiameseLoss: target outside [0, 1]");
  }
  const double diff = 0.5 * (nn::Cosine(c_x, c_y) + 1.0) - target;
  return diff * diff;
}

double SiamesePairLoss(SiameseEncoder& model, std::string_view x, std::string_view y,
                       double target) {
  SiameseEncoder::Trace tx;
  SiameseEncoder::Trace ty;
  const nn::Vector cx = model.Forward(DecodeUtf8(x), &tx);
  const nn::Vector cy = model.Forward(DecodeUtf8(y), &ty);
  nn::Vector dcx;
  nn::Vector dcy;
  const double cos = nn::CosineWithGrad(cx, cy, &dcx, &dcy);
  const double diff = 0.5 * (cos + 1.0) - target;
  // d/dcos (0.5 (cos + 1) - s)^2 = diff
  model.Backward(tx, diff * dcx);
  model.Backward(ty, diff * dcy);
  return diff * diff;
}

double MeanPairLoss(const SiameseEncoder& model, std::span<const SimilarityPair> pairs) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const SimilarityPair& pair : pairs) {
    total += SiameseLoss(model.EncodeWordUtf8(pair.x), model.EncodeWordUtf8(pair.y), pair.target);
  }
  return total / static_cast<double>(pairs.size());
}

SiameseTrainResult TrainSiamese(std::span<const SimilarityPair> pairs, SimilarityMode mode,
                                const SiameseConfig& config) {
  if (pairs.empty()) throw std::invalid_argument("TrainSiamese: no training pairs");
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (pairs[k].mode != mode) {
      throw std::invalid_argument(fmt::format(
          "TrainSiamese: pair {} has mode '{}' but the model is '{}'", k,
          ModeName(pairs[k].mode), ModeName(mode)));
    }
  }
  if (config.hidden <= 0) throw std::invalid_argument("TrainSiamese: hidden must be positive");
  if (config.epochs <= 0 || config.batch_size <= 0) {
    throw std::invalid_argument("TrainSiamese: epochs and batch_size must be positive");
  }

  SiameseTrainResult result;
  result.model = SiameseEncoder(mode, CharVocab::FromPairs(pairs), config.char_dim, config.hidden);
  {
    Rng init_rng(DeriveSeed(config.seed, SeedStream::kSiameseInit));
    result.model.InitWeights(init_rng);
  }

  std::vector<SimilarityPair> train(pairs.begin(), pairs.end());
  std::vector<SimilarityPair> validation;
  if (config.validation_fraction > 0.0 && pairs.size() >= 10) {
    Rng split_rng(DeriveSeed(config.seed, SeedStream::kSplit));
    split_rng.Shuffle(std::span(train));
    const size_t n_val = std::max<size_t>(
        1, static_cast<size_t>(std::lround(config.validation_fraction * pairs.size())));
    validation.assign(train.end() - static_cast<std::ptrdiff_t>(n_val), train.end());
    train.resize(train.size() - n_val);
  }

  SiameseEncoder& model = result.model;
  const nn::ParameterList params = model.Parameters();
  nn::Adam adam(params, {.learning_rate = config.learning_rate});
  Rng shuffle_rng(DeriveSeed(config.seed, SeedStream::kSiameseShuffle));

  result.initial_loss = MeanPairLoss(model, train);
  double best_validation = std::numeric_limits<double>::infinity();
  int stalled = 0;
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), size_t{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.Shuffle(std::span(order));
    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      nn::ZeroGrads(params);
      for (size_t k = start; k < end; ++k) {
        const SimilarityPair& pair = train[order[k]];
        epoch_loss += SiamesePairLoss(model, pair.x, pair.y, pair.target);
      }
      nn::ScaleGrads(params, 1.0 / static_cast<double>(end - start));
      nn::ClipGradNorm(params, config.clip_norm);
      adam.Step();
    }
    result.loss_curve.push_back(epoch_loss / static_cast<double>(train.size()));
    ++result.epochs_run;

    if (!validation.empty()) {
      const double v = MeanPairLoss(model, validation);
      result.validation_curve.push_back(v);
      if (v < best_validation) {
        best_validation = v;
        stalled = 0;
      } else if (++stalled >= config.patience) {
        break;
      }
    }
  }
  nn::ZeroGrads(params);
  result.final_loss = MeanPairLoss(model, train);
  result.converged = result.final_loss < result.initial_loss || result.final_loss == 0.0;
  return result;
}

}  // namespace lexnorm
