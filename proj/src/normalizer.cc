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

#include "lexnorm/normalizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "lexnorm/error.h"
#include "lexnorm/text.h"

namespace lexnorm {
namespace {

constexpr std::string_view kReservedTokens[Vocab::kNumReserved] = {"<pad>", "<unk>", "<bos>",
                                                                   "<eos>", "<copy>"};

// Softmax in place; returns log-sum-exp.
double Softmax(const nn::Vector& logits, nn::Vector* probs) {
  const double max = logits.maxCoeff();
  *probs = (logits.array() - max).exp();
  const double sum = probs->sum();
  *probs /= sum;
  return max + std::log(sum);
}

// log(1 + e^x) without overflow.
double Softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

nn::Matrix StackColumns(std::span<const nn::Vector> columns) {
  nn::Matrix m(columns.front().size(), static_cast<Eigen::Index>(columns.size()));
  for (size_t k = 0; k < columns.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = columns[k];
  return m;
}

struct DecoderStep {
  nn::LstmState state;
  nn::LstmStepCache cache;
  nn::Vector attention;
  nn::Vector context;
  nn::Vector hidden_context;  // [h; context]
  nn::Vector logits;
};

bool ParseBool(const std::string& text, const std::string& key) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw DataError(fmt::format("checkpoint: config '{}' is not a boolean: '{}'", key, text));
}

int ParseInt(const Checkpoint& checkpoint, const std::string& key) {
  const std::string& text = checkpoint.Config(key);
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw DataError(fmt::format("checkpoint: config '{}' is not a positive integer: '{}'", key, text));
}

}  // namespace

Vocab::Vocab() {
  for (std::string_view token : kReservedTokens) Add(std::string(token));
}

Vocab Vocab::FromEntries(std::span<const std::string> entries) {
  if (entries.size() < kNumReserved) throw DataError("vocabulary is missing reserved entries");
  for (int k = 0; k < kNumReserved; ++k) {
    if (entries[static_cast<size_t>(k)] != kReservedTokens[k]) {
      throw DataError(fmt::format("vocabulary entry {} should be {}", k, kReservedTokens[k]));
    }
  }
  Vocab vocab;
  for (size_t k = kNumReserved; k < entries.size(); ++k) {
    if (vocab.Contains(entries[k])) {
      throw DataError(fmt::format("vocabulary entry {} ('{}') is duplicated", k, entries[k]));
    }
    vocab.Add(entries[k]);
  }
  return vocab;
}

int Vocab::Add(const std::string& token) {
  const auto [it, inserted] = index_.emplace(token, static_cast<int>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

int Vocab::Index(const std::string& token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

NormalizerModel::NormalizerModel(const NormalizerConfig& config, Vocab source, Vocab target,
                                 std::optional<SiameseEncoder> leven,
                                 std::optional<SiameseEncoder> phone)
    : config_(config),
      source_(std::move(source)),
      target_(std::move(target)),
      leven_(std::move(leven)),
      phone_(std::move(phone)) {
  if (config_.use_levenshtein && !leven_) {
    throw ConfigError("Levenshtein features are enabled but no Levenshtein encoder was given");
  }
  if (config_.use_metaphone && !phone_) {
    throw ConfigError("phonetic features are enabled but no Metaphone encoder was given");
  }
  if (!config_.use_levenshtein) leven_.reset();
  if (!config_.use_metaphone) phone_.reset();
  if (config_.emb_dim <= 0 || config_.encoder_hidden <= 0 || config_.detector_hidden <= 0 ||
      config_.decoder_emb_dim <= 0 || config_.max_len <= 0) {
    throw ConfigError("normalizer dimensions must be positive");
  }

  const int h_enc = config_.encoder_hidden;
  const int state = 2 * h_enc;
  token_emb_ = nn::Parameter("token_emb", source_.size(), config_.emb_dim);
  encoder_ = nn::BiLstm("encoder", input_width(), h_enc);
  detector_ = nn::BiLstm("detector", state, config_.detector_hidden);
  detector_w_ = nn::Parameter("detector_out.w", 1, 2 * config_.detector_hidden);
  detector_b_ = nn::Parameter("detector_out.b", 1, 1);
  target_emb_ = nn::Parameter("target_emb", target_.size(), config_.decoder_emb_dim);
  // Decoder width equals the encoder state width so attention is a plain dot
  // product.
  decoder_ = nn::Lstm("decoder", config_.decoder_emb_dim + state, state);
  out_w_ = nn::Parameter("decoder_out.w", target_.size(), 2 * state);
  out_b_ = nn::Parameter("decoder_out.b", target_.size(), 1);
  PrecomputeFeatures();
}

void NormalizerModel::InitWeights(Rng& rng) {
  nn::UniformInit(Parameters(), rng);
  encoder_.SetForgetBias(1.0);
  detector_.SetForgetBias(1.0);
  decoder_.SetForgetBias(1.0);
}

int NormalizerModel::input_width() const {
  int width = config_.emb_dim;
  if (leven_) width += leven_->output_dim();
  if (phone_) width += phone_->output_dim();
  return width;
}

void NormalizerModel::PrecomputeFeatures() {
  feature_cache_.clear();
  if (!leven_ && !phone_) return;
  for (int k = Vocab::kNumReserved; k < source_.size(); ++k) {
    const std::string& token = source_.Token(k);
    if (token.empty()) continue;
    feature_cache_.emplace(token, Features(token));
  }
}

nn::Vector NormalizerModel::Features(const std::string& lowered) const {
  if (const auto it = feature_cache_.find(lowered); it != feature_cache_.end()) return it->second;
  const int leven_dim = leven_ ? leven_->output_dim() : 0;
  const int phone_dim = phone_ ? phone_->output_dim() : 0;
  nn::Vector out(leven_dim + phone_dim);
  const Word chars = DecodeUtf8(lowered);
  if (leven_) out.head(leven_dim) = leven_->EncodeWord(chars);
  if (phone_) out.tail(phone_dim) = phone_->EncodeWord(chars);
  return out;
}

nn::Vector NormalizerModel::FeaturizeToken(const std::string& token) const {
  if (token.empty()) throw std::invalid_argument("FeaturizeToken: empty token");
  const std::string lowered = ToLowerUtf8(token);
  const int id = source_.Index(lowered);
  if (!leven_ && !phone_) return token_emb_.value.row(id).transpose();
  const nn::Vector features = Features(lowered);
  nn::Vector out(input_width());
  out << token_emb_.value.row(id).transpose(), features;
  return out;
}

void NormalizerModel::CheckLength(size_t n) const {
  if (n == 0) throw std::invalid_argument("normalizer: empty sentence");
  if (n > static_cast<size_t>(config_.max_len)) {
    throw std::invalid_argument(fmt::format("normalizer: sentence has {} tokens, limit is {}", n,
                                            config_.max_len));
  }
}

std::vector<nn::Vector> NormalizerModel::EncodeSentence(std::span<const std::string> tokens) const {
  CheckLength(tokens.size());
  std::vector<nn::Vector> xs;
  xs.reserve(tokens.size());
  for (const std::string& token : tokens) xs.push_back(FeaturizeToken(token));
  return encoder_.Encode(xs).states;
}

std::vector<double> NormalizerModel::DetectProbabilities(std::span<const nn::Vector> states) const {
  const auto hidden = detector_.Encode(states).states;
  std::vector<double> probs;
  probs.reserve(hidden.size());
  for (const nn::Vector& h : hidden) {
    probs.push_back(nn::Sigmoid(detector_w_.value.row(0).dot(h) + detector_b_.value(0, 0)));
  }
  return probs;
}

std::vector<bool> NormalizerModel::DetectFlags(std::span<const nn::Vector> states) const {
  std::vector<bool> flags;
  for (double p : DetectProbabilities(states)) flags.push_back(p > 0.5);
  return flags;
}

namespace {

DecoderStep RunDecoderStep(const nn::Lstm& decoder, const nn::Matrix& target_emb,
                           const nn::Matrix& out_w, const nn::Matrix& out_b, int prev,
                           const nn::Vector& aligned_state, const nn::LstmState& prev_state,
                           const nn::Matrix& states) {
  DecoderStep step;
  const Eigen::Index e = target_emb.cols();
  nn::Vector input(e + aligned_state.size());
  input << target_emb.row(prev).transpose(), aligned_state;
  step.state = decoder.Step(input, prev_state, &step.cache);
  const nn::Vector scores = states.transpose() * step.state.h;
  Softmax(scores, &step.attention);
  step.context = states * step.attention;
  step.hidden_context.resize(step.state.h.size() + step.context.size());
  step.hidden_context << step.state.h, step.context;
  step.logits = out_w * step.hidden_context + out_b.col(0);
  return step;
}

}  // namespace

std::vector<std::string> NormalizerModel::DecodeTokens(std::span<const nn::Vector> states,
                                                       const std::vector<bool>& flags,
                                                       std::span<const std::string> tokens) const {
  if (states.size() != tokens.size() || flags.size() != tokens.size()) {
    throw std::invalid_argument("DecodeTokens: misaligned inputs");
  }
  std::vector<std::string> out(tokens.begin(), tokens.end());
  if (std::none_of(flags.begin(), flags.end(), [](bool f) { return f; })) return out;

  const nn::Matrix state_matrix = StackColumns(states);
  nn::LstmState dec = decoder_.ZeroState();
  int prev = Vocab::kBos;
  for (size_t t = 0; t < tokens.size(); ++t) {
    DecoderStep step = RunDecoderStep(decoder_, target_emb_.value, out_w_.value, out_b_.value,
                                      prev, states[t], dec, state_matrix);
    dec = std::move(step.state);
    if (!flags[t]) {
      prev = Vocab::kCopy;
      continue;
    }
    Eigen::Index best = 0;
    step.logits.maxCoeff(&best);
    prev = static_cast<int>(best);
    if (!Vocab::IsReserved(prev)) out[t] = target_.Token(prev);
  }
  return out;
}

std::vector<std::string> NormalizerModel::Normalize(std::span<const std::string> tokens) const {
  const auto states = EncodeSentence(tokens);
  const auto flags = DetectFlags(states);
  return DecodeTokens(states, flags, tokens);
}

int NormalizerModel::GoldIndex(const std::string& input, const std::string& output) const {
  if (input == output) return Vocab::kCopy;
  return target_.Index(output);
}

double NormalizerModel::SentenceLoss(const Sentence& sentence) {
  const size_t n = sentence.input.size();
  if (sentence.output.size() != n) throw std::invalid_argument("SentenceLoss: misaligned sentence");
  CheckLength(n);
  const double scale = 1.0 / static_cast<double>(n);

  // Forward.
  std::vector<int> token_ids;
  std::vector<nn::Vector> xs;
  for (const std::string& token : sentence.input) {
    token_ids.push_back(source_.Index(ToLowerUtf8(token)));
    xs.push_back(FeaturizeToken(token));
  }
  nn::BiLstmTrace encoder_trace;
  const std::vector<nn::Vector> states = encoder_.Encode(xs, &encoder_trace).states;
  const nn::Matrix state_matrix = StackColumns(states);

  nn::BiLstmTrace detector_trace;
  const std::vector<nn::Vector> det_hidden = detector_.Encode(states, &detector_trace).states;

  double loss = 0.0;
  std::vector<nn::Vector> d_states(n, nn::Vector::Zero(state_dim()));
  std::vector<nn::Vector> d_det_hidden(n);
  for (size_t t = 0; t < n; ++t) {
    const double logit = detector_w_.value.row(0).dot(det_hidden[t]) + detector_b_.value(0, 0);
    const double gold = sentence.input[t] != sentence.output[t] ? 1.0 : 0.0;
    // Binary cross-entropy on the logit.
    loss += scale * (Softplus(logit) - gold * logit);
    const double d_logit = scale * (nn::Sigmoid(logit) - gold);
    detector_w_.grad.row(0) += d_logit * det_hidden[t].transpose();
    detector_b_.grad(0, 0) += d_logit;
    d_det_hidden[t] = d_logit * detector_w_.value.row(0).transpose();
  }

  std::vector<DecoderStep> steps;
  std::vector<int> prev_ids;
  std::vector<int> gold_ids;
  nn::LstmState dec = decoder_.ZeroState();
  int prev = Vocab::kBos;
  for (size_t t = 0; t < n; ++t) {
    const int gold = GoldIndex(sentence.input[t], sentence.output[t]);
    DecoderStep step = RunDecoderStep(decoder_, target_emb_.value, out_w_.value, out_b_.value,
                                      prev, states[t], dec, state_matrix);
    dec = step.state;
    nn::Vector probs;
    const double lse = Softmax(step.logits, &probs);
    loss += scale * (lse - step.logits(gold));
    prev_ids.push_back(prev);
    gold_ids.push_back(gold);
    steps.push_back(std::move(step));
    prev = gold;  // teacher forcing
  }

  // Backward through the decoder, last step first.
  const Eigen::Index h_dec = decoder_.hidden_dim();
  const Eigen::Index e = config_.decoder_emb_dim;
  nn::Matrix d_state_matrix = nn::Matrix::Zero(state_matrix.rows(), state_matrix.cols());
  nn::LstmState carry = decoder_.ZeroState();
  for (size_t t = n; t-- > 0;) {
    const DecoderStep& step = steps[t];
    nn::Vector d_logits;
    Softmax(step.logits, &d_logits);
    d_logits(gold_ids[t]) -= 1.0;
    d_logits *= scale;
    out_w_.grad.noalias() += d_logits * step.hidden_context.transpose();
    out_b_.grad.col(0) += d_logits;
    const nn::Vector d_hc = out_w_.value.transpose() * d_logits;
    nn::Vector d_h = d_hc.head(h_dec);
    const nn::Vector d_context = d_hc.tail(d_hc.size() - h_dec);

    // context = S a, a = softmax(S^T h)
    const nn::Vector d_attention = state_matrix.transpose() * d_context;
    const double weighted = step.attention.dot(d_attention);
    const nn::Vector d_scores =
        (step.attention.array() * (d_attention.array() - weighted)).matrix();
    d_state_matrix.noalias() += d_context * step.attention.transpose();
    d_state_matrix.noalias() += step.state.h * d_scores.transpose();
    d_h.noalias() += state_matrix * d_scores;

    nn::Vector d_input;
    nn::LstmState d_prev;
    decoder_.StepBackward(step.cache, d_h + carry.h, carry.c, &d_input, &d_prev);
    carry = std::move(d_prev);
    target_emb_.grad.row(prev_ids[t]) += d_input.head(e).transpose();
    d_states[t] += d_input.tail(d_input.size() - e);
  }
  for (size_t t = 0; t < n; ++t) d_states[t] += d_state_matrix.col(static_cast<Eigen::Index>(t));

  const auto d_from_detector = detector_.Backward(detector_trace, d_det_hidden, nullptr);
  for (size_t t = 0; t < n; ++t) d_states[t] += d_from_detector[t];

  const auto d_xs = encoder_.Backward(encoder_trace, d_states, nullptr);
  // Only the token-embedding slice is trainable; feature slices stop here.
  for (size_t t = 0; t < n; ++t) {
    token_emb_.grad.row(token_ids[t]) += d_xs[t].head(config_.emb_dim).transpose();
  }
  return loss;
}

nn::ParameterList NormalizerModel::Parameters() {
  nn::ParameterList out = {&token_emb_};
  for (nn::Parameter* p : encoder_.Parameters()) out.push_back(p);
  for (nn::Parameter* p : detector_.Parameters()) out.push_back(p);
  out.push_back(&detector_w_);
  out.push_back(&detector_b_);
  out.push_back(&target_emb_);
  for (nn::Parameter* p : decoder_.Parameters()) out.push_back(p);
  out.push_back(&out_w_);
  out.push_back(&out_b_);
  return out;
}

uint64_t NormalizerModel::Fingerprint() const {
  return nn::Fingerprint(const_cast<NormalizerModel*>(this)->Parameters());
}

Checkpoint NormalizerModel::ToCheckpoint() const {
  Checkpoint checkpoint;
  checkpoint.type = ModelType::kNormalizer;
  checkpoint.config["emb_dim"] = std::to_string(config_.emb_dim);
  checkpoint.config["encoder_hidden"] = std::to_string(config_.encoder_hidden);
  checkpoint.config["detector_hidden"] = std::to_string(config_.detector_hidden);
  checkpoint.config["decoder_emb_dim"] = std::to_string(config_.decoder_emb_dim);
  checkpoint.config["max_len"] = std::to_string(config_.max_len);
  checkpoint.config["use_levenshtein"] = config_.use_levenshtein ? "true" : "false";
  checkpoint.config["use_metaphone"] = config_.use_metaphone ? "true" : "false";
  checkpoint.vocabs["source"] = source_.Entries();
  checkpoint.vocabs["target"] = target_.Entries();
  for (const nn::Parameter* p : const_cast<NormalizerModel*>(this)->Parameters()) {
    checkpoint.params.emplace_back(p->name, ToTensor(p->value));
  }
  if (leven_) leven_->AppendToCheckpoint(checkpoint, "leven.");
  if (phone_) phone_->AppendToCheckpoint(checkpoint, "phone.");
  return checkpoint;
}

NormalizerModel NormalizerModel::FromCheckpoint(const Checkpoint& checkpoint) {
  if (checkpoint.type != ModelType::kNormalizer) {
    throw DataError("checkpoint holds a siamese encoder, not a normalizer");
  }
  NormalizerConfig config;
  config.emb_dim = ParseInt(checkpoint, "emb_dim");
  config.encoder_hidden = ParseInt(checkpoint, "encoder_hidden");
  config.detector_hidden = ParseInt(checkpoint, "detector_hidden");
  config.decoder_emb_dim = ParseInt(checkpoint, "decoder_emb_dim");
  config.max_len = ParseInt(checkpoint, "max_len");
  config.use_levenshtein = ParseBool(checkpoint.Config("use_levenshtein"), "use_levenshtein");
  config.use_metaphone = ParseBool(checkpoint.Config("use_metaphone"), "use_metaphone");
  std::optional<SiameseEncoder> leven;
  std::optional<SiameseEncoder> phone;
  if (config.use_levenshtein) leven = SiameseEncoder::FromCheckpoint(checkpoint, "leven.");
  if (config.use_metaphone) phone = SiameseEncoder::FromCheckpoint(checkpoint, "phone.");
  NormalizerModel model(config, Vocab::FromEntries(checkpoint.Vocab("source")),
                        Vocab::FromEntries(checkpoint.Vocab("target")), std::move(leven),
                        std::move(phone));
  for (nn::Parameter* p : model.Parameters()) {
    p->value = ToMatrix(checkpoint.Param(p->name), p->value.rows(), p->value.cols(), p->name);
  }
  return model;
}

NormalizerModel TrainNormalizer(const Dataset& train, const SiameseEncoder* leven,
                                const SiameseEncoder* phone, const NormalizerConfig& config,
                                NormalizerTrainingLog* log) {
  if (train.sentences.empty()) throw std::invalid_argument("TrainNormalizer: empty dataset");
  if (config.use_levenshtein && leven == nullptr) {
    throw ConfigError("use_levenshtein is set but no Levenshtein encoder was given");
  }
  if (config.use_metaphone && phone == nullptr) {
    throw ConfigError("use_metaphone is set but no Metaphone encoder was given");
  }
  if (config.epochs <= 0 || config.batch_size <= 0) {
    throw ConfigError("epochs and batch_size must be positive");
  }
  Vocab source;
  Vocab target;
  for (size_t s = 0; s < train.sentences.size(); ++s) {
    const Sentence& sentence = train.sentences[s];
    if (sentence.input.empty() || sentence.input.size() != sentence.output.size()) {
      throw std::invalid_argument(fmt::format("TrainNormalizer: sentence {} is misaligned", s));
    }
    if (sentence.input.size() > static_cast<size_t>(config.max_len)) {
      throw std::invalid_argument(fmt::format("TrainNormalizer: sentence {} exceeds max_len", s));
    }
    for (size_t t = 0; t < sentence.input.size(); ++t) {
      source.Add(sentence.input[t]);
      if (sentence.input[t] != sentence.output[t]) target.Add(sentence.output[t]);
    }
  }

  std::optional<SiameseEncoder> leven_copy;
  std::optional<SiameseEncoder> phone_copy;
  if (config.use_levenshtein) leven_copy = *leven;
  if (config.use_metaphone) phone_copy = *phone;
  NormalizerModel model(config, std::move(source), std::move(target), std::move(leven_copy),
                        std::move(phone_copy));
  Rng init_rng(DeriveSeed(config.seed, SeedStream::kNormalizerInit));
  model.InitWeights(init_rng);

  const nn::ParameterList params = model.Parameters();
  nn::Adam adam(params, {.learning_rate = config.learning_rate});
  Rng shuffle_rng(DeriveSeed(config.seed, SeedStream::kNormalizerShuffle));
  std::vector<size_t> order(train.sentences.size());
  std::iota(order.begin(), order.end(), size_t{0});
  const size_t batch = static_cast<size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.Shuffle(std::span(order));
    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      nn::ZeroGrads(params);
      for (size_t k = start; k < end; ++k) {
        epoch_loss += model.SentenceLoss(train.sentences[order[k]]);
      }
      nn::ScaleGrads(params, 1.0 / static_cast<double>(end - start));
      nn::ClipGradNorm(params, config.clip_norm);
      adam.Step();
    }
    if (log != nullptr) {
      log->epoch_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    }
  }
  nn::ZeroGrads(params);
  return model;
}

std::vector<std::vector<std::string>> Predict(const NormalizerModel& model, const Dataset& data) {
  std::vector<std::vector<std::string>> out;
  out.reserve(data.sentences.size());
  for (const Sentence& sentence : data.sentences) out.push_back(model.Normalize(sentence.input));
  return out;
}

}  // namespace lexnorm
