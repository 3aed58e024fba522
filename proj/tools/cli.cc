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


#include "lexnorm/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lexnorm/checkpoint.h"
#include "lexnorm/config.h"
#include "lexnorm/error.h"
#include "lexnorm/evalkit.h"
#include "lexnorm/metaphone.h"
#include "lexnorm/noise.h"
#include "lexnorm/normalizer.h"
#include "lexnorm/siamese.h"
#include "lexnorm/strdist.h"
#include "lexnorm/text.h"

namespace lexnorm {
namespace {

namespace fs = std::filesystem;

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  return in;
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  out.close();
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
}

SimilarityMode ModeFromFlag(const std::string& name) {
  const auto mode = ParseMode(name);
  if (!mode) throw ConfigError(fmt::format("unknown mode '{}' (use leven or metaphone)", name));
  return *mode;
}

// Flags shared by the training subcommands. Only flags given on the command
// line become overrides, so file values survive otherwise.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void AddOverride(CLI::App* app, const std::string& flag, const std::string& key,
                   const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { overrides[key] = v; }, help);
  }

  RunConfig Resolve(const CliStreams& io) const {
    std::optional<fs::path> path;
    if (!config_path.empty()) path = config_path;
    RunConfig config = LoadConfig(path, overrides, io.env_seed);
    io.err << "# resolved configuration\n" << FormatConfig(config);
    return config;
  }
};

void AddConfigOption(CLI::App* app, ConfigFlags& flags) {
  app->add_option("--config", flags.config_path, "Key=value configuration file");
  flags.AddOverride(app, "--seed", "seed", "Global random seed");
}

std::vector<std::string> ReadVocabulary(const fs::path& path) {
  std::ifstream in = OpenInput(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (std::string& token : SplitWhitespace(line)) words.push_back(std::move(token));
  }
  if (words.empty()) throw DataError(fmt::format("{}: vocabulary is empty", path.string()));
  return words;
}

std::optional<SiameseEncoder> LoadEncoder(const std::string& path, SimilarityMode expected) {
  if (path.empty()) return std::nullopt;
  SiameseEncoder encoder = SiameseEncoder::FromCheckpoint(LoadCheckpoint(path));
  if (encoder.mode() != expected) {
    throw DataError(fmt::format("{} holds a {} encoder, expected {}", path, ModeName(encoder.mode()),
                                ModeName(expected)));
  }
  return encoder;
}

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t k = 0; k < tokens.size(); ++k) {
    if (k > 0) out += ' ';
    out += tokens[k];
  }
  return out;
}

}  // namespace

int RunLexnorm(const std::vector<std::string>& args, CliStreams io) {
  CLI::App app{"Lexical normalization toolkit with learned string and phonetic similarity features",
               "lexnorm"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // editdist
  std::string ed_a;
  std::string ed_b;
  CLI::App* editdist = app.add_subcommand("editdist", "Levenshtein distance and similarity");
  editdist->add_option("a", ed_a, "First word")->required();
  editdist->add_option("b", ed_b, "Second word")->required();

  // metaphone
  std::vector<std::string> mp_words;
  size_t mp_max = kDefaultMaxCodeLength;
  CLI::App* metaphone = app.add_subcommand("metaphone", "Double Metaphone codes, one line per word");
  metaphone->add_option("words", mp_words, "Words to encode")->required();
  metaphone->add_option("--max-length", mp_max, "Code length cap")->check(CLI::PositiveNumber);

  // noise
  std::string nz_vocab;
  std::string nz_mode;
  std::string nz_out;
  ConfigFlags nz_flags;
  CLI::App* noise = app.add_subcommand("noise", "Generate similarity training pairs");
  noise->add_option("--vocab", nz_vocab, "Vocabulary file, whitespace separated")->required();
  noise->add_option("--mode", nz_mode, "leven or metaphone")->required();
  noise->add_option("--out", nz_out, "Output pairs file")->required();
  nz_flags.AddOverride(noise, "--per-word", "per_word", "Noisy variants per word");
  nz_flags.AddOverride(noise, "--workers", "workers", "Generation threads");
  AddConfigOption(noise, nz_flags);

  // train-siamese
  std::string ts_mode;
  std::string ts_pairs;
  std::string ts_out;
  std::string ts_hidden;
  ConfigFlags ts_flags;
  CLI::App* train_siamese = app.add_subcommand("train-siamese", "Train a siamese similarity encoder");
  train_siamese->add_option("--mode", ts_mode, "leven or metaphone")->required();
  train_siamese->add_option("--pairs", ts_pairs, "Pairs file from 'noise'")->required();
  train_siamese->add_option("--out", ts_out, "Output checkpoint")->required();
  train_siamese->add_option("--hidden", ts_hidden, "LSTM hidden size per direction");
  ts_flags.AddOverride(train_siamese, "--epochs", "siamese_epochs", "Training epochs");
  AddConfigOption(train_siamese, ts_flags);

  // sim
  std::string sim_model;
  std::string sim_x;
  std::string sim_y;
  CLI::App* sim = app.add_subcommand("sim", "Predicted similarity of two words");
  sim->add_option("--model", sim_model, "Siamese checkpoint")->required();
  sim->add_option("x", sim_x, "First word")->required();
  sim->add_option("y", sim_y, "Second word")->required();

  // train-normalizer
  std::string tn_train;
  std::string tn_dev;
  std::string tn_leven;
  std::string tn_phone;
  std::string tn_out;
  ConfigFlags tn_flags;
  CLI::App* train_normalizer = app.add_subcommand("train-normalizer", "Train the normalizer");
  train_normalizer->add_option("--train", tn_train, "Training dataset (JSON array or JSONL)")
      ->required();
  train_normalizer->add_option("--dev", tn_dev, "Development dataset, scored after training");
  train_normalizer->add_option("--leven", tn_leven, "Levenshtein encoder checkpoint");
  train_normalizer->add_option("--metaphone", tn_phone, "Metaphone encoder checkpoint");
  train_normalizer->add_option("--out", tn_out, "Output checkpoint")->required();
  tn_flags.AddOverride(train_normalizer, "--emb", "emb", "Token embedding size");
  tn_flags.AddOverride(train_normalizer, "--epochs", "normalizer_epochs", "Training epochs");
  AddConfigOption(train_normalizer, tn_flags);

  // normalize
  std::string nm_model;
  std::string nm_input;
  std::string nm_out;
  CLI::App* normalize = app.add_subcommand(
      "normalize", "Normalize sentences from stdin, one whitespace-tokenized sentence per line");
  normalize->add_option("--model", nm_model, "Normalizer checkpoint")->required();
  normalize->add_option("--input", nm_input,
                        "Dataset file to normalize instead of stdin; writes a prediction dataset");
  normalize->add_option("--out", nm_out, "Prediction dataset path (with --input)");

  // evaluate
  std::string ev_gold;
  std::vector<std::string> ev_preds;
  std::vector<std::string> ev_names;
  bool ev_csv = false;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Precision, recall and F1 against gold");
  evaluate->add_option("--gold", ev_gold, "Gold dataset")->required();
  evaluate->add_option("--pred", ev_preds, "Prediction dataset; repeat for several models")
      ->required();
  evaluate->add_option("--name", ev_names, "Row name per --pred, in order");
  evaluate->add_flag("--csv", ev_csv, "CSV output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    io.out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    io.err << "lexnorm: " << e.what() << "\n";
    io.err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitUsage;
  }

  try {
    if (editdist->parsed()) {
      io.out << fmt::format("d={} s={:.6f}\n", Levenshtein(ed_a, ed_b), EditSimilarity(ed_a, ed_b));
    } else if (metaphone->parsed()) {
      for (const std::string& word : mp_words) {
        const PhoneticCode code = DoubleMetaphone(word, mp_max);
        io.out << word << '\t' << code.primary << '\t' << code.secondary << '\n';
      }
    } else if (noise->parsed()) {
      const SimilarityMode mode = ModeFromFlag(nz_mode);
      const RunConfig config = nz_flags.Resolve(io);
      const auto vocab = ReadVocabulary(nz_vocab);
      const auto pairs = GeneratePairs(vocab, config.per_word, mode,
                                       DeriveSeed(config.seed, SeedStream::kNoise),
                                       config.Noise(), config.workers);
      std::ostringstream text;
      WritePairs(text, pairs);
      WriteFile(nz_out, text.str());
      io.err << fmt::format("wrote {} pairs to {}\n", pairs.size(), nz_out);
    } else if (train_siamese->parsed()) {
      const SimilarityMode mode = ModeFromFlag(ts_mode);
      ConfigFlags flags = ts_flags;
      if (!ts_hidden.empty()) {
        flags.overrides[mode == SimilarityMode::kLevenshtein ? "leven_hidden" : "metaphone_hidden"] =
            ts_hidden;
      }
      const RunConfig config = flags.Resolve(io);
      std::ifstream in = OpenInput(ts_pairs);
      const auto pairs = ReadPairs(in);
      const SiameseTrainResult result = TrainSiamese(pairs, mode, config.Siamese(mode));
      for (size_t e = 0; e < result.loss_curve.size(); ++e) {
        io.err << fmt::format("epoch {} loss {:.6f}", e + 1, result.loss_curve[e]);
        if (e < result.validation_curve.size()) {
          io.err << fmt::format(" validation {:.6f}", result.validation_curve[e]);
        }
        io.err << '\n';
      }
      if (!result.converged) {
        io.err << fmt::format("warning: training did not converge (loss {:.6f} -> {:.6f})\n",
                              result.initial_loss, result.final_loss);
      }
      SaveCheckpoint(ts_out, result.model.ToCheckpoint());
    } else if (sim->parsed()) {
      const SiameseEncoder model = SiameseEncoder::FromCheckpoint(LoadCheckpoint(sim_model));
      if (sim_x.empty() || sim_y.empty()) throw ConfigError("sim: words must be non-empty");
      io.out << fmt::format("{:.6f}\n", model.PredictSimilarity(sim_x, sim_y));
    } else if (train_normalizer->parsed()) {
      const RunConfig config = tn_flags.Resolve(io);
      NormalizerConfig nconfig = config.Normalizer();
      const auto leven = LoadEncoder(tn_leven, SimilarityMode::kLevenshtein);
      const auto phone = LoadEncoder(tn_phone, SimilarityMode::kMetaphone);
      nconfig.use_levenshtein = leven.has_value();
      nconfig.use_metaphone = phone.has_value();
      const Dataset train = LoadDataset(tn_train);
      std::optional<Dataset> dev;
      if (!tn_dev.empty()) dev = LoadDataset(tn_dev);
      NormalizerTrainingLog log;
      const NormalizerModel model = TrainNormalizer(train, leven ? &*leven : nullptr,
                                                    phone ? &*phone : nullptr, nconfig, &log);
      for (size_t e = 0; e < log.epoch_loss.size(); ++e) {
        io.err << fmt::format("epoch {} loss {:.6f}\n", e + 1, log.epoch_loss[e]);
      }
      SaveCheckpoint(tn_out, model.ToCheckpoint());
      if (dev) {
        const std::pair<std::string, EvalReport> row{"dev", Evaluate(*dev, Predict(model, *dev))};
        io.err << ReportTable(std::span(&row, 1));
      }
    } else if (normalize->parsed()) {
      if (nm_input.empty() != nm_out.empty()) {
        throw ConfigError("normalize: --input and --out go together");
      }
      const NormalizerModel model = NormalizerModel::FromCheckpoint(LoadCheckpoint(nm_model));
      if (!nm_input.empty()) {
        Dataset data = LoadDataset(nm_input);
        const auto predictions = Predict(model, data);
        for (size_t s = 0; s < data.sentences.size(); ++s) {
          data.sentences[s].output = predictions[s];
        }
        std::ostringstream text;
        WriteDataset(text, data, DatasetFormat::kJsonArray);
        WriteFile(nm_out, text.str());
      } else {
        std::string line;
        size_t line_number = 0;
        while (std::getline(io.in, line)) {
          ++line_number;
          const auto tokens = SplitWhitespace(line);
          if (tokens.empty()) {
            io.out << '\n';
            continue;
          }
          try {
            io.out << JoinTokens(model.Normalize(tokens)) << '\n';
          } catch (const std::invalid_argument& e) {
            throw DataError(fmt::format("stdin line {}: {}", line_number, e.what()));
          }
        }
      }
    } else if (evaluate->parsed()) {
      if (!ev_names.empty() && ev_names.size() != ev_preds.size()) {
        throw ConfigError("evaluate: give one --name per --pred");
      }
      const Dataset gold = LoadDataset(ev_gold);
      std::vector<std::pair<std::string, EvalReport>> rows;
      for (size_t k = 0; k < ev_preds.size(); ++k) {
        const Dataset pred = LoadDataset(ev_preds[k]);
        std::vector<std::vector<std::string>> outputs;
        for (const Sentence& s : pred.sentences) outputs.push_back(s.output);
        const std::string name = ev_names.empty() ? fs::path(ev_preds[k]).stem().string()
                                                  : ev_names[k];
        rows.emplace_back(name, Evaluate(gold, outputs));
      }
      io.out << ReportTable(rows, ev_csv);
    }
  } catch (const ConfigError& e) {
    io.err << "lexnorm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    io.err << "lexnorm: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace lexnorm
