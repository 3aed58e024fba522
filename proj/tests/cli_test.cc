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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <gtest/gtest.h>

#include "lexnorm/noise.h"
#include "test_util.h"

namespace lexnorm {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Lexnorm(const std::vector<std::string>& args, const std::string& input = "",
           std::optional<std::string> env_seed = std::nullopt) {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = RunLexnorm(args, {in, out, err, env_seed});
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lexnorm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST(CliBasicsTest, EditDist) {
  const Result r = Lexnorm({"editdist", "yeeeees", "yes"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "d=4 s=0.428571\n");
  EXPECT_EQ(Lexnorm({"editdist", "", ""}).out, "d=0 s=1.000000\n");
}

TEST(CliBasicsTest, Metaphone) {
  const Result r = Lexnorm({"metaphone", "yes", "smith"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "yes\tAS\tAS\nsmith\tSM0\tXMT\n");
}

TEST(CliBasicsTest, UsageErrors) {
  EXPECT_EQ(Lexnorm({"bogus"}).code, kExitUsage);
  EXPECT_EQ(Lexnorm({}).code, kExitUsage);
  EXPECT_EQ(Lexnorm({"editdist", "a"}).code, kExitUsage);
  EXPECT_EQ(Lexnorm({"metaphone"}).code, kExitUsage);
  EXPECT_EQ(Lexnorm({"noise", "--vocab", "v.txt"}).code, kExitUsage);
  EXPECT_EQ(Lexnorm({"editdist", "a", "b", "c"}).code, kExitUsage);
}

TEST(CliBasicsTest, EverySubcommandHasHelp) {
  for (const char* sub : {"editdist", "metaphone", "noise", "train-siamese", "sim",
                          "train-normalizer", "normalize", "evaluate"}) {
    const Result r = Lexnorm({sub, "--help"});
    EXPECT_EQ(r.code, kExitOk) << sub;
    EXPECT_NE(r.out.find("Usage"), std::string::npos) << sub;
  }
  EXPECT_EQ(Lexnorm({"--help"}).code, kExitOk);
}

TEST(CliBasicsTest, MissingFilesAreDataErrors) {
  EXPECT_EQ(Lexnorm({"noise", "--vocab", "/nonexistent", "--mode", "leven", "--out", "/tmp/x"}).code,
            kExitData);
  EXPECT_EQ(Lexnorm({"sim", "--model", "/nonexistent", "a", "b"}).code, kExitData);
  EXPECT_EQ(Lexnorm({"normalize", "--model", "/nonexistent"}).code, kExitData);
  EXPECT_EQ(Lexnorm({"evaluate", "--gold", "/nonexistent", "--pred", "/nonexistent"}).code, kExitData);
}

TEST_F(CliTest, ConfigErrorsAreUsageErrors) {
  std::ofstream(P("vocab.txt")) << "yes\nhome\n";
  std::ofstream(P("bad.cfg")) << "hiden = 3\n";
  const Result r = Lexnorm({"noise", "--vocab", P("vocab.txt"), "--mode", "leven", "--out",
                        P("pairs.tsv"), "--config", P("bad.cfg")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("hiden"), std::string::npos);
  EXPECT_EQ(Lexnorm({"noise", "--vocab", P("vocab.txt"), "--mode", "soundex", "--out", P("p")}).code,
            kExitUsage);
}

TEST_F(CliTest, NoiseIsReproducibleAcrossWorkersAndEchoesConfig) {
  std::ofstream(P("vocab.txt")) << "yes home\ncar don't tomorrow\n";
  const Result one = Lexnorm({"noise", "--vocab", P("vocab.txt"), "--mode", "metaphone", "--per-word",
                          "4", "--seed", "5", "--out", P("a.tsv")});
  ASSERT_EQ(one.code, kExitOk) << one.err;
  EXPECT_NE(one.err.find("seed = 5"), std::string::npos);
  EXPECT_NE(one.err.find("per_word = 4"), std::string::npos);
  ASSERT_EQ(Lexnorm({"noise", "--vocab", P("vocab.txt"), "--mode", "metaphone", "--per-word", "4",
                 "--seed", "5", "--workers", "3", "--out", P("b.tsv")})
                .code,
            kExitOk);
  EXPECT_EQ(Slurp(P("a.tsv")), Slurp(P("b.tsv")));
  std::ifstream in(P("a.tsv"));
  EXPECT_EQ(ReadPairs(in).size(), 5u * 6u);
}

TEST_F(CliTest, SeedPrecedence) {
  std::ofstream(P("vocab.txt")) << "yes home car\n";
  std::ofstream(P("seed.cfg")) << "seed = 3\n";
  const auto run = [&](std::vector<std::string> extra, std::optional<std::string> env,
                       const std::string& out) {
    std::vector<std::string> args = {"noise", "--vocab", P("vocab.txt"), "--mode", "leven",
                                     "--out", P(out)};
    args.insert(args.end(), extra.begin(), extra.end());
    return Lexnorm(args, "", env);
  };
  EXPECT_NE(run({}, std::nullopt, "d").err.find("seed = 42"), std::string::npos);
  EXPECT_NE(run({}, "11", "e").err.find("seed = 11"), std::string::npos);
  EXPECT_NE(run({"--config", P("seed.cfg")}, "11", "f").err.find("seed = 3"), std::string::npos);
  EXPECT_NE(run({"--config", P("seed.cfg"), "--seed", "7"}, "11", "g").err.find("seed = 7"),
            std::string::npos);
}

TEST_F(CliTest, EndToEndPipeline) {
  std::ofstream(P("vocab.txt")) << "when you see a car home go i rt:\n";
  std::ofstream(P("small.cfg")) << "siamese_epochs = 2\nchar_dim = 4\nnormalizer_epochs = 300\nnormalizer_batch = 1\n"
                                   "encoder_hidden = 8\ndetector_hidden = 4\ndecoder_emb = 4\n";
  std::ofstream(P("train.json"))
      << R"([{"input":["wen","u","cee","a","car"],"output":["when","you","see","a","car"]},)"
      << R"({"input":["rt:","i","go","homeee"],"output":["rt:","i","go","home"]}])";
  ASSERT_EQ(Lexnorm({"noise", "--vocab", P("vocab.txt"), "--mode", "leven", "--per-word", "2", "--out",
                 P("leven.tsv")})
                .code,
            kExitOk);
  ASSERT_EQ(Lexnorm({"noise", "--vocab", P("vocab.txt"), "--mode", "metaphone", "--per-word", "2",
                 "--out", P("phone.tsv")})
                .code,
            kExitOk);
  for (const auto& [mode, pairs, out] :
       {std::tuple{"leven", "leven.tsv", "leven.ckpt"}, {"metaphone", "phone.tsv", "phone.ckpt"}}) {
    const Result r = Lexnorm({"train-siamese", "--mode", mode, "--pairs", P(pairs), "--hidden", "3",
                          "--config", P("small.cfg"), "--out", P(out)});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.err.find("epoch 1 loss"), std::string::npos);
  }
  // The Levenshtein checkpoint is not accepted where a phonetic one is expected.
  EXPECT_EQ(Lexnorm({"train-normalizer", "--train", P("train.json"), "--metaphone", P("leven.ckpt"),
                 "--out", P("x.ckpt")})
                .code,
            kExitData);

  const Result sim = Lexnorm({"sim", "--model", P("leven.ckpt"), "homeee", "home"});
  ASSERT_EQ(sim.code, kExitOk) << sim.err;
  const double s = std::stod(sim.out);
  EXPECT_GE(s, 0.0);
  EXPECT_LE(s, 1.0);
  EXPECT_EQ(Lexnorm({"sim", "--model", P("leven.ckpt"), "home", "home"}).out, "1.000000\n");

  const std::vector<std::string> train_args = {
      "train-normalizer", "--train", P("train.json"), "--dev", P("train.json"), "--leven",
      P("leven.ckpt"), "--metaphone", P("phone.ckpt"), "--emb", "12", "--config", P("small.cfg"),
      "--out", P("norm.ckpt")};
  const Result trained = Lexnorm(train_args);
  ASSERT_EQ(trained.code, kExitOk) << trained.err;
  EXPECT_NE(trained.err.find("emb = 12"), std::string::npos);
  EXPECT_NE(trained.err.find("Precision"), std::string::npos);
  std::vector<std::string> again = train_args;
  again.back() = P("norm2.ckpt");
  ASSERT_EQ(Lexnorm(again).code, kExitOk);
  EXPECT_EQ(Slurp(P("norm.ckpt")), Slurp(P("norm2.ckpt")));

  const Result normalized =
      Lexnorm({"normalize", "--model", P("norm.ckpt")}, "rt: i go homeee\n\nWen u cee a car\n");
  ASSERT_EQ(normalized.code, kExitOk) << normalized.err;
  EXPECT_EQ(normalized.out, "rt: i go home\n\nwhen you see a car\n");

  ASSERT_EQ(Lexnorm({"normalize", "--model", P("norm.ckpt"), "--input", P("train.json"), "--out",
                 P("pred.json")})
                .code,
            kExitOk);
  const Result eval =
      Lexnorm({"evaluate", "--gold", P("train.json"), "--pred", P("pred.json"), "--pred",
           P("train.json"), "--name", "+LS+MP", "--name", "oracle", "--csv"});
  ASSERT_EQ(eval.code, kExitOk) << eval.err;
  EXPECT_EQ(eval.out, "model,precision,recall,f1\n+LS+MP,100.00,100.00,100.00\n"
                      "oracle,100.00,100.00,100.00\n");

  std::string many;
  for (int k = 0; k < 70; ++k) many += "a ";
  EXPECT_EQ(Lexnorm({"normalize", "--model", P("norm.ckpt")}, many + "\n").code, kExitData);
}

}  // namespace
}  // namespace lexnorm
