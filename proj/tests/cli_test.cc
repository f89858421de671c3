// Copyright 2026 The qsent Authors.
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

// Runs the qsent binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "manifest.h"

namespace {

using json = nlohmann::json;
using qsent::testing::FixturePath;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string TempPath(const std::string &name) {
  const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
  std::string test = info ? info->name() : "global";
  return ::testing::TempDir() + "/qsent_cli_" + test + "_" + name;
}

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string &path, const std::string &content) {
  std::ofstream(path, std::ios::binary) << content;
}

RunResult Qsent(const std::string &args, const std::string &env = "") {
  const std::string out = TempPath("stdout"), err = TempPath("stderr");
  std::string cmd = env + " '" + std::string(QSENT_BINARY) + "' " + args +
                    " >'" + out + "' 2>'" + err + "' </dev/null";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

std::vector<json> JsonLines(const std::string &text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(json::parse(line));
  return out;
}

TEST(CliTest, KbValidateDefault) {
  RunResult r = Qsent("kb validate");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0 errors, 0 warnings"), std::string::npos) << r.out;
}

const char kVars[] =
    "var Sentiment universe -1 1\n"
    "  set Negative trapezoid -1 -1 0 0\n"
    "  set Positive trapezoid 0 0 1 1\n"
    "var X universe 0 10\n"
    "  set Low trapezoid 0 0 5 6\n"
    "  set High trapezoid 5 6 10 10\n"
    "var Pulse_finalValue universe 0 200\n"
    "  set Normal trapezoid 0 0 200 200\n";

TEST(CliTest, KbValidateDanglingSetFails) {
  WriteFile(TempPath("v"), kVars);
  WriteFile(TempPath("r"), "rule a: IF X IS Gigantic THEN Sentiment IS Positive\n");
  RunResult r = Qsent("--kb-vars " + TempPath("v") + " --kb-rules " + TempPath("r") +
                    " kb validate");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("Gigantic"), std::string::npos) << r.out;
}

TEST(CliTest, KbValidateWarningOnlySucceeds) {
  WriteFile(TempPath("v"), kVars);
  WriteFile(TempPath("r"), "rule a: IF X IS Low THEN Sentiment IS Positive\n"
                           "rule b: IF X IS High THEN Sentiment IS Negative\n");
  RunResult r = Qsent("--kb-vars " + TempPath("v") + " --kb-rules " + TempPath("r") +
                    " kb validate");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("Pulse_finalValue"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1 warnings"), std::string::npos) << r.out;
}

TEST(CliTest, ClassifyRefusesBrokenKb) {
  WriteFile(TempPath("v"), kVars);
  WriteFile(TempPath("r"), "rule a: IF X IS Gigantic THEN Sentiment IS Positive\n");
  WriteFile(TempPath("in"), "Cholesterol fell to 160\n");
  RunResult r = Qsent("--kb-vars " + TempPath("v") + " --kb-rules " + TempPath("r") +
                    " --input " + TempPath("in") + " classify");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("Gigantic"), std::string::npos) << r.err;
}

TEST(CliTest, MissingLexiconDirectory) {
  RunResult r = Qsent("--lexicons /nonexistent/lexdir extract");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/nonexistent/lexdir"), std::string::npos) << r.err;
}

TEST(CliTest, MissingInputFile) {
  RunResult r = Qsent("--input /nonexistent/reviews.jsonl extract");
  EXPECT_EQ(r.code, 4);
}

TEST(CliTest, BadFlagsAreConfigErrors) {
  EXPECT_EQ(Qsent("--grid-points 1 classify").code, 2);
  EXPECT_EQ(Qsent("--format xml extract").code, 2);
  EXPECT_EQ(Qsent("").code, 2);
  EXPECT_EQ(Qsent("evaluate").code, 2);
}

TEST(CliTest, EmptyInput) {
  WriteFile(TempPath("empty"), "");
  RunResult r = Qsent("--input " + TempPath("empty") + " extract");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliTest, ExtractMatchesManifest) {
  auto cases = qsent::testing::LoadManifest("extraction_manifest.jsonl");
  std::string input;
  for (const auto &c : cases) input += json{{"review_id", c.id}, {"text", c.text}}.dump() + "\n";
  WriteFile(TempPath("manifest_in"), input);
  RunResult r = Qsent("--input " + TempPath("manifest_in") + " --format jsonl extract");
  ASSERT_EQ(r.code, 0) << r.err;
  std::map<std::string, std::vector<json>> by_id;
  for (const json &j : JsonLines(r.out)) by_id[j["review_id"]].push_back(j);
  for (const auto &c : cases) {
    const auto &got = by_id[c.id];
    if (c.expect.empty()) {
      EXPECT_TRUE(got.empty()) << c.id;
      continue;
    }
    for (const auto &x : c.expect) {
      bool found = false;
      for (const json &j : got) {
        found = found || (j["sentence_type"] == x.type && j["term"] == x.term);
      }
      EXPECT_TRUE(found) << c.id << " " << x.type << "(" << x.term << ")";
    }
  }
}

TEST(CliTest, ClassifyChangeDirection) {
  WriteFile(TempPath("pair"),
            "Using this drug, my cholesterol level went from 518 to 175\n"
            "it increased my cholesterol level from 250 into 580\n");
  RunResult r = Qsent("--input " + TempPath("pair") + " --format jsonl classify");
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = JsonLines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0]["label"], "Positive");
  EXPECT_EQ(lines[1]["label"], "Negative");
}

TEST(CliTest, UnclassifiedHasEmptyTrace) {
  WriteFile(TempPath("bp"), "Taking this drug, my blood pressure rise to 18\n");
  RunResult r = Qsent("--input " + TempPath("bp") + " --format jsonl classify");
  auto lines = JsonLines(r.out);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0]["label"], "Unclassified");
  EXPECT_TRUE(lines[0]["fired_rules"].empty());
}

TEST(CliTest, FuseCollapsesSentences) {
  WriteFile(TempPath("multi"),
            "LDL 81=>61, HDL 38=>42, total chol 130=>112.\nCholesterol fell to 160\n");
  RunResult plain = Qsent("--input " + TempPath("multi") + " --format jsonl classify");
  RunResult fused = Qsent("--input " + TempPath("multi") + " --format jsonl --fuse classify");
  EXPECT_EQ(JsonLines(plain.out).size(), 4u);
  auto f = JsonLines(fused.out);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[1], JsonLines(plain.out)[3]);
}

TEST(CliTest, EnvironmentOverridesDefaults) {
  WriteFile(TempPath("one"), "Cholesterol fell to 160\n");
  RunResult r = Qsent("--input " + TempPath("one") + " classify", "QSENT_FORMAT=jsonl");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(JsonLines(r.out).at(0)["label"], "Positive");
}

TEST(CliTest, OutputIndependentOfThreadCount) {
  const std::string in = FixturePath("mini_reviews.jsonl");
  RunResult one = Qsent("--input " + in + " --format jsonl --jobs 1 classify");
  RunResult many = Qsent("--input " + in + " --format jsonl --jobs 8 classify");
  EXPECT_EQ(one.code, 0);
  EXPECT_FALSE(one.out.empty());
  EXPECT_EQ(one.out, many.out);
}

TEST(CliTest, OutputFile) {
  const std::string out = TempPath("out.txt");
  std::remove(out.c_str());
  WriteFile(TempPath("one"), "Cholesterol fell to 160\n");
  RunResult r = Qsent("--input " + TempPath("one") + " --output " + out + " extract");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(Slurp(out).find("ToFinal(Cholesterol"), std::string::npos);
}

TEST(CliTest, EvaluatePerfectPredictions) {
  std::string gold, pred;
  for (int i = 0; i < 4; ++i) {
    const char *label = i % 2 ? "Positive" : "Negative";
    gold += json{{"review_id", "r"}, {"sentence_index", i}, {"gold_label", label}}.dump() + "\n";
    pred += json{{"review_id", "r"}, {"sentence_index", i}, {"label", label}}.dump() + "\n";
  }
  WriteFile(TempPath("gold"), gold);
  WriteFile(TempPath("pred"), pred);
  RunResult r = Qsent("--format jsonl evaluate --gold " + TempPath("gold") +
                    " --predictions " + TempPath("pred"));
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["micro"]["f1"].get<double>(), 1.0);
}

TEST(CliTest, EvaluateListsMismatchedKeys) {
  WriteFile(TempPath("gold"),
            json{{"review_id", "r"}, {"sentence_index", 0}, {"gold_label", "Positive"}}.dump() + "\n");
  WriteFile(TempPath("pred"),
            json{{"review_id", "other"}, {"sentence_index", 0}, {"label", "Positive"}}.dump() + "\n");
  RunResult r = Qsent("evaluate --gold " + TempPath("gold") + " --predictions " + TempPath("pred"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("extraction misses      1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("missed r#0"), std::string::npos) << r.out;
}

TEST(CliTest, EvaluateBadGold) {
  WriteFile(TempPath("gold"), "{oops\n");
  EXPECT_EQ(Qsent("evaluate --gold " + TempPath("gold")).code, 2);
  EXPECT_EQ(Qsent("evaluate --gold /nonexistent/gold.jsonl").code, 4);
}

TEST(CliTest, ClassifyThenEvaluateMiniCorpus) {
  const std::string pred = TempPath("mini_pred.jsonl");
  RunResult c = Qsent("--input " + FixturePath("mini_reviews.jsonl") +
                    " --format jsonl --output " + pred + " classify");
  ASSERT_EQ(c.code, 0) << c.err;
  RunResult e = Qsent("--format jsonl evaluate --gold " + FixturePath("mini_gold.jsonl") +
                    " --predictions " + pred);
  ASSERT_EQ(e.code, 0) << e.err;
  json j = json::parse(e.out);
  EXPECT_GE(j["accuracy"]["value"].get<double>(), 0.90) << e.out;
}

}  // namespace
