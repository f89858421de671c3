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

#include "qsent/eval.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

namespace qsent {
namespace {

// Predicted x actual counts over Neutral, Positive, Negative.
constexpr int64_t kTable[3][3] = {{30, 6, 7}, {19, 139, 5}, {7, 0, 15}};

void FromMatrix(const int64_t (&m)[3][3], std::vector<Prediction> *pred,
                std::vector<GoldAnnotation> *gold) {
  int n = 0;
  for (size_t p = 0; p < 3; ++p) {
    for (size_t a = 0; a < 3; ++a) {
      for (int64_t k = 0; k < m[p][a]; ++k) {
        SentenceKey key{"r" + std::to_string(n++), 0};
        pred->push_back({key, kMatrixClasses[p]});
        gold->push_back({key, kMatrixClasses[a], std::nullopt, "", ""});
      }
    }
  }
}

TEST(FractionTest, LowestTerms) {
  auto f = Fraction::Of(184, 228);
  ASSERT_TRUE(f);
  EXPECT_EQ(*f, (Fraction{46, 57}));
  EXPECT_EQ(f->ToString(), "46/57");
  EXPECT_FALSE(Fraction::Of(0, 0));
  EXPECT_EQ(*Fraction::Of(0, 5), (Fraction{0, 1}));
}

TEST(EvaluateTest, ConfusionTableReproducesPrecision) {
  std::vector<Prediction> pred;
  std::vector<GoldAnnotation> gold;
  FromMatrix(kTable, &pred, &gold);
  EvalReport r = Evaluate(pred, gold);
  for (size_t p = 0; p < 3; ++p) {
    for (size_t a = 0; a < 3; ++a) EXPECT_EQ(r.confusion[p][a], kTable[p][a]);
  }
  EXPECT_EQ(r.MatrixTotal(), 228);
  EXPECT_EQ(r.micro_precision, Fraction::Of(184, 228));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", r.micro_precision->value());
  EXPECT_STREQ(buf, "0.81");
  // Per-class precision is row-wise, recall column-wise.
  EXPECT_EQ(r.per_class[1].precision, Fraction::Of(139, 163));
  EXPECT_EQ(r.per_class[1].recall, Fraction::Of(139, 145));
  EXPECT_EQ(r.per_class[2].recall, Fraction::Of(15, 27));
}

TEST(EvaluateTest, PerfectPredictions) {
  std::vector<GoldAnnotation> gold;
  std::vector<Prediction> pred;
  const Label labels[] = {Label::kPositive, Label::kNegative, Label::kNeutral,
                          Label::kNonOpinionated};
  for (int i = 0; i < 12; ++i) {
    SentenceKey k{"r", i};
    gold.push_back({k, labels[i % 4], std::nullopt, "", ""});
    if (labels[i % 4] != Label::kNonOpinionated) pred.push_back({k, labels[i % 4]});
  }
  EvalReport r = Evaluate(pred, gold);
  EXPECT_DOUBLE_EQ(*r.micro_f1, 1.0);
  EXPECT_DOUBLE_EQ(*r.micro_detection_f1, 1.0);
  EXPECT_DOUBLE_EQ(*r.macro_f1, 1.0);
  EXPECT_EQ(r.accuracy, Fraction::Of(1, 1));
  for (size_t p = 0; p < 3; ++p) {
    for (size_t a = 0; a < 3; ++a) {
      if (p != a) EXPECT_EQ(r.confusion[p][a], 0);
    }
  }
}

TEST(EvaluateTest, MissesCountOnlyInDetectionRecall) {
  std::vector<GoldAnnotation> gold = {
      {{"a", 0}, Label::kPositive, std::nullopt, "", ""},
      {{"a", 1}, Label::kPositive, std::nullopt, "", ""},
      {{"a", 2}, Label::kNegative, std::nullopt, "", ""},
      {{"a", 3}, Label::kNonOpinionated, std::nullopt, "", ""}};
  std::vector<Prediction> pred = {{{"a", 0}, Label::kPositive},
                                  {{"a", 2}, Label::kUnclassified},
                                  {{"a", 3}, Label::kNeutral},
                                  {{"zz", 9}, Label::kPositive}};
  EvalReport r = Evaluate(pred, gold);
  EXPECT_EQ(r.extraction_misses, 2);
  EXPECT_EQ(r.missed_keys.size(), 2u);
  EXPECT_EQ(r.micro_precision, Fraction::Of(1, 1));
  EXPECT_EQ(r.micro_recall, Fraction::Of(1, 1));
  EXPECT_EQ(r.micro_detection_recall, Fraction::Of(1, 3));
  EXPECT_EQ(r.false_opinionated, 1);
  EXPECT_EQ(r.unmatched_predictions, 1);
  // Conservation: every gold record lands in exactly one bucket.
  EXPECT_EQ(r.MatrixTotal() + r.extraction_misses + r.gold_non_opinionated,
            r.gold_total);
}

TEST(EvaluateTest, EmptyClassIsUndefinedAndLeftOutOfMacro) {
  std::vector<GoldAnnotation> gold = {
      {{"a", 0}, Label::kPositive, std::nullopt, "", ""},
      {{"a", 1}, Label::kNeutral, std::nullopt, "", ""}};
  std::vector<Prediction> pred = {{{"a", 0}, Label::kPositive},
                                  {{"a", 1}, Label::kNeutral}};
  EvalReport r = Evaluate(pred, gold);
  EXPECT_FALSE(r.per_class[2].recall);
  EXPECT_FALSE(r.per_class[2].precision);
  EXPECT_FALSE(r.per_class[2].f1);
  EXPECT_DOUBLE_EQ(*r.macro_recall, 1.0);
}

TEST(EvaluateTest, EmptyReport) {
  EvalReport r = Evaluate({}, {});
  EXPECT_EQ(r.MatrixTotal(), 0);
  EXPECT_FALSE(r.micro_precision);
  EXPECT_FALSE(r.micro_f1);
  EXPECT_FALSE(r.macro_f1);
  std::string text = RenderReport(r, "text");
  EXPECT_NE(text.find("undefined"), std::string::npos);
}

TEST(EvaluateTest, MultiplePredictionsPerSentenceAreFused) {
  std::vector<GoldAnnotation> gold = {
      {{"a", 0}, Label::kPositive, std::nullopt, "", ""}};
  std::vector<Prediction> pred = {{{"a", 0}, Label::kPositive},
                                  {{"a", 0}, Label::kNegative},
                                  {{"a", 0}, Label::kPositive}};
  EvalReport r = Evaluate(pred, gold);
  EXPECT_EQ(r.confusion[1][1], 1);
  EXPECT_EQ(r.MatrixTotal(), 1);
}

TEST(EvaluateTest, PermutationInvariant) {
  std::vector<Prediction> pred;
  std::vector<GoldAnnotation> gold;
  FromMatrix(kTable, &pred, &gold);
  EvalReport base = Evaluate(pred, gold);
  std::mt19937 rng(1);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(pred.begin(), pred.end(), rng);
    std::shuffle(gold.begin(), gold.end(), rng);
    EXPECT_EQ(RenderReport(Evaluate(pred, gold), "json"),
              RenderReport(base, "json"));
  }
}

TEST(GoldTest, ParsesRecords) {
  auto gold = ParseGold(
      R"({"review_id": "r1", "sentence_index": 0, "gold_label": "Positive", "gold_type": "FromTo", "annotator": "a"})"
      "\n\n"
      R"({"review_id": 7, "sentence_index": 2, "gold_label": "NonOpinionated"})"
      "\n");
  ASSERT_EQ(gold.size(), 2u);
  EXPECT_EQ(gold[0].type, SentenceType::kFromTo);
  EXPECT_EQ(gold[0].annotator, "a");
  EXPECT_EQ(gold[1].key.review_id, "7");
  EXPECT_FALSE(gold[1].type);
}

TEST(GoldTest, EmptyFileIsEmpty) { EXPECT_TRUE(ParseGold("").empty()); }

TEST(GoldTest, DuplicateKey) {
  const std::string line =
      R"({"review_id": "r1", "sentence_index": 0, "gold_label": "Positive"})";
  try {
    ParseGold(line + "\n" + line + "\n");
    FAIL();
  } catch (const EvalError &e) {
    EXPECT_EQ(e.code(), EvalError::Code::kDuplicateKey);
  }
}

TEST(GoldTest, BadRecords) {
  for (std::string bad :
       {std::string("{not json"),
        std::string(R"({"review_id": "r", "sentence_index": 0, "gold_label": "Happy"})"),
        std::string(R"({"review_id": "r", "sentence_index": 0, "gold_label": "Unclassified"})"),
        std::string(R"({"review_id": "r", "gold_label": "Positive"})"),
        std::string(R"({"review_id": "r", "sentence_index": 0, "gold_label": "Positive", "gold_type": "Sideways"})")}) {
    try {
      ParseGold(bad);
      FAIL() << bad;
    } catch (const EvalError &e) {
      EXPECT_EQ(e.code(), EvalError::Code::kParse) << bad;
    }
  }
}

TEST(GoldTest, MissingFile) {
  try {
    LoadGold("/nonexistent/gold.jsonl");
    FAIL();
  } catch (const EvalError &e) {
    EXPECT_EQ(e.code(), EvalError::Code::kFile);
  }
}

TEST(RenderReportTest, TextLayout) {
  std::vector<Prediction> pred;
  std::vector<GoldAnnotation> gold;
  FromMatrix(kTable, &pred, &gold);
  std::string text = RenderReport(Evaluate(pred, gold), "text");
  EXPECT_EQ(text.rfind("Predicted \\ Actual", 0), 0u);
  EXPECT_NE(text.find("0.81 (46/57)"), std::string::npos);
}

TEST(RenderReportTest, JsonHasEveryField) {
  EvalReport r = Evaluate({}, {});
  auto j = nlohmann::json::parse(RenderReport(r, "json"));
  for (const char *key : {"confusion", "extraction_misses", "gold_total",
                          "per_class", "micro", "macro", "accuracy", "missed"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(RenderReportTest, UnknownFormat) {
  try {
    RenderReport(EvalReport{}, "xml");
    FAIL();
  } catch (const EvalError &e) {
    EXPECT_EQ(e.code(), EvalError::Code::kUnknownFormat);
  }
}

TEST(F1Test, HarmonicMean) {
  EXPECT_DOUBLE_EQ(*F1(0.5, 1.0), 2.0 / 3.0);
  EXPECT_FALSE(F1(0.0, 0.0));
  EXPECT_FALSE(F1(std::nullopt, 1.0));
}

}  // namespace
}  // namespace qsent
