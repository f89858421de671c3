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

// Gold-standard comparison: a 3x3 confusion matrix (predicted x actual over
// Neutral, Positive, Negative), extraction misses, and precision / recall /
// F1 kept as exact fractions.

#ifndef QSENT_EVAL_H_
#define QSENT_EVAL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsent/classify.h"

namespace qsent {

class EvalError : public std::runtime_error {
 public:
  enum class Code { kFile, kParse, kDuplicateKey, kUnknownFormat };
  EvalError(Code code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Non-negative rational in lowest terms.
struct Fraction {
  int64_t num = 0;
  int64_t den = 1;

  static std::optional<Fraction> Of(int64_t num, int64_t den);
  double value() const { return static_cast<double>(num) / den; }
  std::string ToString() const;  // "184/228"
  bool operator==(const Fraction &) const = default;
};

// Undefined metrics (zero denominators) are nullopt.
using Metric = std::optional<double>;

struct SentenceKey {
  std::string review_id;
  int sentence_index = 0;

  auto operator<=>(const SentenceKey &) const = default;
};

struct GoldAnnotation {
  SentenceKey key;
  Label label = Label::kNonOpinionated;
  std::optional<SentenceType> type;
  std::string annotator;
  std::string text;  // optional copy of the sentence, for readability
};

// Line-delimited JSON records. Throws EvalError on malformed lines, labels
// outside {Positive, Neutral, Negative, NonOpinionated} and repeated keys.
std::vector<GoldAnnotation> ParseGold(std::string_view content,
                                      const std::string &name = "gold");
std::vector<GoldAnnotation> LoadGold(const std::filesystem::path &path);

struct Prediction {
  SentenceKey key;
  Label label = Label::kNonOpinionated;
};

// The three opinion classes in matrix order.
constexpr std::array<Label, 3> kMatrixClasses = {
    Label::kNeutral, Label::kPositive, Label::kNegative};

struct ClassMetrics {
  Label label;
  std::optional<Fraction> precision;
  std::optional<Fraction> recall;            // matched items only
  std::optional<Fraction> detection_recall;  // misses in the denominator
  Metric f1;
  Metric detection_f1;
};

struct EvalReport {
  // confusion[p][a]: predicted class p, actual class a, kMatrixClasses order.
  std::array<std::array<int64_t, 3>, 3> confusion{};
  std::array<int64_t, 3> misses_by_class{};  // gold opinionated, no label
  int64_t extraction_misses = 0;
  int64_t gold_total = 0;
  int64_t gold_non_opinionated = 0;
  int64_t non_opinionated_correct = 0;
  int64_t false_opinionated = 0;    // gold NonOpinionated, predicted a class
  int64_t unmatched_predictions = 0;  // predictions with no gold record
  std::vector<SentenceKey> missed_keys;

  std::array<ClassMetrics, 3> per_class{};
  std::optional<Fraction> micro_precision;
  std::optional<Fraction> micro_recall;
  std::optional<Fraction> micro_detection_recall;
  Metric micro_f1;
  Metric micro_detection_f1;
  Metric macro_precision;
  Metric macro_recall;
  Metric macro_f1;
  // Gold sentences whose label, NonOpinionated included, was reproduced.
  std::optional<Fraction> accuracy;

  int64_t MatrixTotal() const;
  int64_t GoldOpinionated() const { return MatrixTotal() + extraction_misses; }
};

// Several predictions for one key are fused with FuseLabels first.
EvalReport Evaluate(std::span<const Prediction> predictions,
                    std::span<const GoldAnnotation> gold);

Metric F1(Metric precision, Metric recall);

// "text" mirrors the Predicted \ Actual table layout; "json" is one JSON
// object. Throws EvalError::kUnknownFormat otherwise.
std::string RenderReport(const EvalReport &report, std::string_view format);

}  // namespace qsent

#endif  // QSENT_EVAL_H_
