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

// End-to-end sentiment classification: change events become fuzzy inputs,
// the knowledge base is run, and the crisp score is mapped to a label.

#ifndef QSENT_CLASSIFY_H_
#define QSENT_CLASSIFY_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsent/extract.h"
#include "qsent/fuzzy.h"

namespace qsent {

enum class Label {
  kPositive,
  kNeutral,
  kNegative,
  kUnclassified,     // an event was found but no rule fired
  kNonOpinionated,   // no sentiment-bearing event in the sentence
};

const char *LabelName(Label label);
std::optional<Label> LabelFromName(std::string_view name);

struct LabelThresholds {
  double negative_below = -0.15;
  double positive_above = 0.15;
};

Label LabelForScore(double score, const LabelThresholds &thresholds = {});

struct InputEntry {
  std::string variable;
  double value = 0;
  std::string source;  // event field the value came from
};

class FuzzyInputAssignment {
 public:
  // Throws std::logic_error if `variable` is already assigned.
  void Set(std::string variable, double value, std::string source);
  bool Has(std::string_view variable) const;
  std::optional<double> Get(std::string_view variable) const;

  const std::vector<InputEntry> &entries() const { return entries_; }
  std::map<std::string, double, NameLess> AsMap() const;

  std::vector<std::string> notes;

 private:
  std::vector<InputEntry> entries_;
};

// Whether the event moves its term toward the healthy direction. Absent
// when the direction is unknown or the term has no preferred direction.
std::optional<bool> IsImproving(const ChangeEvent &event);

// Maps an event and its context to KB inputs. Variables the KB does not
// declare are left out and noted.
FuzzyInputAssignment FeaturesToInputs(const ChangeEvent &event,
                                      const KnowledgeBase &kb);

struct SentimentResult {
  Label label = Label::kNonOpinionated;
  std::optional<double> crisp_score;
  std::optional<ChangeEvent> event;  // absent for NonOpinionated sentences
  FuzzyInputAssignment inputs;
  InferenceTrace trace;

  std::string review_id;
  int sentence_index = 0;
  std::string sentence_text;
  std::vector<std::string> notes;

  // (rule id, activation) for every rule with positive activation.
  std::vector<std::pair<std::string, double>> FiredRules() const;
};

struct ClassifyOptions {
  InferOptions infer;
  LabelThresholds thresholds;
  PairingOptions pairing;
};

SentimentResult ClassifyEvent(const KnowledgeBase &kb, const ChangeEvent &event,
                              const ClassifyOptions &options = {});

// One result per event, ordered by sentence then event; sentences without
// events get a single NonOpinionated result. Per-sentence failures are
// recorded as notes and never abort the review.
std::vector<SentimentResult> ClassifyReview(const KnowledgeBase &kb,
                                            const Lexicons &lexicons,
                                            const Review &review,
                                            const ClassifyOptions &options = {});

// Same, for an already extracted review.
std::vector<SentimentResult> ClassifyExtraction(
    const KnowledgeBase &kb, const ReviewExtraction &extraction,
    const ClassifyOptions &options = {});

// Majority label with ties broken Positive > Negative > Neutral. Unclassified
// votes count only when nothing else is present; an empty list is
// NonOpinionated.
Label FuseLabels(std::span<const Label> labels);

// Collapses multi-event sentences to one result carrying the fused label.
std::vector<SentimentResult> FuseBySentence(std::vector<SentimentResult> results);

}  // namespace qsent

#endif  // QSENT_CLASSIFY_H_
