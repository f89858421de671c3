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

// Term-value extraction. A sentence goes through four stages:
//
//   RecognizeEntities  gazetteer matches, numbers with units, arrows
//   PairTermValues     ordered pattern cascade binding numbers to terms
//   FilterFactual      drops dosage, time, desire/conditional and other
//                      sentiment-free numeric mentions
//   ClassifySentenceType  enforces the per-type field invariants and gives
//                      the opinionated/non-opinionated verdict
//
// ExtractReview runs the stages over every sentence of a review, merges
// "Before ...: / After ...:" value lists and attaches drug context.

#ifndef QSENT_EXTRACT_H_
#define QSENT_EXTRACT_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsent/lexicon.h"
#include "qsent/text.h"

namespace qsent {

struct NumericValue {
  double magnitude = 0;
  Unit unit = Unit::kNone;
  std::string raw;
  double unit_days = 0;     // days per unit for time units
  size_t token_count = 1;   // number token plus consumed unit tokens

  std::optional<double> Days() const {
    if (unit != Unit::kTimeUnit || unit_days <= 0) return std::nullopt;
    return magnitude * unit_days;
  }
};

class ExtractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses the number at tokens[0] and any unit that follows it ("25 pts",
// "55%", "9:30 pm", "mg/dl"). Throws ExtractError if tokens[0] is not a
// Number token.
NumericValue ParseNumber(std::span<const Token> tokens, const Gazetteer &units);

enum class MentionKind {
  kMedicalTerm,
  kNumber,
  kChangeVerb,
  kDrugName,
  kUnit,
  kModality,
  kArrowSymbol,
};

const char *MentionKindName(MentionKind kind);

struct EntityMention {
  MentionKind kind;
  std::string canonical;  // term id, verb direction, drug id, unit id...
  size_t begin = 0;       // token range [begin, end) within the sentence
  size_t end = 0;
  std::optional<NumericValue> value;  // numbers only
  std::string text;                   // surface text of the range
};

std::vector<EntityMention> RecognizeEntities(const Sentence &sentence,
                                             const Lexicons &lexicons);

enum class SentenceType {
  kFromTo,
  kToFinal,
  kChangeByAmount,
  kChangeByPercent,
  // A past reading followed by a directional cue with no new value:
  // "Triglycerides were 871, now down to almost normal range".
  kBaselineChange,
};

const char *SentenceTypeName(SentenceType type);
std::optional<SentenceType> SentenceTypeFromName(std::string_view name);

enum class Direction { kIncrease, kDecrease, kUnknown };

const char *DirectionName(Direction d);

struct ChangeEvent {
  TermId term = TermId::kCholesterol;
  SentenceType type = SentenceType::kToFinal;
  std::optional<NumericValue> first_value;
  std::optional<NumericValue> second_value;
  std::optional<NumericValue> delta;
  std::optional<NumericValue> percent;
  Direction direction = Direction::kUnknown;

  std::optional<std::string> drug;
  std::optional<double> dosage_mg;
  std::optional<double> duration_days;

  std::vector<EntityMention> evidence;
  std::string pattern;  // rule that produced the event, e.g. "P1"
  bool implicit = false;  // "TERM is NUM" reading without a change cue

  std::string review_id;
  int sentence_index = 0;
  Span term_span;  // byte offsets into the review text

  // Checks the field pattern required by `type`.
  bool HasValidShape() const;
};

struct PairingOptions {
  // Maximum number of non-punctuation tokens between a term and the first
  // element of the pattern that binds it.
  size_t window = 6;
};

struct PairingResult {
  std::vector<ChangeEvent> events;
  size_t unmatched_numbers = 0;
  size_t unmatched_terms = 0;
};

PairingResult PairTermValues(const Sentence &sentence,
                             std::span<const EntityMention> mentions,
                             const PairingOptions &options = {});

struct DroppedEvent {
  ChangeEvent event;
  std::string reason;
};

struct FilterResult {
  std::vector<ChangeEvent> kept;
  std::vector<DroppedEvent> dropped;
};

FilterResult FilterFactual(const Sentence &sentence,
                           std::span<const EntityMention> mentions,
                           std::vector<ChangeEvent> events);

struct TypedSentence {
  std::vector<ChangeEvent> events;
  std::vector<DroppedEvent> dropped;
  bool non_opinionated = true;
};

TypedSentence ClassifySentenceType(std::vector<ChangeEvent> events);

struct Review {
  std::string review_id;
  std::optional<std::string> drug;
  std::optional<std::string> dosage;
  std::optional<std::string> duration;
  std::string text;
};

struct ReviewContext {
  std::optional<std::string> drug;  // resolved drug id
  std::optional<double> dosage_mg;
  std::optional<double> duration_days;
};

// Resolves review metadata through the lexicons. Falls back to the first
// in-text drug mention when the metadata has no recognizable drug.
ReviewContext BuildReviewContext(const Review &review,
                                 std::span<const Sentence> sentences,
                                 const Lexicons &lexicons);

// Fills drug, dosage and duration on each event: nearest in-sentence drug
// mention, else the review drug; in-sentence dosage and duration numbers
// before review metadata.
void AttachContext(const ReviewContext &context,
                   std::span<const EntityMention> mentions,
                   std::span<ChangeEvent> events);

struct SentenceExtraction {
  Sentence sentence;
  std::vector<EntityMention> mentions;
  std::vector<ChangeEvent> events;
  std::vector<DroppedEvent> dropped;
  size_t unmatched_numbers = 0;
  bool non_opinionated = true;
};

struct ReviewExtraction {
  Review review;
  ReviewContext context;
  std::vector<SentenceExtraction> sentences;

  size_t EventCount() const;
};

ReviewExtraction ExtractReview(const Review &review, const Lexicons &lexicons,
                               const PairingOptions &options = {});

// Single-sentence convenience wrapper: the text is treated as one review.
std::vector<ChangeEvent> ExtractEvents(std::string_view text,
                                       const Lexicons &lexicons);

}  // namespace qsent

#endif  // QSENT_EXTRACT_H_
