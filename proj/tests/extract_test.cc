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

#include "qsent/extract.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "manifest.h"

namespace qsent {
namespace {

using testing::CheckCase;
using testing::LoadManifest;
using testing::ManifestCase;

const Lexicons &Lex() {
  static const Lexicons *lex =
      new Lexicons(LoadLexicons(DefaultDataDir() / "lexicons"));
  return *lex;
}

Sentence OneSentence(const std::string &text) {
  auto s = SplitSentences(text, "t");
  EXPECT_EQ(s.size(), 1u) << text;
  return s.front();
}

NumericValue Parse(const std::string &text) {
  return ParseNumber(Tokenize(text), Lex().units);
}

TEST(ParseNumberTest, ConsumesUnits) {
  NumericValue v = Parse("25 pts");
  EXPECT_EQ(v.magnitude, 25);
  EXPECT_EQ(v.unit, Unit::kPoints);
  EXPECT_EQ(v.token_count, 2u);

  v = Parse("55%");
  EXPECT_EQ(v.magnitude, 55);
  EXPECT_EQ(v.unit, Unit::kPercent);

  v = Parse("30 percent");
  EXPECT_EQ(v.unit, Unit::kPercent);

  EXPECT_EQ(Parse("9:30 pm").unit, Unit::kClock);
  EXPECT_EQ(Parse("175 mg/dl").unit, Unit::kMgDl);
  EXPECT_EQ(Parse("500mg").unit, Unit::kMg);
  EXPECT_EQ(Parse("13 lbs").unit, Unit::kLbs);
  EXPECT_EQ(Parse("175").unit, Unit::kNone);
  EXPECT_DOUBLE_EQ(Parse("1,500").magnitude, 1500);
}

TEST(ParseNumberTest, TimeUnitsConvertToDays) {
  NumericValue v = Parse("3 months");
  EXPECT_EQ(v.unit, Unit::kTimeUnit);
  ASSERT_TRUE(v.Days());
  EXPECT_DOUBLE_EQ(*v.Days(), 90);
  EXPECT_FALSE(Parse("30 pts").Days());
}

TEST(ParseNumberTest, RejectsNonNumbers) {
  EXPECT_THROW(Parse("LDL"), ExtractError);
  EXPECT_THROW(ParseNumber({}, Lex().units), ExtractError);
}

std::vector<std::pair<MentionKind, std::string>> Kinds(const std::string &text) {
  std::vector<std::pair<MentionKind, std::string>> out;
  for (const auto &m : RecognizeEntities(OneSentence(text), Lex())) {
    if (m.kind == MentionKind::kUnit) continue;
    out.emplace_back(m.kind, m.kind == MentionKind::kNumber ? m.text : m.canonical);
  }
  return out;
}

TEST(RecognizeEntitiesTest, DrugVerbTermNumbers) {
  auto kinds = Kinds("NIASPAN, brought my LDL from 175 to 105");
  std::vector<std::pair<MentionKind, std::string>> want = {
      {MentionKind::kDrugName, "Niacin"},
      {MentionKind::kChangeVerb, "Decrease"},
      {MentionKind::kMedicalTerm, "LDL"},
      {MentionKind::kNumber, "175"},
      {MentionKind::kNumber, "105"}};
  for (const auto &w : want) {
    EXPECT_NE(std::find(kinds.begin(), kinds.end(), w), kinds.end())
        << MentionKindName(w.first) << " " << w.second;
  }
}

TEST(RecognizeEntitiesTest, ColonReading) {
  auto kinds = Kinds("HDL: 175");
  ASSERT_EQ(kinds.size(), 2u);
  EXPECT_EQ(kinds[0].first, MentionKind::kMedicalTerm);
  EXPECT_EQ(kinds[1].first, MentionKind::kNumber);
}

TEST(RecognizeEntitiesTest, NoNumbers) {
  for (const auto &[kind, canonical] : Kinds("no numbers here")) {
    EXPECT_NE(kind, MentionKind::kNumber);
  }
}

TEST(RecognizeEntitiesTest, ArrowsAndMentionRanges) {
  Sentence s = OneSentence("LDL 81=>61 and HDL 49-->51");
  auto mentions = RecognizeEntities(s, Lex());
  int arrows = 0;
  for (const auto &m : mentions) {
    if (m.kind == MentionKind::kArrowSymbol) ++arrows;
    EXPECT_LT(m.begin, m.end);
    EXPECT_LE(m.end, s.tokens.size());
    if (m.kind == MentionKind::kNumber) EXPECT_TRUE(m.value);
  }
  EXPECT_EQ(arrows, 2);
}

std::vector<ChangeEvent> Events(const std::string &text) {
  return ExtractEvents(text, Lex());
}

TEST(PairTermValuesTest, ReadingList) {
  auto events = Events("My LDL is 64, HDL of 74 and TC 152");
  ASSERT_EQ(events.size(), 3u);
  EXPECT_EQ(events[0].term, TermId::kLDL);
  EXPECT_EQ(events[0].second_value->magnitude, 64);
  EXPECT_EQ(events[1].term, TermId::kHDL);
  EXPECT_EQ(events[1].second_value->magnitude, 74);
  EXPECT_EQ(events[2].term, TermId::kCholesterol);
  EXPECT_EQ(events[2].second_value->magnitude, 152);
  for (const auto &e : events) {
    EXPECT_EQ(e.type, SentenceType::kToFinal);
    EXPECT_EQ(e.direction, Direction::kUnknown);
    EXPECT_TRUE(e.implicit);
  }
}

TEST(PairTermValuesTest, FromToDirection) {
  auto events = Events("Increased HDL from 51 to 86");
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].type, SentenceType::kFromTo);
  EXPECT_EQ(events[0].direction, Direction::kIncrease);
  EXPECT_EQ(events[0].pattern, "P1");
}

TEST(PairTermValuesTest, PercentListKeepsOrderAndDirections) {
  auto events = Events("Reduced Total 27%, Trig 40%, LDL 32% and increased HDL 17%");
  ASSERT_EQ(events.size(), 4u);
  std::vector<Direction> dirs;
  for (const auto &e : events) {
    EXPECT_EQ(e.type, SentenceType::kChangeByPercent);
    dirs.push_back(e.direction);
  }
  EXPECT_EQ(dirs, (std::vector<Direction>{Direction::kDecrease,
                                          Direction::kDecrease,
                                          Direction::kDecrease,
                                          Direction::kIncrease}));
}

TEST(PairTermValuesTest, NumbersBindAtMostOnce) {
  Sentence s = OneSentence("LDL and HDL from 120 to 100");
  auto mentions = RecognizeEntities(s, Lex());
  auto result = PairTermValues(s, mentions);
  std::vector<double> bound;
  for (const auto &e : result.events) {
    for (const auto *v : {&e.first_value, &e.second_value, &e.delta, &e.percent}) {
      if (*v) bound.push_back((*v)->magnitude);
    }
  }
  std::sort(bound.begin(), bound.end());
  EXPECT_EQ(std::adjacent_find(bound.begin(), bound.end()), bound.end());
}

TEST(PairTermValuesTest, WindowLimitsReach) {
  Sentence s = OneSentence(
      "LDL is something I think about a lot when I see the number 150");
  auto mentions = RecognizeEntities(s, Lex());
  PairingOptions narrow;
  narrow.window = 2;
  EXPECT_TRUE(PairTermValues(s, mentions, narrow).events.empty());
}

TEST(FilterFactualTest, Reasons) {
  struct Case {
    std::string text;
    std::string reason;
  };
  for (const Case &c : std::vector<Case>{
           {"My doctor want my cholesterol went down to 150", "modality"},
           {"My weight is around 128 - 130", "no change cue"},
           {"So I decided to cut my pills in half and go back to 25mg.",
            ""},
       }) {
    ReviewExtraction x = ExtractReview({"r", {}, {}, {}, c.text}, Lex());
    EXPECT_EQ(x.EventCount(), 0u) << c.text;
    if (c.reason.empty()) continue;
    bool seen = false;
    for (const auto &se : x.sentences) {
      for (const auto &d : se.dropped) seen = seen || d.reason == c.reason;
    }
    EXPECT_TRUE(seen) << c.text << " should be dropped for " << c.reason;
  }
}

TEST(FilterFactualTest, DosageChangeIsFactual) {
  EXPECT_TRUE(
      Events("My doctor changes the normal dosage of Welchol from 624mg to 300mg")
          .empty());
}

TEST(FilterFactualTest, ModalityAfterSemicolonDoesNotScope) {
  auto events = Events("I want to lose weight; my LDL went from 160 to 120");
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].term, TermId::kLDL);
}

TEST(ClassifySentenceTypeTest, EqualValuesAreDropped) {
  EXPECT_TRUE(Events("My LDL went from 100 to 100").empty());
}

TEST(ClassifySentenceTypeTest, DirectionFollowsValues) {
  // The verb says up but the numbers say down; the numbers win.
  auto events = Events("my LDL increased from 160 to 120");
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].direction, Direction::kDecrease);
}

TEST(ClassifySentenceTypeTest, ShapeInvariants) {
  ChangeEvent e;
  e.type = SentenceType::kFromTo;
  EXPECT_FALSE(e.HasValidShape());
  e.first_value = NumericValue{100};
  e.second_value = NumericValue{90};
  EXPECT_TRUE(e.HasValidShape());
  e.type = SentenceType::kChangeByPercent;
  EXPECT_FALSE(e.HasValidShape());
}

TEST(ContextTest, ReviewDrugMetadata) {
  Review r{"r", "Niaspan", std::nullopt, std::nullopt,
           "Niaspan dropped my Triglycerides level from 311 to 175"};
  ReviewExtraction x = ExtractReview(r, Lex());
  ASSERT_EQ(x.EventCount(), 1u);
  EXPECT_EQ(x.sentences[0].events[0].drug, "Niacin");
}

TEST(ContextTest, NoDrugAnywhere) {
  auto events = Events("Cholesterol fell to 160");
  ASSERT_EQ(events.size(), 1u);
  EXPECT_FALSE(events[0].drug);
}

TEST(ContextTest, DosageAndDurationMetadata) {
  Review r{"r", "Niaspan", "500 mg", "3 months", "My LDL went from 160 to 120"};
  ReviewExtraction x = ExtractReview(r, Lex());
  ASSERT_EQ(x.EventCount(), 1u);
  const ChangeEvent &e = x.sentences[0].events[0];
  EXPECT_EQ(e.dosage_mg, 500);
  ASSERT_TRUE(e.duration_days);
  EXPECT_GT(*e.duration_days, 28);
}

TEST(ContextTest, InSentenceDosageWins) {
  auto events = Events("Good stuff, just 500 mg lowered my trig. 30 points in a month.");
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].dosage_mg, 500);
}

TEST(ExtractReviewTest, BeforeAfterListsMerge) {
  Review r{"r", {}, {}, {},
           "Before Niaspan: T-Chol 328, Trig 304, LDL 222, HDL 46. "
           "After Niaspan: T-Chol 181, Trig 150, LDL 100, HDL 52."};
  ReviewExtraction x = ExtractReview(r, Lex());
  ASSERT_EQ(x.sentences.size(), 2u);
  EXPECT_TRUE(x.sentences[0].events.empty());
  ASSERT_EQ(x.sentences[1].events.size(), 4u);
  for (const auto &e : x.sentences[1].events) {
    EXPECT_EQ(e.type, SentenceType::kFromTo);
    EXPECT_EQ(e.pattern, "P5-before-after");
    EXPECT_EQ(e.drug, "Niacin");
  }
}

TEST(ExtractReviewTest, TermSpanIndexesReviewText) {
  Review r{"r", {}, {}, {}, "Great drug. My LDL went from 160 to 120."};
  ReviewExtraction x = ExtractReview(r, Lex());
  ASSERT_EQ(x.EventCount(), 1u);
  const ChangeEvent &e = x.sentences[1].events[0];
  EXPECT_EQ(r.text.substr(e.term_span.begin, e.term_span.size()), "LDL");
  EXPECT_EQ(e.sentence_index, 1);
  EXPECT_EQ(e.review_id, "r");
}

TEST(ExtractReviewTest, Deterministic) {
  Review r{"r", "Zocor", {}, {},
           "LDL 81=>61, HDL 38=>42, total chol 130=>112. Reduced Total 27%, "
           "Trig 40%."};
  auto a = ExtractReview(r, Lex());
  auto b = ExtractReview(r, Lex());
  ASSERT_EQ(a.EventCount(), b.EventCount());
  for (size_t i = 0; i < a.sentences.size(); ++i) {
    ASSERT_EQ(a.sentences[i].events.size(), b.sentences[i].events.size());
    for (size_t k = 0; k < a.sentences[i].events.size(); ++k) {
      const auto &x = a.sentences[i].events[k];
      const auto &y = b.sentences[i].events[k];
      EXPECT_EQ(x.term, y.term);
      EXPECT_EQ(x.type, y.type);
      EXPECT_EQ(x.pattern, y.pattern);
      EXPECT_EQ(x.term_span, y.term_span);
    }
  }
}

TEST(ExtractReviewTest, EmptyReview) {
  ReviewExtraction x = ExtractReview({"r", {}, {}, {}, ""}, Lex());
  EXPECT_TRUE(x.sentences.empty());
  EXPECT_EQ(x.EventCount(), 0u);
}

// Every FromTo event points the way its values move, over every fixture.
TEST(ExtractReviewTest, FromToDirectionConsistency) {
  for (const char *name :
       {"extraction_manifest.jsonl", "regression_arrows.jsonl"}) {
    for (const ManifestCase &c : LoadManifest(name)) {
      for (const ChangeEvent &e : Events(c.text)) {
        if (e.type != SentenceType::kFromTo) continue;
        double d = e.second_value->magnitude - e.first_value->magnitude;
        EXPECT_EQ(e.direction, d > 0 ? Direction::kIncrease : Direction::kDecrease)
            << c.id;
      }
    }
  }
}

class ManifestTest : public ::testing::TestWithParam<ManifestCase> {};

TEST_P(ManifestTest, ProducesDeclaredEvents) {
  const ManifestCase &c = GetParam();
  std::string problem = CheckCase(c, Events(c.text));
  if (c.known_fail) {
    EXPECT_FALSE(problem.empty()) << c.id << " now passes; drop known_fail";
  } else {
    EXPECT_EQ(problem, "") << c.text;
  }
}

std::string CaseName(const ::testing::TestParamInfo<ManifestCase> &info) {
  std::string name;
  for (char ch : info.param.id) name += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  return name;
}

INSTANTIATE_TEST_SUITE_P(Sentences, ManifestTest,
                         ::testing::ValuesIn(LoadManifest(
                             "extraction_manifest.jsonl")),
                         CaseName);
INSTANTIATE_TEST_SUITE_P(Regressions, ManifestTest,
                         ::testing::ValuesIn(LoadManifest(
                             "regression_arrows.jsonl")),
                         CaseName);

}  // namespace
}  // namespace qsent
