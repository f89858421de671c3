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

#include <charconv>
#include <string>

#include "qsent/extract.h"

namespace qsent {

NumericValue ParseNumber(std::span<const Token> tokens, const Gazetteer &units) {
  if (tokens.empty() || tokens[0].kind != TokenKind::kNumber) {
    throw ExtractError("not a number: '" +
                       (tokens.empty() ? std::string() : tokens[0].text) + "'");
  }
  const std::string &text = tokens[0].text;
  NumericValue value;
  value.raw = text;

  if (size_t colon = text.find(':'); colon != std::string::npos) {
    // Clock time; the magnitude is the hour as a fraction of a day.
    double hours = std::stod(text.substr(0, colon));
    double minutes = std::stod(text.substr(colon + 1));
    value.magnitude = hours + minutes / 60.0;
    value.unit = Unit::kClock;
    if (auto m = units.LookupLongest(tokens.subspan(1))) {
      auto info = UnitFromName(m->canonical);
      if (info && info->unit == Unit::kClock) {
        for (size_t i = 1; i <= m->length; ++i) value.raw += " " + tokens[i].text;
        value.token_count += m->length;
      }
    }
    return value;
  }

  std::string digits;
  for (char c : text) {
    if (c != ',') digits.push_back(c);
  }
  double magnitude = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                   magnitude);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ExtractError("malformed number: '" + text + "'");
  }
  value.magnitude = magnitude;

  if (auto m = units.LookupLongest(tokens.subspan(1))) {
    if (auto info = UnitFromName(m->canonical)) {
      value.unit = info->unit;
      value.unit_days = info->days;
      for (size_t i = 1; i <= m->length; ++i) {
        // "55%" stays "55%", "25 pts" keeps its space.
        if (tokens[i].span.begin != tokens[i - 1].span.end) value.raw += " ";
        value.raw += tokens[i].text;
      }
      value.token_count += m->length;
    }
  }
  return value;
}

const char *MentionKindName(MentionKind kind) {
  switch (kind) {
    case MentionKind::kMedicalTerm: return "MedicalTerm";
    case MentionKind::kNumber: return "Number";
    case MentionKind::kChangeVerb: return "ChangeVerb";
    case MentionKind::kDrugName: return "DrugName";
    case MentionKind::kUnit: return "Unit";
    case MentionKind::kModality: return "Modality";
    case MentionKind::kArrowSymbol: return "ArrowSymbol";
  }
  return "?";
}

const char *SentenceTypeName(SentenceType type) {
  switch (type) {
    case SentenceType::kFromTo: return "FromTo";
    case SentenceType::kToFinal: return "ToFinal";
    case SentenceType::kChangeByAmount: return "ChangeByAmount";
    case SentenceType::kChangeByPercent: return "ChangeByPercent";
    case SentenceType::kBaselineChange: return "BaselineChange";
  }
  return "?";
}

std::optional<SentenceType> SentenceTypeFromName(std::string_view name) {
  for (auto t : {SentenceType::kFromTo, SentenceType::kToFinal,
                 SentenceType::kChangeByAmount, SentenceType::kChangeByPercent,
                 SentenceType::kBaselineChange}) {
    if (name == SentenceTypeName(t)) return t;
  }
  return std::nullopt;
}

const char *DirectionName(Direction d) {
  switch (d) {
    case Direction::kIncrease: return "Increase";
    case Direction::kDecrease: return "Decrease";
    case Direction::kUnknown: return "Unknown";
  }
  return "?";
}

bool ChangeEvent::HasValidShape() const {
  switch (type) {
    case SentenceType::kFromTo:
      return first_value && second_value;
    case SentenceType::kToFinal:
      return second_value && !first_value;
    case SentenceType::kChangeByAmount:
      return delta.has_value() && direction != Direction::kUnknown;
    case SentenceType::kChangeByPercent:
      return percent.has_value() && direction != Direction::kUnknown;
    case SentenceType::kBaselineChange:
      return first_value && !second_value && direction != Direction::kUnknown;
  }
  return false;
}

}  // namespace qsent
