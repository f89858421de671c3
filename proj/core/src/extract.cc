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

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace qsent {
namespace {

using WordSet = std::unordered_set<std::string_view>;

// Words allowed between a connector ("to", "now", "-->") and the second
// value of a two-value change.
const WordSet kValueFillers = {
    "its", "it's", "it", "is", "was", "at", "about", "around", "approximately",
    "approx", "almost", "nearly", "just", "only", "to", "into", "under",
    "over", "like", "a", "an", "mere", "~", "down", "up"};

// Words allowed between a term and its value in a verbless reading.
const WordSet kReadingFillers = {
    "is", "was", "were", "are", "of", "at", "around", "about",
    "approximately", "approx", "now", "currently", "only", "just", "=", "~",
    "level", "levels", "reading", "count", "number", "numbers", "score"};

const WordSet kPastReading = {"was", "were", "used", "started", "began",
                              "had", "been"};

const WordSet kTargetFillers = {"about", "around", "approximately", "approx",
                                "almost", "nearly", "just", "only", "under",
                                "a", "~", "below"};

enum class ItemKind {
  kTerm, kNumber, kVerb, kArrow, kDrug, kModality, kUnit, kWord, kPunct,
  kSymbol,
};

// A sentence position: either a recognized mention or a bare token.
struct Item {
  ItemKind kind;
  int mention = -1;
  size_t begin = 0;
  size_t end = 0;
  std::string folded;
};

ItemKind ItemKindFor(MentionKind kind) {
  switch (kind) {
    case MentionKind::kMedicalTerm: return ItemKind::kTerm;
    case MentionKind::kNumber: return ItemKind::kNumber;
    case MentionKind::kChangeVerb: return ItemKind::kVerb;
    case MentionKind::kDrugName: return ItemKind::kDrug;
    case MentionKind::kUnit: return ItemKind::kUnit;
    case MentionKind::kModality: return ItemKind::kModality;
    case MentionKind::kArrowSymbol: return ItemKind::kArrow;
  }
  return ItemKind::kWord;
}

std::vector<Item> BuildItems(const Sentence &s,
                             std::span<const EntityMention> mentions) {
  std::vector<int> starts(s.tokens.size(), -1);
  for (size_t m = 0; m < mentions.size(); ++m) {
    // Unit mentions nested inside a number mention are not separate items.
    if (starts[mentions[m].begin] == -1) {
      starts[mentions[m].begin] = static_cast<int>(m);
    }
  }
  std::vector<Item> items;
  size_t i = 0;
  while (i < s.tokens.size()) {
    if (int m = starts[i]; m >= 0) {
      const EntityMention &em = mentions[static_cast<size_t>(m)];
      items.push_back({ItemKindFor(em.kind), m, em.begin, em.end,
                       FoldCase(em.text)});
      i = std::max(em.end, i + 1);
      continue;
    }
    const Token &t = s.tokens[i];
    ItemKind kind = t.kind == TokenKind::kPunct    ? ItemKind::kPunct
                    : t.kind == TokenKind::kSymbol ? ItemKind::kSymbol
                                                   : ItemKind::kWord;
    items.push_back({kind, -1, i, i + 1, FoldCase(t.text)});
    ++i;
  }
  return items;
}

bool IsBindable(const NumericValue &v) {
  return v.unit == Unit::kNone || v.unit == Unit::kMgDl ||
         v.unit == Unit::kPoints || v.unit == Unit::kPercent ||
         v.unit == Unit::kLbs;
}

bool IsLevelUnit(Unit u) {
  return u == Unit::kNone || u == Unit::kMgDl || u == Unit::kLbs;
}

std::optional<Direction> ResolveVerb(VerbDirection v, TermId term) {
  switch (v) {
    case VerbDirection::kIncrease: return Direction::kIncrease;
    case VerbDirection::kDecrease: return Direction::kDecrease;
    case VerbDirection::kNeutral: return std::nullopt;
    case VerbDirection::kImprove:
      switch (GetTermInfo(term).desirable) {
        case Desirable::kDown: return Direction::kDecrease;
        case Desirable::kUp: return Direction::kIncrease;
        case Desirable::kContextDependent: return std::nullopt;
      }
  }
  return std::nullopt;
}

Direction FromValues(double first, double second) {
  if (second > first) return Direction::kIncrease;
  if (second < first) return Direction::kDecrease;
  return Direction::kUnknown;
}

class Pairer {
 public:
  Pairer(const Sentence &s, std::span<const EntityMention> mentions,
         const PairingOptions &options)
      : sentence_(s), mentions_(mentions), options_(options),
        items_(BuildItems(s, mentions)), used_(items_.size(), false) {}

  PairingResult Run() {
    std::vector<size_t> terms;
    for (size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].kind == ItemKind::kTerm) terms.push_back(i);
    }
    for (size_t n = 0; n < terms.size(); ++n) {
      size_t t = terms[n];
      size_t region_end = n + 1 < terms.size() ? terms[n + 1] : items_.size();
      auto term = TermFromName(Mention(t).canonical);
      if (!term) continue;
      if (auto event = MatchTerm(*term, t, region_end)) {
        result_.events.push_back(std::move(*event));
      } else {
        ++result_.unmatched_terms;
      }
    }
    AnchorWeightByUnit(terms);
    for (size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].kind == ItemKind::kNumber && !used_[i] &&
          IsBindable(Value(i))) {
        ++result_.unmatched_numbers;
      }
    }
    return std::move(result_);
  }

 private:
  const EntityMention &Mention(size_t item) const {
    return mentions_[static_cast<size_t>(items_[item].mention)];
  }
  const NumericValue &Value(size_t item) const { return *Mention(item).value; }

  bool IsNumber(size_t i) const {
    return items_[i].kind == ItemKind::kNumber && !used_[i] &&
           IsBindable(Value(i));
  }
  bool IsPunct(size_t i) const { return items_[i].kind == ItemKind::kPunct; }
  bool IsWord(size_t i, const WordSet &set) const {
    return (items_[i].kind == ItemKind::kWord ||
            items_[i].kind == ItemKind::kSymbol) &&
           set.count(items_[i].folded) > 0;
  }
  bool IsWord(size_t i, std::string_view w) const {
    return items_[i].kind == ItemKind::kWord && items_[i].folded == w;
  }
  bool IsConnector(size_t i) const {
    return items_[i].kind == ItemKind::kArrow || IsWord(i, "to") ||
           IsWord(i, "into") || IsWord(i, "now") || IsWord(i, "then");
  }

  // Non-punctuation items strictly between a and b.
  size_t Distance(size_t a, size_t b) const {
    size_t n = 0;
    for (size_t i = a + 1; i < b; ++i) {
      if (!IsPunct(i)) ++n;
    }
    return n;
  }
  bool InWindow(size_t term, size_t i) const {
    return Distance(term, i) <= options_.window;
  }

  std::optional<VerbDirection> VerbAt(size_t i) const {
    if (items_[i].kind != ItemKind::kVerb) return std::nullopt;
    return VerbDirectionFromName(Mention(i).canonical);
  }

  // First verb between the term and `upto`, else the nearest verb before
  // the term anywhere in the sentence.
  std::optional<size_t> GoverningVerb(size_t term, size_t upto,
                                      bool want_direction, TermId id) const {
    for (size_t i = term + 1; i < upto; ++i) {
      if (auto v = VerbAt(i)) {
        if (!want_direction || ResolveVerb(*v, id)) return i;
      }
    }
    for (size_t i = term; i-- > 0;) {
      if (auto v = VerbAt(i)) {
        if (!want_direction || ResolveVerb(*v, id)) return i;
      }
    }
    return std::nullopt;
  }

  ChangeEvent NewEvent(TermId term, size_t term_item, SentenceType type,
                       const char *pattern) const {
    ChangeEvent e;
    e.term = term;
    e.type = type;
    e.pattern = pattern;
    e.review_id = sentence_.review_id;
    e.sentence_index = sentence_.index;
    const Item &it = items_[term_item];
    e.term_span = {sentence_.tokens[it.begin].span.begin,
                   sentence_.tokens[it.end - 1].span.end};
    e.evidence.push_back(Mention(term_item));
    return e;
  }

  void Bind(ChangeEvent &e, size_t item) {
    used_[item] = true;
    e.evidence.push_back(Mention(item));
  }

  std::optional<ChangeEvent> MatchTerm(TermId term, size_t t, size_t end) {
    if (auto e = MatchFromTo(term, t, end)) return e;
    if (auto e = MatchBaseline(term, t, end)) return e;
    if (auto e = MatchPercent(term, t, end)) return e;
    if (auto e = MatchAmount(term, t, end)) return e;
    if (auto e = MatchToFinal(term, t, end)) return e;
    if (auto e = MatchReading(term, t, end)) return e;
    return std::nullopt;
  }

  bool IsLevelNumber(size_t i) const {
    return IsNumber(i) && IsLevelUnit(Value(i).unit);
  }

  // P1: TERM ... [from] NUM (to|into|now|-->|=>) NUM
  std::optional<ChangeEvent> MatchFromTo(TermId term, size_t t, size_t end) {
    for (size_t j = t + 1; j < end && InWindow(t, j); ++j) {
      if (!IsLevelNumber(j)) continue;
      std::optional<size_t> connector;
      size_t steps = 0;
      for (size_t k = j + 1; k < end && steps < 4; ++k) {
        if (items_[k].kind == ItemKind::kNumber) break;
        if (IsConnector(k)) {
          connector = k;
          break;
        }
        if (!IsPunct(k)) ++steps;
      }
      if (!connector) continue;
      size_t m = *connector + 1;
      size_t fillers = 0;
      while (m < end && fillers <= 3 && !IsNumber(m) &&
             (IsPunct(m) || IsWord(m, kValueFillers) || VerbAt(m))) {
        if (!IsPunct(m)) ++fillers;
        ++m;
      }
      if (m >= end || fillers > 3 || !IsLevelNumber(m)) continue;
      ChangeEvent e = NewEvent(term, t, SentenceType::kFromTo, "P1");
      e.first_value = Value(j);
      e.second_value = Value(m);
      e.direction = FromValues(Value(j).magnitude, Value(m).magnitude);
      Bind(e, j);
      if (items_[*connector].kind == ItemKind::kArrow) {
        e.evidence.push_back(Mention(*connector));
      }
      Bind(e, m);
      return e;
    }
    return std::nullopt;
  }

  // TERM (was|were) NUM ... now VERB(dir), with no second value.
  std::optional<ChangeEvent> MatchBaseline(TermId term, size_t t, size_t end) {
    bool past = false;
    for (size_t j = t + 1; j < end && InWindow(t, j); ++j) {
      if (IsWord(j, kPastReading)) past = true;
      if (!IsLevelNumber(j)) continue;
      if (!past) return std::nullopt;
      for (size_t k = j + 1; k < end; ++k) {
        if (items_[k].kind == ItemKind::kNumber) return std::nullopt;
        if (!IsWord(k, "now") && !IsWord(k, "currently")) continue;
        for (size_t v = k + 1; v < end && v <= k + 3; ++v) {
          auto dir = VerbAt(v);
          if (!dir) continue;
          auto resolved = ResolveVerb(*dir, term);
          if (!resolved) continue;
          for (size_t r = v + 1; r < end; ++r) {
            if (items_[r].kind == ItemKind::kNumber) return std::nullopt;
          }
          ChangeEvent e = NewEvent(term, t, SentenceType::kBaselineChange,
                                   "P1b");
          e.first_value = Value(j);
          e.direction = *resolved;
          Bind(e, j);
          e.evidence.push_back(Mention(v));
          return e;
        }
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<Direction> DirectionFor(TermId term, size_t t, size_t upto,
                                        std::optional<size_t> *verb) const {
    auto v = GoverningVerb(t, upto, /*want_direction=*/true, term);
    if (!v) return std::nullopt;
    *verb = v;
    return ResolveVerb(*VerbAt(*v), term);
  }

  // P2: VERB(dir) ... TERM ... [by] NUM%   |   TERM up/down NUM%
  std::optional<ChangeEvent> MatchPercent(TermId term, size_t t, size_t end) {
    for (size_t j = t + 1; j < end && InWindow(t, j); ++j) {
      if (!IsNumber(j) || Value(j).unit != Unit::kPercent) continue;
      std::optional<size_t> verb;
      auto dir = DirectionFor(term, t, j, &verb);
      if (!dir) return std::nullopt;
      ChangeEvent e = NewEvent(term, t, SentenceType::kChangeByPercent, "P2");
      e.percent = Value(j);
      e.direction = *dir;
      e.evidence.push_back(Mention(*verb));
      Bind(e, j);
      return e;
    }
    return std::nullopt;
  }

  // P3: VERB(dir) ... TERM ... NUM pts   |   TERM VERB [by] NUM
  //     VERB(dir) ... TERM ... by NUM
  std::optional<ChangeEvent> MatchAmount(TermId term, size_t t, size_t end) {
    auto make = [&](size_t j, size_t verb, Direction dir) {
      ChangeEvent e = NewEvent(term, t, SentenceType::kChangeByAmount, "P3");
      e.delta = Value(j);
      e.direction = dir;
      e.evidence.push_back(Mention(verb));
      Bind(e, j);
      return e;
    };
    // TERM VERB [by] NUM
    if (t + 1 < end) {
      if (auto v = VerbAt(t + 1)) {
        if (auto dir = ResolveVerb(*v, term)) {
          size_t j = t + 2;
          if (j < end && IsWord(j, "by")) ++j;
          if (j < end && IsNumber(j) && Value(j).unit != Unit::kPercent) {
            return make(j, t + 1, *dir);
          }
        }
      }
    }
    for (size_t j = t + 1; j < end && InWindow(t, j); ++j) {
      if (!IsNumber(j)) continue;
      const Unit unit = Value(j).unit;
      bool points = unit == Unit::kPoints;
      bool by = j > t + 1 && IsWord(j - 1, "by") && unit != Unit::kPercent;
      if (!points && !by) continue;
      std::optional<size_t> verb;
      auto dir = DirectionFor(term, t, j, &verb);
      if (!dir) return std::nullopt;
      return make(j, *verb, *dir);
    }
    return std::nullopt;
  }

  // P4: VERB ... TERM ... (to|into) NUM   |   TERM VERB (to|into) NUM
  std::optional<ChangeEvent> MatchToFinal(TermId term, size_t t, size_t end) {
    for (size_t j = t + 1; j < end && InWindow(t, j); ++j) {
      if (!IsWord(j, "to") && !IsWord(j, "into")) continue;
      size_t m = j + 1;
      while (m < end && m <= j + 2 && IsWord(m, kTargetFillers)) ++m;
      if (m >= end || !IsLevelNumber(m)) continue;
      auto verb = GoverningVerb(t, j, /*want_direction=*/false, term);
      if (!verb) return std::nullopt;
      // A directional verb anywhere before the target beats a neutral one.
      auto directed = GoverningVerb(t, j, /*want_direction=*/true, term);
      if (directed) verb = directed;
      ChangeEvent e = NewEvent(term, t, SentenceType::kToFinal, "P4");
      e.second_value = Value(m);
      e.direction =
          ResolveVerb(*VerbAt(*verb), term).value_or(Direction::kUnknown);
      e.evidence.push_back(Mention(*verb));
      Bind(e, m);
      return e;
    }
    return std::nullopt;
  }

  // P5: TERM (is|:|of|=) NUM, verbless readings and lists.
  std::optional<ChangeEvent> MatchReading(TermId term, size_t t, size_t end) {
    size_t fillers = 0;
    for (size_t j = t + 1; j < end; ++j) {
      if (IsLevelNumber(j)) {
        ChangeEvent e = NewEvent(term, t, SentenceType::kToFinal, "P5");
        e.second_value = Value(j);
        e.implicit = true;
        Bind(e, j);
        return e;
      }
      if (IsPunct(j) && items_[j].folded != "." ) continue;
      if (!IsWord(j, kReadingFillers) || ++fillers > 3) break;
    }
    return std::nullopt;
  }

  // "I lost 13 lbs": a directional verb directly before a weight amount
  // stands in for the missing "weight" term.
  void AnchorWeightByUnit(const std::vector<size_t> &terms) {
    for (size_t t : terms) {
      if (Mention(t).canonical == GetTermInfo(TermId::kWeight).name) return;
    }
    for (size_t j = 0; j < items_.size(); ++j) {
      if (!IsNumber(j) || Value(j).unit != Unit::kLbs) continue;
      size_t v = j;
      if (v > 0 && IsWord(v - 1, "by")) --v;
      if (v == 0) continue;
      auto dir = VerbAt(v - 1);
      if (!dir) continue;
      auto resolved = ResolveVerb(*dir, TermId::kWeight);
      if (!resolved) continue;
      ChangeEvent e;
      e.term = TermId::kWeight;
      e.type = SentenceType::kChangeByAmount;
      e.pattern = "P3-unit";
      e.review_id = sentence_.review_id;
      e.sentence_index = sentence_.index;
      const Item &verb = items_[v - 1];
      e.term_span = {sentence_.tokens[verb.begin].span.begin,
                     sentence_.tokens[items_[j].end - 1].span.end};
      e.delta = Value(j);
      e.direction = *resolved;
      e.evidence.push_back(Mention(v - 1));
      Bind(e, j);
      result_.events.push_back(std::move(e));
    }
  }

  const Sentence &sentence_;
  std::span<const EntityMention> mentions_;
  PairingOptions options_;
  std::vector<Item> items_;
  std::vector<bool> used_;
  PairingResult result_;
};

const EntityMention *TermMention(const ChangeEvent &e) {
  for (const EntityMention &m : e.evidence) {
    if (m.kind == MentionKind::kMedicalTerm) return &m;
  }
  return e.evidence.empty() ? nullptr : &e.evidence.front();
}

std::vector<const NumericValue *> Values(const ChangeEvent &e) {
  std::vector<const NumericValue *> out;
  for (const auto *v : {&e.first_value, &e.second_value, &e.delta,
                        &e.percent}) {
    if (v->has_value()) out.push_back(&v->value());
  }
  return out;
}

bool IsSlash(const Token &t) { return t.text == "/"; }

// "500/29/87/236": slash-joined number tables have no reliable term order.
bool InSlashTable(const Sentence &s, const EntityMention &number) {
  const auto &tok = s.tokens;
  if (number.begin >= 2 && IsSlash(tok[number.begin - 1]) &&
      tok[number.begin - 2].kind == TokenKind::kNumber) {
    return true;
  }
  size_t after = number.begin + 1;
  return after + 1 < tok.size() && IsSlash(tok[after]) &&
         tok[after + 1].kind == TokenKind::kNumber;
}

std::optional<std::string> FilterReason(
    const Sentence &s, std::span<const EntityMention> mentions,
    const ChangeEvent &e) {
  for (const NumericValue *v : Values(e)) {
    if (v->unit == Unit::kMg) return "dosage";
    if (v->unit == Unit::kTimeUnit) return "duration";
    if (v->unit == Unit::kClock) return "clock time";
    if (v->unit == Unit::kLbs && e.term != TermId::kWeight) {
      return "unit mismatch";
    }
    if (v->unit == Unit::kMgDl && e.term == TermId::kWeight) {
      return "unit mismatch";
    }
  }
  for (const EntityMention &num : e.evidence) {
    if (num.kind != MentionKind::kNumber) continue;
    for (const EntityMention &drug : mentions) {
      if (drug.kind != MentionKind::kDrugName) continue;
      if (drug.end == num.begin || num.end == drug.begin) return "dosage";
    }
    if (InSlashTable(s, num)) return "slash table";
  }
  if (const EntityMention *term = TermMention(e)) {
    for (const EntityMention &m : mentions) {
      if (m.kind != MentionKind::kModality || m.begin >= term->begin) continue;
      bool separated = false;
      for (size_t i = m.end; i < term->begin; ++i) {
        if (s.tokens[i].text == ";") separated = true;
      }
      if (!separated) return "modality";
    }
  }
  if (GetTermInfo(e.term).needs_change_cue) {
    bool two_values = e.type == SentenceType::kFromTo ||
                      e.type == SentenceType::kBaselineChange;
    bool verb = e.direction != Direction::kUnknown && !e.implicit;
    if (!two_values && !verb) return "no change cue";
  }
  if (e.type == SentenceType::kFromTo && e.first_value && e.second_value &&
      e.first_value->magnitude == e.second_value->magnitude) {
    return "no change";
  }
  return std::nullopt;
}

std::optional<double> ParseDosage(const std::string &text,
                                  const Lexicons &lex) {
  std::vector<Token> tokens = Tokenize(text);
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::kNumber) continue;
    NumericValue v = ParseNumber(std::span(tokens).subspan(i), lex.units);
    if (v.unit == Unit::kNone || v.unit == Unit::kMg) return v.magnitude;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> ParseDuration(const std::string &text,
                                    const Lexicons &lex) {
  std::vector<Token> tokens = Tokenize(text);
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::kNumber) continue;
    return ParseNumber(std::span(tokens).subspan(i), lex.units).Days();
  }
  return std::nullopt;
}

std::optional<std::string> FindDrug(std::span<const Token> tokens,
                                    const Gazetteer &drugs) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (auto m = drugs.LookupLongest(tokens.subspan(i))) return m->canonical;
  }
  return std::nullopt;
}

size_t TokenDistance(const EntityMention &a, size_t pos) {
  if (pos < a.begin) return a.begin - pos;
  if (pos >= a.end) return pos - a.end + 1;
  return 0;
}

// Pairs "Before X: TERM v, ..." readings with the "After X: TERM v, ..."
// readings that follow them, within a sentence or across adjacent ones.
void MergeBeforeAfter(std::vector<SentenceExtraction> &sentences) {
  enum class Cue { kNone, kBefore, kAfter };
  struct Group {
    size_t sentence;
    Cue cue;
    std::vector<size_t> events;
  };
  std::vector<Group> groups;
  for (size_t si = 0; si < sentences.size(); ++si) {
    const Sentence &s = sentences[si].sentence;
    for (size_t ei = 0; ei < sentences[si].events.size(); ++ei) {
      const ChangeEvent &e = sentences[si].events[ei];
      if (!e.implicit) continue;
      const EntityMention *term = TermMention(e);
      Cue cue = Cue::kNone;
      for (size_t i = 0; term && i < term->begin; ++i) {
        if (s.tokens[i].Is("before")) cue = Cue::kBefore;
        if (s.tokens[i].Is("after")) cue = Cue::kAfter;
      }
      if (groups.empty() || groups.back().sentence != si ||
          groups.back().cue != cue) {
        groups.push_back({si, cue, {}});
      }
      groups.back().events.push_back(ei);
    }
  }

  std::vector<std::vector<bool>> remove(sentences.size());
  for (size_t si = 0; si < sentences.size(); ++si) {
    remove[si].assign(sentences[si].events.size(), false);
  }
  for (size_t g = 0; g + 1 < groups.size(); ++g) {
    const Group &before = groups[g];
    const Group &after = groups[g + 1];
    if (before.cue != Cue::kBefore || after.cue != Cue::kAfter) continue;
    std::vector<bool> taken(before.events.size(), false);
    for (size_t ai : after.events) {
      ChangeEvent &a = sentences[after.sentence].events[ai];
      for (size_t b = 0; b < before.events.size(); ++b) {
        const ChangeEvent &prior =
            sentences[before.sentence].events[before.events[b]];
        if (taken[b] || prior.term != a.term) continue;
        taken[b] = true;
        ChangeEvent merged = a;
        merged.type = SentenceType::kFromTo;
        merged.pattern = "P5-before-after";
        merged.implicit = false;
        merged.first_value = prior.second_value;
        merged.direction = FromValues(prior.second_value->magnitude,
                                      a.second_value->magnitude);
        merged.evidence.insert(merged.evidence.begin() + 1,
                               prior.evidence.begin() + 1,
                               prior.evidence.end());
        a = std::move(merged);
        remove[before.sentence][before.events[b]] = true;
        break;
      }
    }
  }
  for (size_t si = 0; si < sentences.size(); ++si) {
    auto &events = sentences[si].events;
    std::vector<ChangeEvent> kept;
    for (size_t ei = 0; ei < events.size(); ++ei) {
      if (!remove[si][ei]) kept.push_back(std::move(events[ei]));
    }
    events = std::move(kept);
  }
}

}  // namespace

std::vector<EntityMention> RecognizeEntities(const Sentence &sentence,
                                             const Lexicons &lex) {
  std::vector<EntityMention> mentions;
  const std::vector<Token> &tokens = sentence.tokens;
  auto text_of = [&](size_t b, size_t e) {
    return sentence.text.substr(tokens[b].span.begin - sentence.span.begin,
                                tokens[e - 1].span.end - tokens[b].span.begin);
  };
  size_t i = 0;
  while (i < tokens.size()) {
    const Token &tok = tokens[i];
    std::span<const Token> rest = std::span(tokens).subspan(i);
    if (tok.kind == TokenKind::kNumber) {
      NumericValue v = ParseNumber(rest, lex.units);
      size_t end = i + v.token_count;
      mentions.push_back({MentionKind::kNumber, UnitName(v.unit), i, end, v,
                          text_of(i, end)});
      if (v.token_count > 1) {
        mentions.push_back({MentionKind::kUnit, UnitName(v.unit), i + 1, end,
                            std::nullopt, text_of(i + 1, end)});
      }
      i = end;
      continue;
    }
    if (tok.kind == TokenKind::kSymbol &&
        (tok.text == "-->" || tok.text == "->" || tok.text == "=>" ||
         tok.text == "==>" || tok.text == "\xE2\x86\x92")) {
      mentions.push_back({MentionKind::kArrowSymbol, "Arrow", i, i + 1,
                          std::nullopt, tok.text});
      ++i;
      continue;
    }
    // Longest match across gazetteers; ties go to the earlier gazetteer.
    struct Candidate {
      MentionKind kind;
      const Gazetteer *gazetteer;
    };
    const Candidate candidates[] = {
        {MentionKind::kMedicalTerm, &lex.terms},
        {MentionKind::kDrugName, &lex.drugs},
        {MentionKind::kChangeVerb, &lex.verbs},
        {MentionKind::kModality, &lex.modality},
        {MentionKind::kUnit, &lex.units},
    };
    std::optional<EntityMention> best;
    for (const Candidate &c : candidates) {
      auto m = c.gazetteer->LookupLongest(rest);
      if (m && (!best || m->length > best->end - best->begin)) {
        best = EntityMention{c.kind, m->canonical, i, i + m->length,
                             std::nullopt, text_of(i, i + m->length)};
      }
    }
    if (best) {
      i = best->end;
      mentions.push_back(std::move(*best));
      continue;
    }
    ++i;
  }
  std::stable_sort(mentions.begin(), mentions.end(),
                   [](const EntityMention &a, const EntityMention &b) {
                     return a.begin < b.begin;
                   });
  return mentions;
}

PairingResult PairTermValues(const Sentence &sentence,
                             std::span<const EntityMention> mentions,
                             const PairingOptions &options) {
  return Pairer(sentence, mentions, options).Run();
}

FilterResult FilterFactual(const Sentence &sentence,
                           std::span<const EntityMention> mentions,
                           std::vector<ChangeEvent> events) {
  FilterResult result;
  for (ChangeEvent &e : events) {
    if (auto reason = FilterReason(sentence, mentions, e)) {
      result.dropped.push_back({std::move(e), *reason});
    } else {
      result.kept.push_back(std::move(e));
    }
  }
  return result;
}

TypedSentence ClassifySentenceType(std::vector<ChangeEvent> events) {
  TypedSentence out;
  for (ChangeEvent &e : events) {
    if (e.type == SentenceType::kFromTo && e.first_value && e.second_value) {
      e.direction =
          FromValues(e.first_value->magnitude, e.second_value->magnitude);
      if (e.direction == Direction::kUnknown) {
        out.dropped.push_back({std::move(e), "no change"});
        continue;
      }
    }
    if (!e.HasValidShape()) {
      out.dropped.push_back({std::move(e), "invalid shape"});
      continue;
    }
    out.events.push_back(std::move(e));
  }
  out.non_opinionated = out.events.empty();
  return out;
}

ReviewContext BuildReviewContext(const Review &review,
                                 std::span<const Sentence> sentences,
                                 const Lexicons &lex) {
  ReviewContext ctx;
  if (review.drug) {
    ctx.drug = FindDrug(Tokenize(*review.drug), lex.drugs);
  }
  if (!ctx.drug) {
    for (const Sentence &s : sentences) {
      if ((ctx.drug = FindDrug(s.tokens, lex.drugs))) break;
    }
  }
  if (review.dosage) ctx.dosage_mg = ParseDosage(*review.dosage, lex);
  if (review.duration) ctx.duration_days = ParseDuration(*review.duration, lex);
  return ctx;
}

void AttachContext(const ReviewContext &context,
                   std::span<const EntityMention> mentions,
                   std::span<ChangeEvent> events) {
  for (ChangeEvent &e : events) {
    const EntityMention *term = TermMention(e);
    size_t pos = term ? term->begin : 0;
    size_t best_drug = std::numeric_limits<size_t>::max();
    size_t best_dose = best_drug;
    size_t best_time = best_drug;
    std::optional<std::string> drug;
    std::optional<double> dose;
    std::optional<double> days;
    for (const EntityMention &m : mentions) {
      size_t d = TokenDistance(m, pos);
      if (m.kind == MentionKind::kDrugName && d < best_drug) {
        best_drug = d;
        drug = m.canonical;
      }
      if (m.kind != MentionKind::kNumber || !m.value) continue;
      if (m.value->unit == Unit::kMg && d < best_dose) {
        best_dose = d;
        dose = m.value->magnitude;
      }
      if (auto v = m.value->Days(); v && d < best_time) {
        best_time = d;
        days = v;
      }
    }
    e.drug = drug ? drug : context.drug;
    e.dosage_mg = dose ? dose : context.dosage_mg;
    e.duration_days = days ? days : context.duration_days;
  }
}

size_t ReviewExtraction::EventCount() const {
  size_t n = 0;
  for (const SentenceExtraction &s : sentences) n += s.events.size();
  return n;
}

ReviewExtraction ExtractReview(const Review &review, const Lexicons &lex,
                               const PairingOptions &options) {
  ReviewExtraction out;
  out.review = review;
  std::vector<Sentence> sentences =
      SplitSentences(review.text, review.review_id);
  for (Sentence &s : sentences) {
    SentenceExtraction se;
    se.mentions = RecognizeEntities(s, lex);
    PairingResult paired = PairTermValues(s, se.mentions, options);
    se.unmatched_numbers = paired.unmatched_numbers;
    FilterResult filtered =
        FilterFactual(s, se.mentions, std::move(paired.events));
    se.events = std::move(filtered.kept);
    se.dropped = std::move(filtered.dropped);
    se.sentence = std::move(s);
    out.sentences.push_back(std::move(se));
  }
  MergeBeforeAfter(out.sentences);

  std::vector<Sentence> plain;
  plain.reserve(out.sentences.size());
  for (const SentenceExtraction &se : out.sentences) {
    plain.push_back(se.sentence);
  }
  out.context = BuildReviewContext(review, plain, lex);

  for (SentenceExtraction &se : out.sentences) {
    TypedSentence typed = ClassifySentenceType(std::move(se.events));
    se.events = std::move(typed.events);
    for (DroppedEvent &d : typed.dropped) se.dropped.push_back(std::move(d));
    se.non_opinionated = typed.non_opinionated;
    AttachContext(out.context, se.mentions, se.events);
  }
  return out;
}

std::vector<ChangeEvent> ExtractEvents(std::string_view text,
                                       const Lexicons &lex) {
  Review review;
  review.text = std::string(text);
  ReviewExtraction extraction = ExtractReview(review, lex);
  std::vector<ChangeEvent> events;
  for (SentenceExtraction &se : extraction.sentences) {
    for (ChangeEvent &e : se.events) events.push_back(std::move(e));
  }
  return events;
}

}  // namespace qsent
