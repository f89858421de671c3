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

#include "qsent/classify.h"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qsent {
namespace {

// Explicit evaluative words; their presence is noted, never scored.
constexpr std::array<std::string_view, 10> kOpinionCues = {
    "good", "bad", "great", "happy", "pleased", "disappointed",
    "disappointing", "excellent", "terrible", "awesome"};

std::string Key(TermId term) { return std::string(GetTermInfo(term).kb_key); }

class Assigner {
 public:
  Assigner(const KnowledgeBase &kb, FuzzyInputAssignment *out)
      : kb_(kb), out_(out) {}

  void Put(const std::string &variable, double value, const char *source) {
    if (!kb_.FindVariable(variable)) {
      out_->notes.push_back("no variable " + variable + " for " + source);
      return;
    }
    out_->Set(variable, value, source);
  }

 private:
  const KnowledgeBase &kb_;
  FuzzyInputAssignment *out_;
};

}  // namespace

const char *LabelName(Label label) {
  switch (label) {
    case Label::kPositive: return "Positive";
    case Label::kNeutral: return "Neutral";
    case Label::kNegative: return "Negative";
    case Label::kUnclassified: return "Unclassified";
    case Label::kNonOpinionated: return "NonOpinionated";
  }
  return "?";
}

std::optional<Label> LabelFromName(std::string_view name) {
  for (Label l : {Label::kPositive, Label::kNeutral, Label::kNegative,
                  Label::kUnclassified, Label::kNonOpinionated}) {
    if (NameEquals(name, LabelName(l))) return l;
  }
  return std::nullopt;
}

Label LabelForScore(double score, const LabelThresholds &t) {
  if (score < t.negative_below) return Label::kNegative;
  if (score > t.positive_above) return Label::kPositive;
  return Label::kNeutral;
}

void FuzzyInputAssignment::Set(std::string variable, double value,
                               std::string source) {
  if (Has(variable)) {
    throw std::logic_error("input " + variable + " assigned twice");
  }
  entries_.push_back({std::move(variable), value, std::move(source)});
}

bool FuzzyInputAssignment::Has(std::string_view variable) const {
  return Get(variable).has_value();
}

std::optional<double> FuzzyInputAssignment::Get(std::string_view variable) const {
  for (const InputEntry &e : entries_) {
    if (NameEquals(e.variable, variable)) return e.value;
  }
  return std::nullopt;
}

std::map<std::string, double, NameLess> FuzzyInputAssignment::AsMap() const {
  std::map<std::string, double, NameLess> m;
  for (const InputEntry &e : entries_) m.emplace(e.variable, e.value);
  return m;
}

std::optional<bool> IsImproving(const ChangeEvent &event) {
  if (event.direction == Direction::kUnknown) return std::nullopt;
  switch (GetTermInfo(event.term).desirable) {
    case Desirable::kDown: return event.direction == Direction::kDecrease;
    case Desirable::kUp: return event.direction == Direction::kIncrease;
    case Desirable::kContextDependent: return std::nullopt;
  }
  return std::nullopt;
}

FuzzyInputAssignment FeaturesToInputs(const ChangeEvent &e,
                                      const KnowledgeBase &kb) {
  FuzzyInputAssignment out;
  Assigner put(kb, &out);
  const std::string term = Key(e.term);
  const std::optional<bool> improving = IsImproving(e);
  std::optional<double> change;
  std::optional<double> percent;

  switch (e.type) {
    case SentenceType::kFromTo: {
      double first = e.first_value->magnitude;
      double second = e.second_value->magnitude;
      put.Put(term + "_firstValue", first, "first_value");
      put.Put(term + "_secondValue", second, "second_value");
      put.Put(term + "_finalValue", second, "second_value");
      change = std::fabs(second - first);
      if (first > 0) {
        percent = 100.0 * *change / first;
      } else {
        out.notes.push_back("first value is 0; percent change omitted");
      }
      break;
    }
    case SentenceType::kToFinal:
      put.Put(term + "_finalValue", e.second_value->magnitude, "second_value");
      break;
    case SentenceType::kChangeByAmount:
      change = e.delta->magnitude;
      break;
    case SentenceType::kChangeByPercent:
      percent = e.percent->magnitude;
      break;
    case SentenceType::kBaselineChange:
      put.Put(term + "_firstValue", e.first_value->magnitude, "first_value");
      break;
  }

  if (change) put.Put(term + "_Change", *change, "change");
  if (percent) put.Put(term + "_Percent_Change", *percent, "percent");
  if (improving) put.Put("Direction", *improving ? 1.0 : 0.0, "direction");

  if (e.drug) {
    const std::string drug_var = term + "_DRUG";
    if (const FuzzyVariable *v = kb.FindVariable(drug_var)) {
      int s = v->FindSet(*e.drug);
      if (s >= 0) {
        const Trapezoid &mf = v->sets[static_cast<size_t>(s)].mf;
        out.Set(drug_var, (mf.b + mf.c) / 2, "drug");
      } else {
        out.notes.push_back(drug_var + " has no set for " + *e.drug);
      }
    }
    // Drug-specific scales describe how far a drug moved the term in the
    // healthy direction; worsening changes use the generic scale only.
    if (improving.value_or(false)) {
      const std::string prefix = term + "_" + *e.drug;
      if (change && kb.FindVariable(prefix + "_Change")) {
        out.Set(prefix + "_Change", *change, "change");
      }
      if (percent && kb.FindVariable(prefix + "_Percent_Change")) {
        out.Set(prefix + "_Percent_Change", *percent, "percent");
      }
    }
  }
  if (e.dosage_mg) put.Put("Drug_Dosage", *e.dosage_mg, "dosage");
  if (e.duration_days) put.Put("Duration", *e.duration_days, "duration");
  return out;
}

std::vector<std::pair<std::string, double>> SentimentResult::FiredRules() const {
  std::vector<std::pair<std::string, double>> out;
  for (const RuleActivation &a : trace.activations) {
    if (a.activation > 0) out.emplace_back(a.rule_id, a.activation);
  }
  return out;
}

SentimentResult ClassifyEvent(const KnowledgeBase &kb, const ChangeEvent &event,
                              const ClassifyOptions &options) {
  SentimentResult r;
  r.event = event;
  r.review_id = event.review_id;
  r.sentence_index = event.sentence_index;
  r.inputs = FeaturesToInputs(event, kb);
  Inference inf = Infer(kb, r.inputs.AsMap(), options.infer);
  r.trace = std::move(inf.trace);
  r.crisp_score = inf.crisp;
  r.label = inf.crisp ? LabelForScore(*inf.crisp, options.thresholds)
                      : Label::kUnclassified;
  return r;
}

std::vector<SentimentResult> ClassifyExtraction(
    const KnowledgeBase &kb, const ReviewExtraction &extraction,
    const ClassifyOptions &options) {
  std::vector<SentimentResult> out;
  for (const SentenceExtraction &se : extraction.sentences) {
    const Sentence &s = se.sentence;
    if (se.events.empty()) {
      SentimentResult r;
      r.review_id = s.review_id;
      r.sentence_index = s.index;
      r.sentence_text = s.text;
      out.push_back(std::move(r));
      continue;
    }
    std::vector<std::string> cues;
    for (const Token &t : s.tokens) {
      for (std::string_view cue : kOpinionCues) {
        if (t.Is(cue)) cues.push_back("explicit opinion word '" + t.text +
                                      "' not scored");
      }
    }
    for (const ChangeEvent &e : se.events) {
      SentimentResult r;
      try {
        r = ClassifyEvent(kb, e, options);
      } catch (const std::exception &ex) {
        r.event = e;
        r.label = Label::kUnclassified;
        r.notes.push_back(std::string("classification failed: ") + ex.what());
      }
      r.review_id = s.review_id;
      r.sentence_index = s.index;
      r.sentence_text = s.text;
      r.notes.insert(r.notes.end(), cues.begin(), cues.end());
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<SentimentResult> ClassifyReview(const KnowledgeBase &kb,
                                            const Lexicons &lexicons,
                                            const Review &review,
                                            const ClassifyOptions &options) {
  return ClassifyExtraction(kb, ExtractReview(review, lexicons, options.pairing),
                            options);
}

Label FuseLabels(std::span<const Label> labels) {
  int pos = 0, neg = 0, neu = 0;
  bool unclassified = false;
  for (Label l : labels) {
    pos += l == Label::kPositive;
    neg += l == Label::kNegative;
    neu += l == Label::kNeutral;
    unclassified |= l == Label::kUnclassified;
  }
  if (pos + neg + neu == 0) {
    return unclassified ? Label::kUnclassified : Label::kNonOpinionated;
  }
  if (pos >= neg && pos >= neu) return Label::kPositive;
  if (neg >= neu) return Label::kNegative;
  return Label::kNeutral;
}

std::vector<SentimentResult> FuseBySentence(
    std::vector<SentimentResult> results) {
  std::vector<SentimentResult> out;
  size_t i = 0;
  while (i < results.size()) {
    size_t j = i;
    std::vector<Label> labels;
    while (j < results.size() && results[j].review_id == results[i].review_id &&
           results[j].sentence_index == results[i].sentence_index) {
      labels.push_back(results[j].label);
      ++j;
    }
    Label fused = FuseLabels(labels);
    size_t pick = i;
    for (size_t k = i; k < j; ++k) {
      if (results[k].label == fused) {
        pick = k;
        break;
      }
    }
    SentimentResult r = std::move(results[pick]);
    r.label = fused;
    if (j - i > 1) {
      r.notes.push_back("fused " + std::to_string(j - i) + " event labels");
    }
    out.push_back(std::move(r));
    i = j;
  }
  return out;
}

}  // namespace qsent
