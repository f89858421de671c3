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

#include "qsent/fuzzy.h"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qsent {
namespace {

char Lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// Positive-membership region of a trapezoid as (lo, hi) with closedness.
struct Support {
  double lo, hi;
  bool lo_closed, hi_closed;
};

Support SupportOf(const Trapezoid &t) {
  return {t.a, t.d, t.a == t.b, t.c == t.d};
}

}  // namespace

double Membership(const Trapezoid &mf, double x) {
  if (x >= mf.b && x <= mf.c) return 1.0;
  if (x <= mf.a || x >= mf.d) return 0.0;
  if (x < mf.b) return (x - mf.a) / (mf.b - mf.a);
  return (mf.d - x) / (mf.d - mf.c);
}

bool Disjoint(const Trapezoid &p, const Trapezoid &q) {
  Support s = SupportOf(p);
  Support t = SupportOf(q);
  if (s.hi < t.lo || t.hi < s.lo) return true;
  if (s.hi == t.lo) return !(s.hi_closed && t.lo_closed);
  if (t.hi == s.lo) return !(t.hi_closed && s.lo_closed);
  return false;
}

bool NameLess::operator()(std::string_view x, std::string_view y) const {
  return std::lexicographical_compare(
      x.begin(), x.end(), y.begin(), y.end(),
      [](char p, char q) { return Lower(p) < Lower(q); });
}

bool NameEquals(std::string_view x, std::string_view y) {
  return x.size() == y.size() &&
         std::equal(x.begin(), x.end(), y.begin(),
                    [](char p, char q) { return Lower(p) == Lower(q); });
}

int FuzzyVariable::FindSet(std::string_view set) const {
  for (size_t i = 0; i < sets.size(); ++i) {
    if (NameEquals(sets[i].name, set)) return static_cast<int>(i);
  }
  return -1;
}

void KnowledgeBase::PutVariable(FuzzyVariable var) {
  auto it = index_.find(var.name);
  if (it != index_.end()) {
    variables_[it->second] = std::move(var);
    return;
  }
  index_.emplace(var.name, variables_.size());
  variables_.push_back(std::move(var));
}

const FuzzyVariable *KnowledgeBase::FindVariable(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &variables_[it->second];
}

const FuzzyRule *KnowledgeBase::FindRule(std::string_view id) const {
  for (const FuzzyRule &r : rules_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

double FuzzyValue::Degree(std::string_view set) const {
  if (!variable) return 0;
  int i = variable->FindSet(set);
  return i < 0 ? 0 : degrees[static_cast<size_t>(i)];
}

FuzzyValue Fuzzify(const FuzzyVariable &var, double x) {
  FuzzyValue v;
  v.variable = &var;
  v.input = x;
  v.clamped = var.Clamp(x);
  v.degrees.reserve(var.sets.size());
  for (const FuzzySet &s : var.sets) {
    v.degrees.push_back(Membership(s.mf, v.clamped));
  }
  return v;
}

FuzzyValue Fuzzify(const KnowledgeBase &kb, std::string_view variable,
                   double x) {
  const FuzzyVariable *var = kb.FindVariable(variable);
  if (!var) {
    throw FuzzyError(FuzzyError::Code::kUnknownVariable,
                     "unknown variable '" + std::string(variable) + "'");
  }
  return Fuzzify(*var, x);
}

double Conjoin(std::span<const double> degrees) {
  double out = 1.0;
  for (double d : degrees) out = std::min(out, d);
  return out;
}

double FireRule(const FuzzyRule &rule, const FuzzyInputs &inputs,
                std::string *note) {
  double activation = 1.0;
  for (const Conjunct &c : rule.antecedent) {
    auto it = inputs.find(c.variable);
    if (it == inputs.end()) {
      if (note) *note = "missing input " + c.variable;
      return 0.0;
    }
    activation = std::min(activation, it->second.Degree(c.set));
  }
  return activation;
}

SampledCurve Aggregate(const FuzzyVariable &output,
                       std::span<const FiredSet> fired, size_t grid_points) {
  if (grid_points < 2) {
    throw FuzzyError(FuzzyError::Code::kBadGrid,
                     "grid needs at least 2 points, got " +
                         std::to_string(grid_points));
  }
  // Clipping commutes with max, so each set is clipped once at its
  // strongest activation.
  std::vector<double> level(output.sets.size(), 0.0);
  for (const FiredSet &f : fired) {
    int s = output.FindSet(f.set);
    if (s < 0) {
      throw FuzzyError(FuzzyError::Code::kUnknownSet,
                       "unknown set '" + f.set + "' in " + output.name);
    }
    level[static_cast<size_t>(s)] =
        std::max(level[static_cast<size_t>(s)], f.activation);
  }
  SampledCurve curve;
  curve.lo = output.lo;
  curve.hi = output.hi;
  curve.mu.assign(grid_points, 0.0);
  for (size_t s = 0; s < level.size(); ++s) {
    if (level[s] <= 0) continue;
    const Trapezoid &mf = output.sets[s].mf;
    for (size_t i = 0; i < grid_points; ++i) {
      double m = std::min(level[s], Membership(mf, curve.X(i)));
      if (m > curve.mu[i]) curve.mu[i] = m;
    }
  }
  return curve;
}

double DefuzzifyCentroid(const SampledCurve &curve) {
  const size_t n = curve.mu.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    num += w * curve.X(i) * curve.mu[i];
    den += w * curve.mu[i];
  }
  if (n < 2 || den <= 0) {
    throw FuzzyError(FuzzyError::Code::kEmptyOutput, "no rule fired");
  }
  return std::clamp(num / den, curve.lo, curve.hi);
}

Inference Infer(const KnowledgeBase &kb,
                const std::map<std::string, double, NameLess> &inputs,
                const InferOptions &options) {
  const FuzzyVariable *output = kb.output();
  if (!output) {
    throw FuzzyError(FuzzyError::Code::kUnknownVariable,
                     "knowledge base has no output variable '" +
                         kb.output_variable() + "'");
  }
  Inference result;
  FuzzyInputs fuzzified;
  for (const auto &[name, x] : inputs) {
    const FuzzyVariable *var = kb.FindVariable(name);
    if (!var) {
      result.trace.warnings.push_back("no variable " + name + "; input ignored");
      continue;
    }
    FuzzyValue v = Fuzzify(*var, x);
    if (v.was_clamped()) {
      std::ostringstream msg;
      msg << name << "=" << x << " clamped to " << v.clamped;
      result.trace.warnings.push_back(msg.str());
    }
    fuzzified.emplace(var->name, std::move(v));
  }

  std::vector<FiredSet> fired;
  result.trace.activations.reserve(kb.rules().size());
  for (const FuzzyRule &rule : kb.rules()) {
    RuleActivation act{rule.id, 0.0, {}};
    act.activation = FireRule(rule, fuzzified, &act.note);
    if (act.activation > 0) fired.push_back({rule.consequent.set, act.activation});
    result.trace.activations.push_back(std::move(act));
  }
  result.trace.curve = Aggregate(*output, fired, options.grid_points);
  if (!fired.empty()) {
    try {
      result.crisp = DefuzzifyCentroid(result.trace.curve);
    } catch (const FuzzyError &e) {
      if (e.code() != FuzzyError::Code::kEmptyOutput) throw;
    }
  }
  return result;
}

}  // namespace qsent
