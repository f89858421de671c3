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

// Mamdani fuzzy inference over trapezoidal linguistic variables.
//
// Operators are fixed: AND = min, implication = min (clipping),
// aggregation = max, defuzzification = centroid of the aggregated curve
// sampled on a uniform grid.

#ifndef QSENT_FUZZY_H_
#define QSENT_FUZZY_H_

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qsent {

class FuzzyError : public std::runtime_error {
 public:
  enum class Code { kUnknownVariable, kUnknownSet, kEmptyOutput, kBadGrid };
  FuzzyError(Code code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Membership is 0 outside [a,d], 1 on [b,c] and linear on the edges.
// A vertical edge (a == b or c == d) is a crisp step.
struct Trapezoid {
  double a = 0, b = 0, c = 0, d = 0;

  bool IsValid() const { return a <= b && b <= c && c <= d; }
  bool operator==(const Trapezoid &) const = default;
};

double Membership(const Trapezoid &mf, double x);

// True when no x has positive membership in both sets.
bool Disjoint(const Trapezoid &p, const Trapezoid &q);

struct FuzzySet {
  std::string name;
  Trapezoid mf;

  bool operator==(const FuzzySet &) const = default;
};

// ASCII case-insensitive ordering for variable and set names.
struct NameLess {
  using is_transparent = void;
  bool operator()(std::string_view x, std::string_view y) const;
};

bool NameEquals(std::string_view x, std::string_view y);

struct FuzzyVariable {
  std::string name;
  double lo = 0;
  double hi = 1;
  std::vector<FuzzySet> sets;

  // Case-insensitive set lookup; -1 when absent.
  int FindSet(std::string_view set) const;
  double Clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

struct Conjunct {
  std::string variable;
  std::string set;

  bool operator==(const Conjunct &) const = default;
};

struct FuzzyRule {
  std::string id;
  std::vector<Conjunct> antecedent;
  Conjunct consequent;
  std::string source;  // free-form provenance tag, e.g. "completion"
  int line = 0;        // 1-based line in the rules file, 0 if built in code

  bool operator==(const FuzzyRule &o) const {
    return id == o.id && antecedent == o.antecedent &&
           consequent == o.consequent && source == o.source;
  }
};

class KnowledgeBase {
 public:
  // Adds or replaces a variable by case-insensitive name.
  void PutVariable(FuzzyVariable var);
  const FuzzyVariable *FindVariable(std::string_view name) const;
  const std::vector<FuzzyVariable> &variables() const { return variables_; }

  void AddRule(FuzzyRule rule) { rules_.push_back(std::move(rule)); }
  const FuzzyRule *FindRule(std::string_view id) const;
  const std::vector<FuzzyRule> &rules() const { return rules_; }

  const std::string &output_variable() const { return output_; }
  const FuzzyVariable *output() const { return FindVariable(output_); }

  std::string version;

 private:
  std::vector<FuzzyVariable> variables_;
  std::map<std::string, size_t, NameLess> index_;
  std::vector<FuzzyRule> rules_;
  std::string output_ = "Sentiment";
};

// Degrees of one crisp input in every set of its variable.
struct FuzzyValue {
  const FuzzyVariable *variable = nullptr;
  double input = 0;    // value as given
  double clamped = 0;  // value after clamping to the universe
  std::vector<double> degrees;  // parallel to variable->sets

  bool was_clamped() const { return input != clamped; }
  double Degree(std::string_view set) const;
};

FuzzyValue Fuzzify(const FuzzyVariable &var, double x);

// Throws FuzzyError::kUnknownVariable.
FuzzyValue Fuzzify(const KnowledgeBase &kb, std::string_view variable,
                   double x);

using FuzzyInputs = std::map<std::string, FuzzyValue, NameLess>;

// Mamdani AND: min over degrees; an empty list is 1.
double Conjoin(std::span<const double> degrees);

// Activation of `rule`. A missing input variable yields 0 and, when `note`
// is given, a description of what was missing.
double FireRule(const FuzzyRule &rule, const FuzzyInputs &inputs,
                std::string *note = nullptr);

struct FiredSet {
  std::string set;
  double activation = 0;
};

// Output membership sampled at `grid_points` uniform points over [lo, hi].
struct SampledCurve {
  double lo = 0;
  double hi = 1;
  std::vector<double> mu;

  double X(size_t i) const {
    if (mu.size() < 2) return lo;
    if (i + 1 == mu.size()) return hi;
    return lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(mu.size() - 1);
  }
};

// max over fired sets of min(activation, membership(set, x)) at each sample.
// Throws kBadGrid when grid_points < 2 and kUnknownSet for unknown sets.
SampledCurve Aggregate(const FuzzyVariable &output,
                       std::span<const FiredSet> fired, size_t grid_points);

// Centre of gravity of the curve using trapezoidal quadrature weights.
// Throws kEmptyOutput when the curve is identically zero.
double DefuzzifyCentroid(const SampledCurve &curve);

struct RuleActivation {
  std::string rule_id;
  double activation = 0;
  std::string note;  // non-empty when the rule was skipped
};

struct InferenceTrace {
  std::vector<RuleActivation> activations;  // one per rule, in KB order
  std::vector<std::string> warnings;        // clamped or unknown inputs
  SampledCurve curve;
};

struct Inference {
  std::optional<double> crisp;  // absent when no rule fired
  InferenceTrace trace;
};

struct InferOptions {
  size_t grid_points = 1001;
};

// Fuzzify every input, fire every rule, aggregate and defuzzify. Inputs
// naming variables missing from the KB are skipped with a warning.
Inference Infer(const KnowledgeBase &kb,
                const std::map<std::string, double, NameLess> &inputs,
                const InferOptions &options = {});

}  // namespace qsent

#endif  // QSENT_FUZZY_H_
