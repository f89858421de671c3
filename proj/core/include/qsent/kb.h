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

// Knowledge-base files: a variables file of trapezoid sets and a rules file
// of conjunctive IF/THEN rules. The grammar is documented in
// docs/kb-format.md.

#ifndef QSENT_KB_H_
#define QSENT_KB_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsent/fuzzy.h"

namespace qsent {

enum class Severity { kError, kWarning };

enum class DiagnosticCode {
  kParseError,
  kUnresolvedReference,
  kIncompleteCoverage,
  kDuplicateRuleId,
  kDuplicateVariable,
  kDuplicateSet,
  kBadTrapezoid,
  kSetOutsideUniverse,
  kEmptyVariable,
  kMissingOutput,
  kBadConsequent,
  kUnreachable,
  kRedundantConjunct,
  kUnusedVariable,
};

const char *DiagnosticCodeName(DiagnosticCode code);

struct Diagnostic {
  Severity severity;
  DiagnosticCode code;
  std::string message;
  std::string file;  // empty for whole-KB checks
  int line = 0;

  std::string ToString() const;
};

bool HasErrors(const std::vector<Diagnostic> &diagnostics);

class KbError : public std::runtime_error {
 public:
  explicit KbError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct ParsedKb {
  KnowledgeBase kb;
  std::vector<Diagnostic> diagnostics;  // parse and validation findings
};

// Parses both files and validates the result. Never throws on bad content;
// problems are reported as diagnostics.
ParsedKb ParseKb(std::string_view variables_text, std::string_view rules_text,
                 std::string variables_name = "variables",
                 std::string rules_name = "rules");

// Reads, parses and validates. Throws KbError if any error-severity
// diagnostic is produced, or if a file cannot be read.
KnowledgeBase LoadKb(const std::filesystem::path &variables_path,
                     const std::filesystem::path &rules_path,
                     std::vector<Diagnostic> *warnings = nullptr);

// Re-checks every invariant of an assembled knowledge base.
std::vector<Diagnostic> Validate(const KnowledgeBase &kb);

// Inclusive gap in a variable's coverage, if any.
struct CoverageGap {
  double lo, hi;
};
std::optional<CoverageGap> FindCoverageGap(const FuzzyVariable &var);

// Text forms that ParseKb reads back into an equivalent KB. Families are
// written out expanded.
std::string SerializeVariables(const KnowledgeBase &kb);
std::string SerializeRules(const KnowledgeBase &kb);

std::filesystem::path DefaultKbVariablesPath();
std::filesystem::path DefaultKbRulesPath();

}  // namespace qsent

#endif  // QSENT_KB_H_
