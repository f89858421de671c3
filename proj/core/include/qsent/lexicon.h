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

// Gazetteers for dictionary-based entity recognition: quantitative medical
// terms, change verbs, drug names, units and modality words. Each gazetteer
// is a plain `alias<TAB>canonical-id` file; aliases are matched on token
// sequences, case-insensitively, longest match first.

#ifndef QSENT_LEXICON_H_
#define QSENT_LEXICON_H_

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qsent/text.h"

namespace qsent {

enum class TermId {
  kCholesterol,
  kLDL,
  kHDL,
  kTriglyceride,
  kWeight,
  kBloodPressure,
  kBloodSugar,
  kHeartRate,
  kPulse,
};

enum class Desirable { kDown, kUp, kContextDependent };

struct TermInfo {
  TermId id;
  std::string_view name;    // canonical id used in gazetteer files
  std::string_view kb_key;  // prefix of knowledge-base variable names
  Desirable desirable;
  // Only sentiment-bearing with a two-value change or a directional verb.
  bool needs_change_cue;
};

const TermInfo &GetTermInfo(TermId id);
std::optional<TermId> TermFromName(std::string_view name);
std::span<const TermInfo> AllTerms();

enum class VerbDirection { kIncrease, kDecrease, kNeutral, kImprove };

std::optional<VerbDirection> VerbDirectionFromName(std::string_view name);
const char *VerbDirectionName(VerbDirection d);

enum class Unit {
  kNone,
  kMgDl,
  kPoints,
  kPercent,
  kMg,
  kLbs,
  kTimeUnit,
  kClock,
  kOther,
};

const char *UnitName(Unit unit);

// Canonical unit ids in units.tsv. Time units keep their scale so durations
// can be converted to days.
struct UnitInfo {
  std::string_view name;
  Unit unit;
  double days = 0;  // length in days for time units, 0 otherwise
};

std::optional<UnitInfo> UnitFromName(std::string_view name);

// Known drug ids. The first six anchor the drug-parameterized fuzzy
// variables; the rest are recognized so their dosages can be filtered.
std::span<const std::string_view> KnownDrugs();
bool IsKnownDrug(std::string_view id);

std::span<const std::string_view> KnownModalities();

class LexiconError : public std::runtime_error {
 public:
  enum class Code { kFile, kDuplicateAlias, kUnknownCanonical, kFormat };
  LexiconError(Code code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Which registry validates a gazetteer's canonical ids.
enum class GazetteerKind { kTerms, kVerbs, kDrugs, kUnits, kModality, kAny };

class Gazetteer {
 public:
  struct Match {
    std::string canonical;
    size_t length;  // tokens consumed, including skipped quote marks
  };

  Gazetteer() = default;
  Gazetteer(std::string name, GazetteerKind kind)
      : name_(std::move(name)), kind_(kind) {}

  // Adds an alias. Throws kDuplicateAlias when the folded alias exists and
  // kUnknownCanonical when the id is not in the kind's registry.
  void Add(std::string_view alias, std::string_view canonical);

  // Whole-string lookup; the string is tokenized like running text.
  std::optional<std::string> Lookup(std::string_view alias) const;

  // Longest alias starting at tokens[0]. Quote marks inside the window are
  // skipped, so “bad” cholesterol matches "bad cholesterol".
  std::optional<Match> LookupLongest(std::span<const Token> tokens) const;

  const std::string &name() const { return name_; }
  GazetteerKind kind() const { return kind_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Aliases in insertion order, as written in the source file.
  const std::vector<std::pair<std::string, std::string>> &aliases() const {
    return aliases_;
  }

 private:
  std::string name_;
  GazetteerKind kind_ = GazetteerKind::kAny;
  std::unordered_map<std::string, std::string> entries_;
  std::vector<std::pair<std::string, std::string>> aliases_;
  size_t max_tokens_ = 0;
};

// Parses `alias<TAB>canonical-id` lines. '#' starts a comment line.
Gazetteer ParseGazetteer(std::string_view content, std::string name,
                         GazetteerKind kind);
Gazetteer LoadGazetteer(const std::filesystem::path &path, GazetteerKind kind);

struct Lexicons {
  Gazetteer terms;
  Gazetteer verbs;
  Gazetteer drugs;
  Gazetteer units;
  Gazetteer modality;
};

// Loads terms.tsv, verbs.tsv, drugs.tsv, units.tsv and modality.tsv.
Lexicons LoadLexicons(const std::filesystem::path &dir);

std::filesystem::path DefaultDataDir();

}  // namespace qsent

#endif  // QSENT_LEXICON_H_
