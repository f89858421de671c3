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

#include "qsent/lexicon.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qsent {
namespace {

constexpr std::array<TermInfo, 9> kTerms = {{
    {TermId::kCholesterol, "Cholesterol", "CHOLESTEROL", Desirable::kDown, false},
    {TermId::kLDL, "LDL", "LDL", Desirable::kDown, false},
    {TermId::kHDL, "HDL", "HDL", Desirable::kUp, false},
    {TermId::kTriglyceride, "Triglyceride", "TRIGLYCERIDE", Desirable::kDown, false},
    {TermId::kWeight, "Weight", "WEIGHT", Desirable::kDown, true},
    {TermId::kBloodPressure, "BloodPressure", "BLOODPRESSURE", Desirable::kDown, false},
    {TermId::kBloodSugar, "BloodSugar", "BLOODSUGAR", Desirable::kDown, false},
    {TermId::kHeartRate, "HeartRate", "HEARTRATE", Desirable::kContextDependent, false},
    {TermId::kPulse, "Pulse", "PULSE", Desirable::kContextDependent, false},
}};

constexpr std::array<std::string_view, 10> kDrugs = {
    "Lovastatin", "Pravastatin", "Simvastatin", "Atorvastatin",
    "Rosuvastatin", "Niacin", "Colesevelam", "Ezetimibe", "Fenofibrate",
    "Fluvastatin"};

constexpr std::array<std::string_view, 3> kModalities = {
    "Desire", "Conditional", "Obligation"};

constexpr std::array<UnitInfo, 12> kUnits = {{
    {"MgDl", Unit::kMgDl, 0},
    {"Points", Unit::kPoints, 0},
    {"Percent", Unit::kPercent, 0},
    {"Mg", Unit::kMg, 0},
    {"Lbs", Unit::kLbs, 0},
    {"Hour", Unit::kTimeUnit, 1.0 / 24.0},
    {"Day", Unit::kTimeUnit, 1},
    {"Week", Unit::kTimeUnit, 7},
    {"Month", Unit::kTimeUnit, 30},
    {"Year", Unit::kTimeUnit, 365},
    {"Clock", Unit::kClock, 0},
    {"Other", Unit::kOther, 0},
}};

bool IsQuote(const Token &t) {
  if (t.kind != TokenKind::kPunct) return false;
  return t.text == "\"" || t.text == "'" || t.text == "\xE2\x80\x9C" ||
         t.text == "\xE2\x80\x9D" || t.text == "\xE2\x80\x98" ||
         t.text == "\xE2\x80\x99";
}

// Folded form used for matching. Possessive "'s" is dropped so "HDL's"
// matches the alias "HDL".
std::string MatchKey(const Token &t) {
  std::string key = FoldCase(t.text);
  if (key.size() > 2 && key.ends_with("'s")) key.resize(key.size() - 2);
  return key;
}

constexpr char kSep = '\x1f';

bool Registered(GazetteerKind kind, std::string_view id) {
  switch (kind) {
    case GazetteerKind::kTerms: return TermFromName(id).has_value();
    case GazetteerKind::kVerbs: return VerbDirectionFromName(id).has_value();
    case GazetteerKind::kDrugs: return IsKnownDrug(id);
    case GazetteerKind::kUnits: return UnitFromName(id).has_value();
    case GazetteerKind::kModality:
      return std::find(kModalities.begin(), kModalities.end(), id) !=
             kModalities.end();
    case GazetteerKind::kAny: return !id.empty();
  }
  return false;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

const TermInfo &GetTermInfo(TermId id) {
  return kTerms[static_cast<size_t>(id)];
}

std::optional<TermId> TermFromName(std::string_view name) {
  for (const TermInfo &t : kTerms) {
    if (t.name == name) return t.id;
  }
  return std::nullopt;
}

std::span<const TermInfo> AllTerms() { return kTerms; }

std::optional<VerbDirection> VerbDirectionFromName(std::string_view name) {
  if (name == "Increase") return VerbDirection::kIncrease;
  if (name == "Decrease") return VerbDirection::kDecrease;
  if (name == "Neutral") return VerbDirection::kNeutral;
  if (name == "Improve") return VerbDirection::kImprove;
  return std::nullopt;
}

const char *VerbDirectionName(VerbDirection d) {
  switch (d) {
    case VerbDirection::kIncrease: return "Increase";
    case VerbDirection::kDecrease: return "Decrease";
    case VerbDirection::kNeutral: return "Neutral";
    case VerbDirection::kImprove: return "Improve";
  }
  return "?";
}

const char *UnitName(Unit unit) {
  switch (unit) {
    case Unit::kNone: return "None";
    case Unit::kMgDl: return "MgDl";
    case Unit::kPoints: return "Points";
    case Unit::kPercent: return "Percent";
    case Unit::kMg: return "Mg";
    case Unit::kLbs: return "Lbs";
    case Unit::kTimeUnit: return "TimeUnit";
    case Unit::kClock: return "Clock";
    case Unit::kOther: return "Other";
  }
  return "?";
}

std::optional<UnitInfo> UnitFromName(std::string_view name) {
  for (const UnitInfo &u : kUnits) {
    if (u.name == name) return u;
  }
  return std::nullopt;
}

std::span<const std::string_view> KnownDrugs() { return kDrugs; }

bool IsKnownDrug(std::string_view id) {
  return std::find(kDrugs.begin(), kDrugs.end(), id) != kDrugs.end();
}

std::span<const std::string_view> KnownModalities() { return kModalities; }

void Gazetteer::Add(std::string_view alias, std::string_view canonical) {
  if (!Registered(kind_, canonical)) {
    throw LexiconError(LexiconError::Code::kUnknownCanonical,
                       name_ + ": unknown canonical id '" +
                           std::string(canonical) + "' for alias '" +
                           std::string(alias) + "'");
  }
  std::vector<Token> tokens = Tokenize(alias);
  if (tokens.empty()) {
    throw LexiconError(LexiconError::Code::kFormat,
                       name_ + ": empty alias for '" + std::string(canonical) +
                           "'");
  }
  std::string key;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) key.push_back(kSep);
    key += MatchKey(tokens[i]);
  }
  auto [it, inserted] = entries_.emplace(key, std::string(canonical));
  if (!inserted) {
    throw LexiconError(LexiconError::Code::kDuplicateAlias,
                       name_ + ": duplicate alias '" + std::string(alias) +
                           "'");
  }
  aliases_.emplace_back(std::string(alias), std::string(canonical));
  max_tokens_ = std::max(max_tokens_, tokens.size());
}

std::optional<std::string> Gazetteer::Lookup(std::string_view alias) const {
  std::vector<Token> tokens = Tokenize(alias);
  auto match = LookupLongest(tokens);
  if (!match || match->length != tokens.size()) return std::nullopt;
  return match->canonical;
}

std::optional<Gazetteer::Match> Gazetteer::LookupLongest(
    std::span<const Token> tokens) const {
  if (tokens.empty() || IsQuote(tokens[0])) return std::nullopt;
  std::optional<Match> best;
  std::string key;
  size_t matched = 0;
  for (size_t i = 0; i < tokens.size() && matched < max_tokens_; ++i) {
    if (i > 0 && IsQuote(tokens[i])) continue;
    if (matched > 0) key.push_back(kSep);
    key += MatchKey(tokens[i]);
    ++matched;
    auto it = entries_.find(key);
    if (it != entries_.end()) best = Match{it->second, i + 1};
  }
  return best;
}

Gazetteer ParseGazetteer(std::string_view content, std::string name,
                         GazetteerKind kind) {
  Gazetteer g(std::move(name), kind);
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    size_t tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw LexiconError(LexiconError::Code::kFormat,
                         g.name() + ":" + std::to_string(line_no) +
                             ": expected alias<TAB>canonical-id");
    }
    g.Add(Trim(view.substr(0, tab)), Trim(view.substr(tab + 1)));
  }
  return g;
}

Gazetteer LoadGazetteer(const std::filesystem::path &path, GazetteerKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LexiconError(LexiconError::Code::kFile,
                       "cannot read gazetteer " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseGazetteer(buf.str(), path.stem().string(), kind);
}

Lexicons LoadLexicons(const std::filesystem::path &dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw LexiconError(LexiconError::Code::kFile,
                       "lexicon directory not found: " + dir.string());
  }
  Lexicons lex;
  lex.terms = LoadGazetteer(dir / "terms.tsv", GazetteerKind::kTerms);
  lex.verbs = LoadGazetteer(dir / "verbs.tsv", GazetteerKind::kVerbs);
  lex.drugs = LoadGazetteer(dir / "drugs.tsv", GazetteerKind::kDrugs);
  lex.units = LoadGazetteer(dir / "units.tsv", GazetteerKind::kUnits);
  lex.modality = LoadGazetteer(dir / "modality.tsv", GazetteerKind::kModality);
  return lex;
}

std::filesystem::path DefaultDataDir() {
  if (const char *env = std::getenv("QSENT_DATA_DIR")) return env;
#ifdef QSENT_DATA_DIR
  return QSENT_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace qsent
