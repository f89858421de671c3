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

#include "qsent/kb.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "qsent/lexicon.h"

namespace qsent {
namespace {

std::vector<std::string> Split(std::string_view line) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view StripComment(std::string_view line) {
  size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
    line.remove_suffix(1);
  }
  return line;
}

bool ParseDouble(std::string_view s, double *out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string FormatDouble(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

class VariablesParser {
 public:
  VariablesParser(std::string file, KnowledgeBase *kb,
                  std::vector<Diagnostic> *diags)
      : file_(std::move(file)), kb_(kb), diags_(diags) {}

  void Parse(std::string_view text) {
    std::vector<std::string> lines = SplitLines(text);
    for (size_t n = 0; n < lines.size(); ++n) {
      line_ = static_cast<int>(n + 1);
      std::string_view raw = StripComment(lines[n]);
      std::vector<std::string> words = Split(raw);
      if (words.empty()) continue;
      bool indented = std::isspace(static_cast<unsigned char>(raw.front()));
      if (indented) {
        ParseMember(words);
      } else {
        Flush();
        ParseHeader(words);
      }
    }
    Flush();
    for (FuzzyVariable &v : expansions_) {
      if (kb_->FindVariable(v.name)) continue;  // concrete declaration wins
      kb_->PutVariable(std::move(v));
    }
  }

 private:
  struct Block {
    bool family = false;
    int line = 0;
    FuzzyVariable var;
    std::vector<std::string> terms;
    std::vector<std::string> drugs;
  };

  void Error(DiagnosticCode code, const std::string &msg) {
    diags_->push_back({Severity::kError, code, msg, file_, line_});
  }

  void ParseHeader(const std::vector<std::string> &w) {
    if (w[0] == "version" && w.size() == 2) {
      kb_->version = w[1];
      return;
    }
    if ((w[0] == "var" || w[0] == "family") && w.size() == 5 &&
        w[2] == "universe") {
      Block b;
      b.family = w[0] == "family";
      b.line = line_;
      b.var.name = w[1];
      if (!ParseDouble(w[3], &b.var.lo) || !ParseDouble(w[4], &b.var.hi)) {
        Error(DiagnosticCode::kParseError, "bad universe bounds for " + w[1]);
        return;
      }
      if (b.var.lo >= b.var.hi) {
        Error(DiagnosticCode::kBadTrapezoid,
              "empty universe [" + w[3] + ", " + w[4] + "] for " + w[1]);
        return;
      }
      block_ = std::move(b);
      return;
    }
    Error(DiagnosticCode::kParseError,
          "expected 'var <Name> universe <lo> <hi>', 'family ...' or "
          "'version <v>'");
  }

  void ParseMember(const std::vector<std::string> &w) {
    if (!block_) {
      Error(DiagnosticCode::kParseError, "indented line outside a var block");
      return;
    }
    if (w[0] == "set" && w.size() == 7 && w[2] == "trapezoid") {
      Trapezoid t;
      if (!ParseDouble(w[3], &t.a) || !ParseDouble(w[4], &t.b) ||
          !ParseDouble(w[5], &t.c) || !ParseDouble(w[6], &t.d)) {
        Error(DiagnosticCode::kParseError, "bad trapezoid numbers in set " + w[1]);
        return;
      }
      if (block_->var.FindSet(w[1]) >= 0) {
        Error(DiagnosticCode::kDuplicateSet,
              "duplicate set " + w[1] + " in " + block_->var.name);
        return;
      }
      block_->var.sets.push_back({w[1], t});
      return;
    }
    if (block_->family && (w[0] == "terms" || w[0] == "drugs") && w.size() > 1) {
      auto &dst = w[0] == "terms" ? block_->terms : block_->drugs;
      dst.assign(w.begin() + 1, w.end());
      return;
    }
    Error(DiagnosticCode::kParseError,
          "expected 'set <Name> trapezoid <a> <b> <c> <d>'" +
              std::string(block_->family ? " or 'terms'/'drugs' list" : ""));
  }

  void Flush() {
    if (!block_) return;
    Block b = std::move(*block_);
    block_.reset();
    int saved = line_;
    line_ = b.line;
    if (!b.family) {
      if (!concrete_.insert(b.var.name).second) {
        Error(DiagnosticCode::kDuplicateVariable,
              "variable " + b.var.name + " declared twice");
      } else {
        kb_->PutVariable(std::move(b.var));
      }
      line_ = saved;
      return;
    }
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(b.var.name);
    while (std::getline(in, part, '_')) parts.push_back(part);
    bool has_term = std::count(parts.begin(), parts.end(), "TERM") > 0;
    bool has_drug = std::count(parts.begin(), parts.end(), "DRUG") > 0;
    if (!has_term || b.terms.empty() || (has_drug && b.drugs.empty())) {
      Error(DiagnosticCode::kParseError,
            "family " + b.var.name +
                " needs a TERM placeholder, a 'terms' list and, for DRUG, "
                "a 'drugs' list");
      line_ = saved;
      return;
    }
    std::vector<std::string> drugs = has_drug ? b.drugs
                                              : std::vector<std::string>{""};
    for (const std::string &term : b.terms) {
      for (const std::string &drug : drugs) {
        FuzzyVariable v = b.var;
        v.name.clear();
        for (size_t i = 0; i < parts.size(); ++i) {
          if (i > 0) v.name += '_';
          v.name += parts[i] == "TERM" ? term : parts[i] == "DRUG" ? drug
                                                                   : parts[i];
        }
        if (!expanded_.insert(v.name).second) {
          Error(DiagnosticCode::kDuplicateVariable,
                "family expansion " + v.name + " produced twice");
          continue;
        }
        expansions_.push_back(std::move(v));
      }
    }
    line_ = saved;
  }

  std::string file_;
  KnowledgeBase *kb_;
  std::vector<Diagnostic> *diags_;
  int line_ = 0;
  std::optional<Block> block_;
  std::set<std::string, NameLess> concrete_;
  std::set<std::string, NameLess> expanded_;
  std::vector<FuzzyVariable> expansions_;
};

void ParseRules(std::string_view text, const std::string &file,
                KnowledgeBase *kb, std::vector<Diagnostic> *diags) {
  std::vector<std::string> lines = SplitLines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    int line = static_cast<int>(n + 1);
    std::string_view raw = StripComment(lines[n]);
    if (Split(raw).empty()) continue;
    auto fail = [&](const std::string &msg) {
      diags->push_back(
          {Severity::kError, DiagnosticCode::kParseError, msg, file, line});
    };
    size_t colon = raw.find(':');
    if (colon == std::string_view::npos) {
      fail("expected 'rule <id> [source=<tag>]: IF ... THEN ...'");
      continue;
    }
    std::vector<std::string> head = Split(raw.substr(0, colon));
    std::vector<std::string> body = Split(raw.substr(colon + 1));
    FuzzyRule rule;
    rule.line = line;
    if (head.size() < 2 || head.size() > 3 || !NameEquals(head[0], "rule")) {
      fail("expected 'rule <id> [source=<tag>]' before ':'");
      continue;
    }
    rule.id = head[1];
    if (head.size() == 3) {
      if (!head[2].starts_with("source=") || head[2].size() == 7) {
        fail("expected 'source=<tag>', got '" + head[2] + "'");
        continue;
      }
      rule.source = head[2].substr(7);
    }
    // IF V IS S (AND V IS S)* THEN V IS S
    size_t i = 0;
    bool ok = !body.empty() && NameEquals(body[i++], "IF");
    bool then_seen = false;
    while (ok && i + 2 < body.size() && !then_seen) {
      if (!NameEquals(body[i + 1], "IS")) {
        ok = false;
        break;
      }
      rule.antecedent.push_back({body[i], body[i + 2]});
      i += 3;
      if (i < body.size() && NameEquals(body[i], "AND")) {
        ++i;
      } else if (i < body.size() && NameEquals(body[i], "THEN")) {
        ++i;
        then_seen = true;
      } else {
        ok = false;
      }
    }
    if (ok && then_seen && i + 3 == body.size() &&
        NameEquals(body[i + 1], "IS")) {
      rule.consequent = {body[i], body[i + 2]};
    } else {
      fail("rule " + rule.id +
           ": expected 'IF <Var> IS <Set> [AND <Var> IS <Set>]... THEN "
           "<Var> IS <Set>'");
      continue;
    }
    kb->AddRule(std::move(rule));
  }
}

Diagnostic Warn(DiagnosticCode code, std::string msg, int line = 0) {
  return {Severity::kWarning, code, std::move(msg), {}, line};
}

Diagnostic Err(DiagnosticCode code, std::string msg, int line = 0) {
  return {Severity::kError, code, std::move(msg), {}, line};
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw KbError({{Severity::kError, DiagnosticCode::kParseError,
                    "cannot read " + path.string(), path.string(), 0}});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

const char *DiagnosticCodeName(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::kParseError: return "ParseError";
    case DiagnosticCode::kUnresolvedReference: return "UnresolvedReference";
    case DiagnosticCode::kIncompleteCoverage: return "IncompleteCoverage";
    case DiagnosticCode::kDuplicateRuleId: return "DuplicateRuleId";
    case DiagnosticCode::kDuplicateVariable: return "DuplicateVariable";
    case DiagnosticCode::kDuplicateSet: return "DuplicateSet";
    case DiagnosticCode::kBadTrapezoid: return "BadTrapezoid";
    case DiagnosticCode::kSetOutsideUniverse: return "SetOutsideUniverse";
    case DiagnosticCode::kEmptyVariable: return "EmptyVariable";
    case DiagnosticCode::kMissingOutput: return "MissingOutput";
    case DiagnosticCode::kBadConsequent: return "BadConsequent";
    case DiagnosticCode::kUnreachable: return "Unreachable";
    case DiagnosticCode::kRedundantConjunct: return "RedundantConjunct";
    case DiagnosticCode::kUnusedVariable: return "UnusedVariable";
  }
  return "?";
}

std::string Diagnostic::ToString() const {
  std::string out = severity == Severity::kError ? "error" : "warning";
  out += " ";
  out += DiagnosticCodeName(code);
  if (!file.empty() || line > 0) {
    out += " (" + (file.empty() ? std::string("line") : file) +
           (line > 0 ? ":" + std::to_string(line) : "") + ")";
  }
  return out + ": " + message;
}

bool HasErrors(const std::vector<Diagnostic> &diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic &d) {
                       return d.severity == Severity::kError;
                     });
}

KbError::KbError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "knowledge base invalid";
        for (const Diagnostic &d : diagnostics) {
          if (d.severity == Severity::kError) msg += "\n  " + d.ToString();
        }
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::optional<CoverageGap> FindCoverageGap(const FuzzyVariable &var) {
  struct Interval {
    double lo, hi;
    bool lo_closed, hi_closed;
  };
  std::vector<Interval> iv;
  for (const FuzzySet &s : var.sets) {
    const Trapezoid &t = s.mf;
    iv.push_back({t.a, t.d, t.a == t.b, t.c == t.d});
  }
  std::sort(iv.begin(), iv.end(), [](const Interval &p, const Interval &q) {
    if (p.lo != q.lo) return p.lo < q.lo;
    return p.lo_closed > q.lo_closed;
  });
  double cur = var.lo;
  bool covered = false;  // whether `cur` itself is covered
  for (const Interval &i : iv) {
    if (i.lo > cur) return CoverageGap{cur, std::min(i.lo, var.hi)};
    if (i.lo == cur && !covered && !i.lo_closed) return CoverageGap{cur, cur};
    if (i.hi > cur) {
      cur = i.hi;
      covered = i.hi_closed;
    } else if (i.hi == cur) {
      covered = covered || i.hi_closed;
    }
    if (cur > var.hi) break;
  }
  if (cur < var.hi || (cur == var.hi && !covered)) {
    return CoverageGap{cur, var.hi};
  }
  return std::nullopt;
}

std::vector<Diagnostic> Validate(const KnowledgeBase &kb) {
  std::vector<Diagnostic> out;
  const FuzzyVariable *output = kb.output();
  if (!output) {
    out.push_back(Err(DiagnosticCode::kMissingOutput,
                      "no output variable " + kb.output_variable()));
  }
  for (const FuzzyVariable &v : kb.variables()) {
    if (v.sets.empty()) {
      out.push_back(Err(DiagnosticCode::kEmptyVariable,
                        "variable " + v.name + " has no sets"));
      continue;
    }
    bool shapes_ok = true;
    std::set<std::string, NameLess> names;
    for (const FuzzySet &s : v.sets) {
      const Trapezoid &t = s.mf;
      if (!names.insert(s.name).second) {
        out.push_back(Err(DiagnosticCode::kDuplicateSet,
                          "duplicate set " + s.name + " in " + v.name));
      }
      if (!t.IsValid()) {
        shapes_ok = false;
        out.push_back(Err(DiagnosticCode::kBadTrapezoid,
                          v.name + "." + s.name + " needs a <= b <= c <= d"));
      } else if (t.a < v.lo || t.d > v.hi) {
        shapes_ok = false;
        out.push_back(Err(DiagnosticCode::kSetOutsideUniverse,
                          v.name + "." + s.name + " leaves the universe [" +
                              FormatDouble(v.lo) + ", " + FormatDouble(v.hi) +
                              "]"));
      }
    }
    if (!shapes_ok) continue;
    if (auto gap = FindCoverageGap(v)) {
      out.push_back(Err(DiagnosticCode::kIncompleteCoverage,
                        v.name + " leaves [" + FormatDouble(gap->lo) + ", " +
                            FormatDouble(gap->hi) + "] uncovered"));
    }
  }

  std::set<std::string> ids;
  std::set<std::string, NameLess> used;
  for (const FuzzyRule &r : kb.rules()) {
    if (!ids.insert(r.id).second) {
      out.push_back(Err(DiagnosticCode::kDuplicateRuleId,
                        "rule id " + r.id + " used twice", r.line));
    }
    if (r.antecedent.empty()) {
      out.push_back(Err(DiagnosticCode::kParseError,
                        "rule " + r.id + " has no conditions", r.line));
    }
    for (size_t i = 0; i < r.antecedent.size(); ++i) {
      const Conjunct &c = r.antecedent[i];
      used.insert(c.variable);
      const FuzzyVariable *v = kb.FindVariable(c.variable);
      if (!v) {
        out.push_back(Err(DiagnosticCode::kUnresolvedReference,
                          "rule " + r.id + ": unknown variable " + c.variable,
                          r.line));
        continue;
      }
      if (v == output) {
        out.push_back(Err(DiagnosticCode::kBadConsequent,
                          "rule " + r.id + ": output variable " + v->name +
                              " used as a condition",
                          r.line));
      }
      int s = v->FindSet(c.set);
      if (s < 0) {
        out.push_back(Err(DiagnosticCode::kUnresolvedReference,
                          "rule " + r.id + ": unknown set " + c.set + " of " +
                              v->name,
                          r.line));
        continue;
      }
      for (size_t j = 0; j < i; ++j) {
        const Conjunct &p = r.antecedent[j];
        if (!NameEquals(p.variable, c.variable)) continue;
        int t = v->FindSet(p.set);
        if (t < 0) continue;
        if (Disjoint(v->sets[static_cast<size_t>(s)].mf,
                     v->sets[static_cast<size_t>(t)].mf)) {
          out.push_back(Warn(DiagnosticCode::kUnreachable,
                             "rule " + r.id + " can never fire: " + v->name +
                                 " cannot be both " + p.set + " and " + c.set,
                             r.line));
        } else {
          out.push_back(Warn(DiagnosticCode::kRedundantConjunct,
                             "rule " + r.id + " tests " + v->name + " twice",
                             r.line));
        }
      }
    }
    const Conjunct &q = r.consequent;
    if (!NameEquals(q.variable, kb.output_variable())) {
      out.push_back(Err(DiagnosticCode::kBadConsequent,
                        "rule " + r.id + " concludes on " + q.variable +
                            ", not " + kb.output_variable(),
                        r.line));
    } else if (output && output->FindSet(q.set) < 0) {
      out.push_back(Err(DiagnosticCode::kUnresolvedReference,
                        "rule " + r.id + ": unknown set " + q.set + " of " +
                            output->name,
                        r.line));
    }
  }
  for (const FuzzyVariable &v : kb.variables()) {
    if (&v == output || used.count(v.name)) continue;
    out.push_back(Warn(DiagnosticCode::kUnusedVariable,
                       "variable " + v.name + " is not used by any rule"));
  }
  return out;
}

ParsedKb ParseKb(std::string_view variables_text, std::string_view rules_text,
                 std::string variables_name, std::string rules_name) {
  ParsedKb out;
  VariablesParser(std::move(variables_name), &out.kb, &out.diagnostics)
      .Parse(variables_text);
  ParseRules(rules_text, rules_name, &out.kb, &out.diagnostics);
  for (Diagnostic &d : Validate(out.kb)) {
    if (d.line > 0 && d.file.empty()) d.file = rules_name;
    out.diagnostics.push_back(std::move(d));
  }
  return out;
}

KnowledgeBase LoadKb(const std::filesystem::path &variables_path,
                     const std::filesystem::path &rules_path,
                     std::vector<Diagnostic> *warnings) {
  ParsedKb parsed = ParseKb(ReadFile(variables_path), ReadFile(rules_path),
                            variables_path.filename().string(),
                            rules_path.filename().string());
  if (HasErrors(parsed.diagnostics)) throw KbError(std::move(parsed.diagnostics));
  if (warnings) *warnings = std::move(parsed.diagnostics);
  return std::move(parsed.kb);
}

std::string SerializeVariables(const KnowledgeBase &kb) {
  std::string out;
  if (!kb.version.empty()) out += "version " + kb.version + "\n\n";
  for (const FuzzyVariable &v : kb.variables()) {
    out += "var " + v.name + " universe " + FormatDouble(v.lo) + " " +
           FormatDouble(v.hi) + "\n";
    for (const FuzzySet &s : v.sets) {
      out += "  set " + s.name + " trapezoid " + FormatDouble(s.mf.a) + " " +
             FormatDouble(s.mf.b) + " " + FormatDouble(s.mf.c) + " " +
             FormatDouble(s.mf.d) + "\n";
    }
  }
  return out;
}

std::string SerializeRules(const KnowledgeBase &kb) {
  std::string out;
  for (const FuzzyRule &r : kb.rules()) {
    out += "rule " + r.id;
    if (!r.source.empty()) out += " source=" + r.source;
    out += ": IF";
    for (size_t i = 0; i < r.antecedent.size(); ++i) {
      if (i > 0) out += " AND";
      out += " " + r.antecedent[i].variable + " IS " + r.antecedent[i].set;
    }
    out += " THEN " + r.consequent.variable + " IS " + r.consequent.set + "\n";
  }
  return out;
}

std::filesystem::path DefaultKbVariablesPath() {
  return DefaultDataDir() / "kb" / "default.vars";
}

std::filesystem::path DefaultKbRulesPath() {
  return DefaultDataDir() / "kb" / "default.rules";
}

}  // namespace qsent
