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

#include "qsent/eval.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qsent {
namespace {

using json = nlohmann::json;

int ClassIndex(Label l) {
  for (size_t i = 0; i < kMatrixClasses.size(); ++i) {
    if (kMatrixClasses[i] == l) return static_cast<int>(i);
  }
  return -1;
}

Metric ValueOf(const std::optional<Fraction> &f) {
  return f ? Metric(f->value()) : std::nullopt;
}

Metric Mean(std::initializer_list<Metric> values) {
  double sum = 0;
  int n = 0;
  for (const Metric &m : values) {
    if (m) {
      sum += *m;
      ++n;
    }
  }
  return n ? Metric(sum / n) : std::nullopt;
}

std::string Fixed2(Metric m) {
  if (!m) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *m);
  return buf;
}

std::string FractionCell(const std::optional<Fraction> &f) {
  if (!f) return "undefined";
  return Fixed2(f->value()) + " (" + f->ToString() + ")";
}

// Unreduced counts, e.g. "1.00 (23/23)".
std::string CountCell(int64_t num, int64_t den) {
  if (den <= 0) return "undefined";
  return Fixed2(static_cast<double>(num) / static_cast<double>(den)) + " (" +
         std::to_string(num) + "/" + std::to_string(den) + ")";
}

json FractionJson(const std::optional<Fraction> &f) {
  if (!f) return nullptr;
  return {{"num", f->num}, {"den", f->den}, {"value", f->value()}};
}

json MetricJson(Metric m) { return m ? json(*m) : json(nullptr); }

}  // namespace

std::optional<Fraction> Fraction::Of(int64_t num, int64_t den) {
  if (den <= 0 || num < 0) return std::nullopt;
  int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  return Fraction{num / g, den / g};
}

std::string Fraction::ToString() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

std::vector<GoldAnnotation> ParseGold(std::string_view content,
                                      const std::string &name) {
  std::vector<GoldAnnotation> out;
  std::map<SentenceKey, int> seen;
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = name + ":" + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw EvalError(EvalError::Code::kParse, where + e.what());
    }
    GoldAnnotation g;
    try {
      const json &id = j.at("review_id");
      g.key.review_id = id.is_string() ? id.get<std::string>() : id.dump();
      g.key.sentence_index = j.at("sentence_index").get<int>();
      std::string label = j.at("gold_label").get<std::string>();
      auto parsed = LabelFromName(label);
      if (!parsed || *parsed == Label::kUnclassified) {
        throw EvalError(EvalError::Code::kParse,
                        where + "unknown gold_label '" + label + "'");
      }
      g.label = *parsed;
      if (j.contains("gold_type") && !j["gold_type"].is_null()) {
        std::string type = j["gold_type"].get<std::string>();
        g.type = SentenceTypeFromName(type);
        if (!g.type) {
          throw EvalError(EvalError::Code::kParse,
                          where + "unknown gold_type '" + type + "'");
        }
      }
      g.annotator = j.value("annotator", "");
      g.text = j.value("text", "");
    } catch (const json::exception &e) {
      throw EvalError(EvalError::Code::kParse, where + e.what());
    }
    auto [it, inserted] = seen.emplace(g.key, line_no);
    if (!inserted) {
      throw EvalError(EvalError::Code::kDuplicateKey,
                      where + "duplicate key (" + g.key.review_id + ", " +
                          std::to_string(g.key.sentence_index) +
                          "), first seen on line " + std::to_string(it->second));
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GoldAnnotation> LoadGold(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw EvalError(EvalError::Code::kFile, "cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseGold(buf.str(), path.string());
}

int64_t EvalReport::MatrixTotal() const {
  int64_t n = 0;
  for (const auto &row : confusion) {
    for (int64_t c : row) n += c;
  }
  return n;
}

Metric F1(Metric p, Metric r) {
  if (!p || !r || *p + *r == 0) return std::nullopt;
  return 2 * *p * *r / (*p + *r);
}

EvalReport Evaluate(std::span<const Prediction> predictions,
                    std::span<const GoldAnnotation> gold) {
  std::map<SentenceKey, std::vector<Label>> by_key;
  for (const Prediction &p : predictions) by_key[p.key].push_back(p.label);

  EvalReport r;
  r.gold_total = static_cast<int64_t>(gold.size());
  std::map<SentenceKey, bool> gold_keys;
  for (const GoldAnnotation &g : gold) {
    gold_keys[g.key] = true;
    auto it = by_key.find(g.key);
    Label predicted = it == by_key.end() ? Label::kNonOpinionated
                                         : FuseLabels(it->second);
    int p = ClassIndex(predicted);
    if (g.label == Label::kNonOpinionated) {
      ++r.gold_non_opinionated;
      if (p < 0) {
        ++r.non_opinionated_correct;
      } else {
        ++r.false_opinionated;
      }
      continue;
    }
    int a = ClassIndex(g.label);
    if (p < 0) {
      ++r.extraction_misses;
      ++r.misses_by_class[static_cast<size_t>(a)];
      r.missed_keys.push_back(g.key);
      continue;
    }
    ++r.confusion[static_cast<size_t>(p)][static_cast<size_t>(a)];
  }
  for (const auto &[key, labels] : by_key) {
    if (!gold_keys.count(key)) ++r.unmatched_predictions;
  }

  int64_t trace = 0;
  for (size_t c = 0; c < 3; ++c) {
    int64_t row = 0, col = 0;
    for (size_t k = 0; k < 3; ++k) {
      row += r.confusion[c][k];
      col += r.confusion[k][c];
    }
    int64_t hit = r.confusion[c][c];
    trace += hit;
    ClassMetrics &m = r.per_class[c];
    m.label = kMatrixClasses[c];
    m.precision = Fraction::Of(hit, row);
    m.recall = Fraction::Of(hit, col);
    m.detection_recall = Fraction::Of(hit, col + r.misses_by_class[c]);
    m.f1 = F1(ValueOf(m.precision), ValueOf(m.recall));
    m.detection_f1 = F1(ValueOf(m.precision), ValueOf(m.detection_recall));
  }
  int64_t total = r.MatrixTotal();
  r.micro_precision = Fraction::Of(trace, total);
  r.micro_recall = Fraction::Of(trace, total);
  r.micro_detection_recall = Fraction::Of(trace, total + r.extraction_misses);
  r.micro_f1 = F1(ValueOf(r.micro_precision), ValueOf(r.micro_recall));
  r.micro_detection_f1 =
      F1(ValueOf(r.micro_precision), ValueOf(r.micro_detection_recall));
  const auto &pc = r.per_class;
  r.macro_precision = Mean({ValueOf(pc[0].precision), ValueOf(pc[1].precision),
                            ValueOf(pc[2].precision)});
  r.macro_recall = Mean({ValueOf(pc[0].recall), ValueOf(pc[1].recall),
                         ValueOf(pc[2].recall)});
  r.macro_f1 = Mean({pc[0].f1, pc[1].f1, pc[2].f1});
  r.accuracy = Fraction::Of(trace + r.non_opinionated_correct, r.gold_total);
  return r;
}

std::string RenderReport(const EvalReport &r, std::string_view format) {
  if (format == "json" || format == "jsonl") {
    json j;
    j["confusion"] = {{"order", {"Neutral", "Positive", "Negative"}},
                      {"predicted_by_actual", r.confusion}};
    j["extraction_misses"] = r.extraction_misses;
    j["gold_total"] = r.gold_total;
    j["gold_opinionated"] = r.GoldOpinionated();
    j["matrix_total"] = r.MatrixTotal();
    j["gold_non_opinionated"] = r.gold_non_opinionated;
    j["non_opinionated_correct"] = r.non_opinionated_correct;
    j["false_opinionated"] = r.false_opinionated;
    j["unmatched_predictions"] = r.unmatched_predictions;
    json missed = json::array();
    for (const SentenceKey &k : r.missed_keys) {
      missed.push_back({{"review_id", k.review_id},
                        {"sentence_index", k.sentence_index}});
    }
    j["missed"] = missed;
    json classes = json::object();
    for (const ClassMetrics &m : r.per_class) {
      classes[LabelName(m.label)] = {
          {"precision", FractionJson(m.precision)},
          {"recall", FractionJson(m.recall)},
          {"detection_recall", FractionJson(m.detection_recall)},
          {"f1", MetricJson(m.f1)},
          {"detection_f1", MetricJson(m.detection_f1)}};
    }
    j["per_class"] = classes;
    j["micro"] = {{"precision", FractionJson(r.micro_precision)},
                  {"recall", FractionJson(r.micro_recall)},
                  {"detection_recall", FractionJson(r.micro_detection_recall)},
                  {"f1", MetricJson(r.micro_f1)},
                  {"detection_f1", MetricJson(r.micro_detection_f1)}};
    j["macro"] = {{"precision", MetricJson(r.macro_precision)},
                  {"recall", MetricJson(r.macro_recall)},
                  {"f1", MetricJson(r.macro_f1)}};
    j["accuracy"] = FractionJson(r.accuracy);
    return j.dump() + "\n";
  }
  if (format != "text") {
    throw EvalError(EvalError::Code::kUnknownFormat,
                    "unknown report format '" + std::string(format) + "'");
  }
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-20s%10s%10s%10s\n", "Predicted \\ Actual",
                "Neutral", "Positive", "Negative");
  out << line;
  for (size_t p = 0; p < 3; ++p) {
    std::snprintf(line, sizeof(line), "%-20s%10lld%10lld%10lld\n",
                  LabelName(kMatrixClasses[p]),
                  static_cast<long long>(r.confusion[p][0]),
                  static_cast<long long>(r.confusion[p][1]),
                  static_cast<long long>(r.confusion[p][2]));
    out << line;
  }
  out << "\n";
  out << "Overall precision\tOverall recall\tOverall F1\n";
  out << Fixed2(ValueOf(r.micro_precision)) << "\t\t\t"
      << Fixed2(ValueOf(r.micro_detection_recall)) << "\t\t"
      << Fixed2(r.micro_detection_f1) << "\n\n";
  out << "micro precision        " << FractionCell(r.micro_precision) << "\n";
  out << "classification recall  " << FractionCell(r.micro_recall) << "\n";
  out << "detection recall       " << FractionCell(r.micro_detection_recall)
      << "\n";
  out << "classification F1      " << Fixed2(r.micro_f1) << "\n";
  out << "detection F1           " << Fixed2(r.micro_detection_f1) << "\n";
  out << "macro P / R / F1       " << Fixed2(r.macro_precision) << " / "
      << Fixed2(r.macro_recall) << " / " << Fixed2(r.macro_f1) << "\n";
  out << "accuracy               " << FractionCell(r.accuracy) << "\n\n";
  for (size_t c = 0; c < 3; ++c) {
    int64_t row = 0, col = 0;
    for (size_t k = 0; k < 3; ++k) {
      row += r.confusion[c][k];
      col += r.confusion[k][c];
    }
    const int64_t hit = r.confusion[c][c];
    out << LabelName(r.per_class[c].label) << ": precision "
        << CountCell(hit, row) << ", recall " << CountCell(hit, col)
        << ", detection recall "
        << CountCell(hit, col + r.misses_by_class[c]) << "\n";
  }
  out << "\n";
  out << "matrix total           " << r.MatrixTotal() << "\n";
  out << "extraction misses      " << r.extraction_misses << "\n";
  out << "gold opinionated       " << r.GoldOpinionated() << "\n";
  out << "gold non-opinionated   " << r.gold_non_opinionated << " ("
      << r.false_opinionated << " predicted opinionated)\n";
  out << "gold total             " << r.gold_total << "\n";
  if (r.unmatched_predictions > 0) {
    out << "predictions without gold " << r.unmatched_predictions << "\n";
  }
  for (const SentenceKey &k : r.missed_keys) {
    out << "missed " << k.review_id << "#" << k.sentence_index << "\n";
  }
  return out.str();
}

}  // namespace qsent
