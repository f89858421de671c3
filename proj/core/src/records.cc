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

#include "qsent/records.h"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qsent {
namespace {

using json = nlohmann::json;

std::optional<std::string> OptString(const json &j, const char *key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  const json &v = j[key];
  return v.is_string() ? v.get<std::string>() : v.dump();
}

json ValueJson(const std::optional<NumericValue> &v) {
  if (!v) return nullptr;
  return {{"magnitude", v->magnitude}, {"unit", UnitName(v->unit)},
          {"raw", v->raw}};
}

json OptJson(const std::optional<double> &v) {
  return v ? json(*v) : json(nullptr);
}

json OptJson(const std::optional<std::string> &v) {
  return v ? json(*v) : json(nullptr);
}

json EventFields(const ChangeEvent &e) {
  json j;
  j["term"] = GetTermInfo(e.term).name;
  j["sentence_type"] = SentenceTypeName(e.type);
  j["values"] = {{"first", ValueJson(e.first_value)},
                 {"second", ValueJson(e.second_value)},
                 {"delta", ValueJson(e.delta)},
                 {"percent", ValueJson(e.percent)}};
  j["direction"] = DirectionName(e.direction);
  j["drug"] = OptJson(e.drug);
  j["dosage_mg"] = OptJson(e.dosage_mg);
  j["duration_days"] = OptJson(e.duration_days);
  j["pattern"] = e.pattern;
  j["term_span"] = {e.term_span.begin, e.term_span.end};
  return j;
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

std::string ValuesText(const ChangeEvent &e) {
  switch (e.type) {
    case SentenceType::kFromTo:
      return Num(e.first_value->magnitude) + " -> " +
             Num(e.second_value->magnitude);
    case SentenceType::kToFinal:
      return "-> " + Num(e.second_value->magnitude);
    case SentenceType::kChangeByAmount:
      return "by " + Num(e.delta->magnitude);
    case SentenceType::kChangeByPercent:
      return "by " + Num(e.percent->magnitude) + "%";
    case SentenceType::kBaselineChange:
      return "from " + Num(e.first_value->magnitude);
  }
  return "";
}

}  // namespace

ReviewBatch ReadReviews(std::istream &in) {
  ReviewBatch batch;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] != '{') {
      batch.reviews.push_back(
          {std::to_string(line_no), std::nullopt, std::nullopt, std::nullopt,
           line});
      continue;
    }
    try {
      json j = json::parse(line);
      Review r;
      r.review_id = OptString(j, "review_id").value_or(std::to_string(line_no));
      r.text = j.at("text").get<std::string>();
      r.drug = OptString(j, "drug");
      r.dosage = OptString(j, "dosage");
      r.duration = OptString(j, "duration");
      batch.reviews.push_back(std::move(r));
    } catch (const json::exception &e) {
      batch.errors.push_back({line_no, e.what()});
    }
  }
  return batch;
}

std::string EventToJson(const ChangeEvent &e, const std::string &sentence) {
  json j;
  j["review_id"] = e.review_id;
  j["sentence_index"] = e.sentence_index;
  j["sentence_text"] = sentence;
  j.update(EventFields(e));
  return j.dump();
}

std::string EventToText(const ChangeEvent &e) {
  std::string out = std::string(SentenceTypeName(e.type)) + "(" +
                    std::string(GetTermInfo(e.term).name) + ", " +
                    ValuesText(e) + ", " + DirectionName(e.direction) + ")";
  if (e.drug) out += " drug=" + *e.drug;
  if (e.dosage_mg) out += " dosage=" + Num(*e.dosage_mg) + "mg";
  if (e.duration_days) out += " duration=" + Num(*e.duration_days) + "d";
  return out + " [" + e.pattern + "]";
}

std::string ExtractionToJsonl(const ReviewExtraction &x, bool include_dropped) {
  std::string out;
  for (const SentenceExtraction &se : x.sentences) {
    for (const ChangeEvent &e : se.events) {
      out += EventToJson(e, se.sentence.text) + "\n";
    }
    if (!include_dropped) continue;
    for (const DroppedEvent &d : se.dropped) {
      json j = json::parse(EventToJson(d.event, se.sentence.text));
      j["dropped"] = d.reason;
      out += j.dump() + "\n";
    }
  }
  return out;
}

std::string ExtractionToText(const ReviewExtraction &x) {
  std::string out;
  for (const SentenceExtraction &se : x.sentences) {
    out += x.review.review_id + "#" + std::to_string(se.sentence.index) + "  " +
           se.sentence.text + "\n";
    if (se.events.empty()) out += "    NonOpinionated\n";
    for (const ChangeEvent &e : se.events) out += "    " + EventToText(e) + "\n";
    for (const DroppedEvent &d : se.dropped) {
      out += "    dropped (" + d.reason + "): " + EventToText(d.event) + "\n";
    }
  }
  return out;
}

std::string ResultToJson(const SentimentResult &r) {
  json j;
  j["review_id"] = r.review_id;
  j["sentence_index"] = r.sentence_index;
  j["sentence_text"] = r.sentence_text;
  if (r.event) {
    json f = EventFields(*r.event);
    j["term"] = f["term"];
    j["sentence_type"] = f["sentence_type"];
    j["values"] = f["values"];
    j["direction"] = f["direction"];
    j["drug"] = f["drug"];
  } else {
    j["term"] = nullptr;
    j["sentence_type"] = nullptr;
    j["values"] = nullptr;
  }
  j["label"] = LabelName(r.label);
  j["crisp_score"] = OptJson(r.crisp_score);
  json fired = json::array();
  for (const auto &[id, activation] : r.FiredRules()) {
    fired.push_back(id + ":" + Num(activation));
  }
  j["fired_rules"] = fired;
  json inputs = json::object();
  for (const InputEntry &e : r.inputs.entries()) inputs[e.variable] = e.value;
  j["inputs"] = inputs;
  json notes = r.notes;
  for (const std::string &n : r.inputs.notes) notes.push_back(n);
  for (const std::string &w : r.trace.warnings) notes.push_back(w);
  j["notes"] = notes;
  return j.dump();
}

std::string ResultToText(const SentimentResult &r) {
  std::string out = r.review_id + "#" + std::to_string(r.sentence_index) + "  " +
                    LabelName(r.label);
  if (r.crisp_score) out += " (" + Num(*r.crisp_score) + ")";
  if (r.event) out += "  " + EventToText(*r.event);
  out += "\n    " + r.sentence_text + "\n";
  auto fired = r.FiredRules();
  if (!fired.empty()) {
    out += "    rules:";
    for (const auto &[id, a] : fired) out += " " + id + ":" + Num(a);
    out += "\n";
  }
  for (const std::string &n : r.notes) out += "    note: " + n + "\n";
  return out;
}

std::vector<Prediction> ReadPredictions(std::istream &in,
                                        const std::string &name) {
  std::vector<Prediction> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      Prediction p;
      p.key.review_id = OptString(j, "review_id").value_or("");
      p.key.sentence_index = j.at("sentence_index").get<int>();
      std::string label = j.at("label").get<std::string>();
      auto parsed = LabelFromName(label);
      if (!parsed) {
        throw EvalError(EvalError::Code::kParse,
                        name + ":" + std::to_string(line_no) +
                            ": unknown label '" + label + "'");
      }
      p.label = *parsed;
      out.push_back(std::move(p));
    } catch (const json::exception &e) {
      throw EvalError(EvalError::Code::kParse,
                      name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace qsent
