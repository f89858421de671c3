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

// qsent: extract quantitative change events from drug reviews, classify
// their sentiment with the fuzzy knowledge base, and score against gold.
//
//   qsent extract  --input reviews.jsonl
//   qsent classify --input reviews.jsonl --format jsonl
//   qsent evaluate --gold gold.jsonl --input reviews.jsonl
//   qsent kb validate --kb-vars my.vars --kb-rules my.rules

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qsent/classify.h"
#include "qsent/eval.h"
#include "qsent/extract.h"
#include "qsent/kb.h"
#include "qsent/lexicon.h"
#include "qsent/records.h"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kKb = 3, kIo = 4 };

struct Exit {
  int code;
  std::string message;
};

struct RunConfig {
  std::string lexicons;
  std::string kb_vars;
  std::string kb_rules;
  std::string input = "-";
  std::string output = "-";
  std::string format = "text";
  bool fuse = false;
  size_t grid_points = 1001;
  unsigned jobs = 0;
  bool dropped = false;
  std::string gold;
  std::string predictions;
};

qsent::Lexicons LoadLexiconsOrExit(const RunConfig &cfg) {
  try {
    return qsent::LoadLexicons(cfg.lexicons);
  } catch (const qsent::LexiconError &e) {
    throw Exit{kConfig, e.what()};
  }
}

qsent::KnowledgeBase LoadKbOrExit(const RunConfig &cfg) {
  try {
    std::vector<qsent::Diagnostic> warnings;
    qsent::KnowledgeBase kb = qsent::LoadKb(cfg.kb_vars, cfg.kb_rules, &warnings);
    for (const auto &w : warnings) std::cerr << w.ToString() << "\n";
    return kb;
  } catch (const qsent::KbError &e) {
    throw Exit{kKb, e.what()};
  }
}

qsent::ReviewBatch ReadInput(const RunConfig &cfg) {
  qsent::ReviewBatch batch;
  if (cfg.input == "-") {
    batch = qsent::ReadReviews(std::cin);
  } else {
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) throw Exit{kIo, "cannot read input " + cfg.input};
    batch = qsent::ReadReviews(in);
  }
  for (const auto &e : batch.errors) {
    std::cerr << cfg.input << ":" << e.line << ": skipped: " << e.message << "\n";
  }
  return batch;
}

// Runs fn over [0, n) on `jobs` threads; results keep input order.
std::vector<std::string> ParallelMap(
    size_t n, unsigned jobs, const std::function<std::string(size_t)> &fn) {
  std::vector<std::string> out(n);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<size_t>(jobs, std::max<size_t>(n, 1)));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) out[i] = fn(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();
  return out;
}

class Output {
 public:
  explicit Output(const std::string &path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw Exit{kIo, "cannot write output " + path};
    }
  }
  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

bool Structured(const RunConfig &cfg) { return cfg.format != "text"; }

std::vector<qsent::SentimentResult> ClassifyOne(
    const qsent::KnowledgeBase &kb, const qsent::Lexicons &lex,
    const qsent::Review &review, const RunConfig &cfg) {
  qsent::ClassifyOptions options;
  options.infer.grid_points = cfg.grid_points;
  auto results = qsent::ClassifyReview(kb, lex, review, options);
  if (cfg.fuse) results = qsent::FuseBySentence(std::move(results));
  return results;
}

int CmdExtract(const RunConfig &cfg) {
  qsent::Lexicons lex = LoadLexiconsOrExit(cfg);
  qsent::ReviewBatch batch = ReadInput(cfg);
  Output out(cfg.output);
  auto chunks = ParallelMap(batch.reviews.size(), cfg.jobs, [&](size_t i) {
    qsent::ReviewExtraction x = qsent::ExtractReview(batch.reviews[i], lex);
    return Structured(cfg) ? qsent::ExtractionToJsonl(x, cfg.dropped)
                           : qsent::ExtractionToText(x);
  });
  for (const std::string &c : chunks) out.stream() << c;
  return kOk;
}

int CmdClassify(const RunConfig &cfg) {
  qsent::Lexicons lex = LoadLexiconsOrExit(cfg);
  qsent::KnowledgeBase kb = LoadKbOrExit(cfg);
  qsent::ReviewBatch batch = ReadInput(cfg);
  Output out(cfg.output);
  auto chunks = ParallelMap(batch.reviews.size(), cfg.jobs, [&](size_t i) {
    std::string s;
    for (const auto &r : ClassifyOne(kb, lex, batch.reviews[i], cfg)) {
      s += Structured(cfg) ? qsent::ResultToJson(r) + "\n"
                           : qsent::ResultToText(r);
    }
    return s;
  });
  for (const std::string &c : chunks) out.stream() << c;
  return kOk;
}

int CmdEvaluate(const RunConfig &cfg) {
  std::vector<qsent::GoldAnnotation> gold;
  try {
    gold = qsent::LoadGold(cfg.gold);
  } catch (const qsent::EvalError &e) {
    throw Exit{e.code() == qsent::EvalError::Code::kFile ? kIo : kConfig,
               e.what()};
  }
  std::vector<qsent::Prediction> predictions;
  if (!cfg.predictions.empty()) {
    std::ifstream in(cfg.predictions, std::ios::binary);
    if (!in) throw Exit{kIo, "cannot read predictions " + cfg.predictions};
    try {
      predictions = qsent::ReadPredictions(in, cfg.predictions);
    } catch (const qsent::EvalError &e) {
      throw Exit{kConfig, e.what()};
    }
  } else {
    qsent::Lexicons lex = LoadLexiconsOrExit(cfg);
    qsent::KnowledgeBase kb = LoadKbOrExit(cfg);
    qsent::ReviewBatch batch = ReadInput(cfg);
    for (const qsent::Review &review : batch.reviews) {
      for (const auto &r : ClassifyOne(kb, lex, review, cfg)) {
        predictions.push_back({{r.review_id, r.sentence_index}, r.label});
      }
    }
  }
  qsent::EvalReport report = qsent::Evaluate(predictions, gold);
  Output out(cfg.output);
  out.stream() << qsent::RenderReport(report, Structured(cfg) ? "json" : "text");
  return kOk;
}

int CmdKbValidate(const RunConfig &cfg) {
  auto read = [](const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Exit{kIo, "cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  qsent::ParsedKb parsed =
      qsent::ParseKb(read(cfg.kb_vars), read(cfg.kb_rules),
                     std::filesystem::path(cfg.kb_vars).filename().string(),
                     std::filesystem::path(cfg.kb_rules).filename().string());
  Output out(cfg.output);
  size_t errors = 0, warnings = 0;
  for (const auto &d : parsed.diagnostics) {
    out.stream() << d.ToString() << "\n";
    (d.severity == qsent::Severity::kError ? errors : warnings)++;
  }
  out.stream() << parsed.kb.variables().size() << " variables, "
               << parsed.kb.rules().size() << " rules, " << errors
               << " errors, " << warnings << " warnings\n";
  return qsent::HasErrors(parsed.diagnostics) ? kKb : kOk;
}

}  // namespace

int main(int argc, char **argv) {
  RunConfig cfg;
  const std::filesystem::path data = qsent::DefaultDataDir();
  cfg.lexicons = (data / "lexicons").string();
  cfg.kb_vars = qsent::DefaultKbVariablesPath().string();
  cfg.kb_rules = qsent::DefaultKbRulesPath().string();

  CLI::App app{"Sentiment of quantitative statements in drug reviews"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--lexicons", cfg.lexicons, "Gazetteer directory")
      ->envname("QSENT_LEXICONS")
      ->capture_default_str();
  app.add_option("--kb-vars", cfg.kb_vars, "Knowledge-base variables file")
      ->envname("QSENT_KB_VARS")
      ->capture_default_str();
  app.add_option("--kb-rules", cfg.kb_rules, "Knowledge-base rules file")
      ->envname("QSENT_KB_RULES")
      ->capture_default_str();
  app.add_option("--input", cfg.input, "Reviews, one per line; '-' is stdin")
      ->envname("QSENT_INPUT");
  app.add_option("--output", cfg.output, "Output file; '-' is stdout")
      ->envname("QSENT_OUTPUT");
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "jsonl"}))
      ->envname("QSENT_FORMAT");
  app.add_flag("--fuse", cfg.fuse, "One label per sentence (majority vote)")
      ->envname("QSENT_FUSE");
  app.add_option("--grid-points", cfg.grid_points,
                 "Samples used for centroid defuzzification")
      ->check(CLI::Range(size_t{2}, size_t{100000000}))
      ->envname("QSENT_GRID_POINTS");
  app.add_option("--jobs", cfg.jobs, "Worker threads; 0 uses every core")
      ->envname("QSENT_JOBS");

  CLI::App *extract = app.add_subcommand("extract", "Print change events");
  extract->add_flag("--dropped", cfg.dropped,
                    "Also print events removed as factual (jsonl only)");
  CLI::App *classify = app.add_subcommand("classify", "Label every event");
  CLI::App *evaluate =
      app.add_subcommand("evaluate", "Score predictions against gold labels");
  evaluate->add_option("--gold", cfg.gold, "Gold annotations (jsonl)")
      ->required()
      ->envname("QSENT_GOLD");
  evaluate->add_option("--predictions", cfg.predictions,
                       "Output of 'classify --format jsonl'; when absent the "
                       "--input reviews are classified first")
      ->envname("QSENT_PREDICTIONS");
  CLI::App *kb = app.add_subcommand("kb", "Knowledge-base tools");
  kb->require_subcommand(1);
  CLI::App *kb_validate = kb->add_subcommand("validate", "Check the KB files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*extract) return CmdExtract(cfg);
    if (*classify) return CmdClassify(cfg);
    if (*evaluate) return CmdEvaluate(cfg);
    if (*kb_validate) return CmdKbValidate(cfg);
  } catch (const Exit &e) {
    std::cerr << "qsent: " << e.message << "\n";
    return e.code;
  } catch (const std::exception &e) {
    std::cerr << "qsent: " << e.what() << "\n";
    return kIo;
  }
  return kConfig;
}
