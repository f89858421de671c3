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

#include <benchmark/benchmark.h>

#include "qsent/classify.h"
#include "qsent/extract.h"
#include "qsent/kb.h"

namespace qsent {
namespace {

const Lexicons &Lex() {
  static const Lexicons *lex =
      new Lexicons(LoadLexicons(DefaultDataDir() / "lexicons"));
  return *lex;
}

const KnowledgeBase &Kb() {
  static const KnowledgeBase *kb =
      new KnowledgeBase(LoadKb(DefaultKbVariablesPath(), DefaultKbRulesPath()));
  return *kb;
}

const Review kReview{
    "bench", "Niaspan", "1000 mg", "3 months",
    "Three month blood work showed HDL 49-->51, LDL 231-->201. Before Niaspan: "
    "T-Chol 328, Trig 304, LDL 222, HDL 46. After Niaspan: T-Chol 181, Trig "
    "150, LDL 100, HDL 52. My doctor want my cholesterol to go down to 150. "
    "Reduced Total 27%, Trig 40%, LDL 32% and increased HDL 17%."};

void BM_Tokenize(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(Tokenize(kReview.text));
  state.SetBytesProcessed(state.iterations() *
                          static_cast<int64_t>(kReview.text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_ExtractReview(benchmark::State &state) {
  Lex();
  for (auto _ : state) benchmark::DoNotOptimize(ExtractReview(kReview, Lex()));
}
BENCHMARK(BM_ExtractReview);

void BM_Infer(benchmark::State &state) {
  const std::map<std::string, double, NameLess> inputs = {
      {"CHOLESTEROL_firstValue", 580}, {"CHOLESTEROL_secondValue", 250},
      {"CHOLESTEROL_finalValue", 250}, {"CHOLESTEROL_Change", 330},
      {"CHOLESTEROL_Percent_Change", 56.9}, {"Direction", 1},
      {"CHOLESTEROL_DRUG", 3}, {"Drug_Dosage", 1000}, {"Duration", 90}};
  InferOptions options;
  options.grid_points = static_cast<size_t>(state.range(0));
  Kb();
  for (auto _ : state) benchmark::DoNotOptimize(Infer(Kb(), inputs, options));
}
BENCHMARK(BM_Infer)->Arg(101)->Arg(1001)->Arg(10001);

void BM_ClassifyReview(benchmark::State &state) {
  Lex();
  Kb();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ClassifyReview(Kb(), Lex(), kReview));
  }
}
BENCHMARK(BM_ClassifyReview);

void BM_LoadKb(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(LoadKb(DefaultKbVariablesPath(), DefaultKbRulesPath()));
  }
}
BENCHMARK(BM_LoadKb);

}  // namespace
}  // namespace qsent

BENCHMARK_MAIN();
