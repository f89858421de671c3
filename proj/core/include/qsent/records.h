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

// Line-oriented record formats: review input, extracted events and
// classification results, each as one JSON object per line or as
// human-readable text.

#ifndef QSENT_RECORDS_H_
#define QSENT_RECORDS_H_

#include <istream>
#include <string>
#include <vector>

#include "qsent/classify.h"
#include "qsent/eval.h"
#include "qsent/extract.h"

namespace qsent {

struct RecordError {
  int line = 0;
  std::string message;
};

struct ReviewBatch {
  std::vector<Review> reviews;
  std::vector<RecordError> errors;  // bad lines are skipped, not fatal
};

// A line starting with '{' is a JSON review {review_id, text, drug?,
// dosage?, duration?}; any other non-blank line is plain review text whose
// id is its line number.
ReviewBatch ReadReviews(std::istream &in);

std::string EventToJson(const ChangeEvent &event, const std::string &sentence);
std::string EventToText(const ChangeEvent &event);

// Extraction records for one review: one per event, plus one per dropped
// event when `include_dropped` is set.
std::string ExtractionToJsonl(const ReviewExtraction &extraction,
                              bool include_dropped = false);
std::string ExtractionToText(const ReviewExtraction &extraction);

std::string ResultToJson(const SentimentResult &result);
std::string ResultToText(const SentimentResult &result);

// Reads the label of every result record. Throws EvalError on bad lines.
std::vector<Prediction> ReadPredictions(std::istream &in,
                                        const std::string &name = "predictions");

}  // namespace qsent

#endif  // QSENT_RECORDS_H_
