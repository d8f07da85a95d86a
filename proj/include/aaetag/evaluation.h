// Copyright 2026 The aaetag Authors
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

#ifndef AAETAG_EVALUATION_H_
#define AAETAG_EVALUATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaetag/corpus.h"
#include "aaetag/tagset.h"

namespace aaetag {

struct TagScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;    // gold count
  int64_t predicted = 0;  // predicted count
  int64_t correct = 0;    // true positives
};

struct EvalReport {
  TagSet tagset;
  // Every tag of the inventory has an entry; tags with no gold and no
  // predicted instance are also listed in absent_tags.
  std::map<std::string, TagScore> per_tag;
  std::set<std::string> absent_tags;
  double token_accuracy = 0.0;
  int64_t correct_tokens = 0;
  int64_t total_tokens = 0;

  nlohmann::json ToJson() const;
  static EvalReport FromJson(const nlohmann::json& doc);
};

// Token-level scoring of pred's predicted column against gold's gold column.
// One-vs-rest P/R/F1 per tag with 0/0 taken as 0.
EvalReport Score(const Corpus& gold, const Corpus& pred);

// Tab-separated "Tag P R F1 Support" rows; absent tags render as "---".
std::string FormatReport(const EvalReport& report);

struct ReportDiff {
  double accuracy_a = 0.0;
  double accuracy_b = 0.0;
  double accuracy_delta = 0.0;  // b - a, as a fraction
  std::map<std::string, double> f1_delta;
};

ReportDiff Compare(const EvalReport& a, const EvalReport& b);

// Accuracy rows in percent and a signed "Diff." row, then per-tag F1 deltas.
std::string FormatDiff(const ReportDiff& diff, const std::string& label_a,
                       const std::string& label_b);

// Signed fixed-point percent, e.g. "+1.48".
std::string SignedPercent(double fraction);

struct TagCount {
  std::string tag;
  int64_t count_a = 0;
  int64_t count_b = 0;
};

// One row per inventory tag.
std::vector<TagCount> TagHistogram(const Corpus& a, const Corpus& b,
                                   TagChannel channel);
std::string FormatHistogram(const std::vector<TagCount>& counts,
                            const std::string& label_a,
                            const std::string& label_b);
// Grouped bar chart.
std::string HistogramSvg(const std::vector<TagCount>& counts,
                         const std::string& label_a,
                         const std::string& label_b);

// Takes a training corpus and returns a function that fills pred_tags.
using TaggerFn = std::function<Corpus(const Corpus&)>;
using TrainerFn = std::function<TaggerFn(const Corpus&)>;

struct CrossValidationResult {
  std::vector<EvalReport> folds;
  // Pooled token counts across folds.
  EvalReport pooled;
  double mean_fold_accuracy = 0.0;
};

// Errors from the trainer are rethrown with the fold index attached.
CrossValidationResult CrossValidate(const Corpus& corpus,
                                    const TrainerFn& trainer, int k,
                                    uint64_t seed);

}  // namespace aaetag

#endif  // AAETAG_EVALUATION_H_
