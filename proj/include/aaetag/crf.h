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
//
// First-order linear-chain CRF tagger.
//
// A tag path y over tokens x scores
//
//   score(x, y) = sum_i sum_{f in F(x, i)} state[f][y_i]
//               + sum_{i>0} transition[y_{i-1}][y_i]
//
// where F(x, i) is the fixed feature template below. There are no start or
// stop transitions; the BOS/EOS state features play that role.

#ifndef AAETAG_CRF_H_
#define AAETAG_CRF_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aaetag/corpus.h"
#include "aaetag/tagset.h"

namespace aaetag {

// Binary features firing at one position, in template order:
//   w[0]=<lower>  p1= p2= p3=  s1= s2= s3=  is_upper is_title is_digit
//   w[-1]=<lower> | BOS   w[+1]=<lower> | EOS
// Affixes are taken over codepoints of the lowercased token and only emitted
// when the token is at least that long. Shape flags are emitted only when
// they hold.
struct FeatureVector {
  std::vector<std::string> names;
};

FeatureVector ExtractFeatures(const std::vector<std::string>& tokens,
                              size_t position);
FeatureVector ExtractFeatures(const TaggedSentence& sentence, size_t position);

class CrfModel {
 public:
  CrfModel() = default;
  explicit CrfModel(TagSet tagset, double l1 = 0.25, double l2 = 0.3);

  const TagSet& tagset() const { return tagset_; }
  int num_tags() const { return tagset_.size(); }
  size_t num_features() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

  // -1 for a feature never seen in training.
  int FeatureId(std::string_view name) const;
  // Returns the existing id when already present.
  int AddFeature(const std::string& name);

  double transition(TagId from, TagId to) const {
    return weights_[static_cast<size_t>(from) * num_tags() + to];
  }
  double& transition(TagId from, TagId to) {
    return weights_[static_cast<size_t>(from) * num_tags() + to];
  }
  double state(int feature, TagId tag) const {
    return weights_[StateOffset(feature) + tag];
  }
  double& state(int feature, TagId tag) {
    return weights_[StateOffset(feature) + tag];
  }

  // Flat parameter vector: T*T transitions (row = from) then F*T state
  // weights (row = feature).
  std::span<const double> weights() const { return weights_; }
  std::span<double> weights() { return weights_; }
  size_t num_weights() const { return weights_.size(); }

  double l1() const { return l1_; }
  double l2() const { return l2_; }
  void set_regularization(double l1, double l2);

 private:
  size_t StateOffset(int feature) const {
    return static_cast<size_t>(num_tags()) * num_tags() +
           static_cast<size_t>(feature) * num_tags();
  }

  TagSet tagset_;
  double l1_ = 0.25;
  double l2_ = 0.3;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, int> feature_index_;
  std::vector<double> weights_;
};

// log Z(x) by the forward recursion in log space.
double LogPartition(const CrfModel& model, const TaggedSentence& sentence);

// Unnormalized score of a given tag path.
double PathScore(const CrfModel& model, const TaggedSentence& sentence,
                 const std::vector<TagId>& path);

struct ViterbiResult {
  std::vector<TagId> path;
  double score = 0.0;
};

// Maximum-score path. Among equal-score paths the one chosen is smallest when
// compared from the last position backwards (lower tag index wins).
ViterbiResult Viterbi(const CrfModel& model, const TaggedSentence& sentence);

struct NllResult {
  double loss = 0.0;
  std::vector<double> gradient;  // same layout as CrfModel::weights()
};

// Sum over sentences of log Z - score(gold) plus l2 * |w|^2, and its gradient.
// The L1 term is left to the optimizer.
NllResult NllAndGradient(const CrfModel& model, const Corpus& batch);

// sign(v) * max(0, |v| - threshold).
double SoftThreshold(double v, double threshold);

struct CrfTrainConfig {
  double l1 = 0.25;
  double l2 = 0.3;
  int epochs = 100;
  // Initial proximal step; halved on a failed sufficient-decrease test and
  // grown by 25% after each accepted one.
  double step_size = 0.01;
  uint64_t seed = 0;
};

// Full-batch proximal gradient descent from zero weights. When `trace` is
// given, it receives the full objective (NLL + l2 + l1 terms) at the start
// and after every epoch. The feature dictionary holds every template
// feature seen in `corpus`; the transition matrix is always T x T.
CrfModel TrainCrf(const Corpus& corpus, const CrfTrainConfig& config = {},
                  std::vector<double>* trace = nullptr);

// Fills pred_tags with the Viterbi path; gold tags are untouched.
Corpus PredictCrf(const CrfModel& model, const Corpus& corpus);

struct Transition {
  TagId from = 0;
  TagId to = 0;
  double weight = 0.0;
};

struct TransitionReport {
  // All T*T transitions, highest weight first.
  std::vector<Transition> ranked;
  // k highest, descending.
  std::vector<Transition> likely;
  // k lowest, ascending.
  std::vector<Transition> unlikely;
};

TransitionReport TopTransitions(const CrfModel& model, int k);

// Two-column "FROM -> TO<TAB>weight" listing with 3-decimal weights.
std::string FormatTransitionReport(const CrfModel& model,
                                   const TransitionReport& report);

}  // namespace aaetag

#endif  // AAETAG_CRF_H_
