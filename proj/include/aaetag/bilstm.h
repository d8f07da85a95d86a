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
// Bidirectional LSTM tagger with softmax output, trained by per-sentence Adam.
//
// For one direction with input x_t and previous state (h, c):
//
//   a = W^T [x_t; h] + b        W is (E+H) x 4H, gate blocks i | f | o | g
//   i, f, o = sigmoid(a_i), sigmoid(a_f), sigmoid(a_o);  g = tanh(a_g)
//   c' = f * c + i * g;   h' = o * tanh(c')
//
// The right-to-left cell reads the sentence reversed. The per-token output is
// softmax(out_w^T [h_fwd; h_bwd] + out_b).

#ifndef AAETAG_BILSTM_H_
#define AAETAG_BILSTM_H_

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aaetag/corpus.h"
#include "aaetag/tagset.h"

namespace aaetag {

inline constexpr std::string_view kUnknownToken = "<unk>";

class Vocabulary {
 public:
  // Index 0 is always the unknown token.
  Vocabulary();
  explicit Vocabulary(const std::vector<std::string>& words);

  // Every token of `corpus` (min count 1).
  static Vocabulary Build(const Corpus& corpus);

  int Index(std::string_view token) const;  // 0 when unknown
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  int Insert(const std::string& word);

  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// All trainable tensors. Vectors are stored as single-column matrices so the
// optimizer and gradient checks can treat every tensor alike.
struct BiLstmParams {
  Eigen::MatrixXd embed;   // V x E
  Eigen::MatrixXd fwd_w;   // (E+H) x 4H
  Eigen::MatrixXd fwd_b;   // 4H x 1
  Eigen::MatrixXd bwd_w;   // (E+H) x 4H
  Eigen::MatrixXd bwd_b;   // 4H x 1
  Eigen::MatrixXd out_w;   // 2H x T
  Eigen::MatrixXd out_b;   // T x 1

  static constexpr size_t kNumTensors = 7;
  std::array<Eigen::MatrixXd*, kNumTensors> tensors();
  std::array<const Eigen::MatrixXd*, kNumTensors> tensors() const;
  static const std::array<std::string_view, kNumTensors>& TensorNames();

  // Same shapes, all zeros.
  BiLstmParams ZerosLike() const;
  bool AllFinite() const;
};

struct BiLstmDims {
  int embed = 32;
  int hidden = 32;
};

class BiLstmModel {
 public:
  BiLstmModel() = default;
  BiLstmModel(TagSet tagset, Vocabulary vocab, BiLstmDims dims);

  // Uniform(-scale, scale) over every tensor, deterministic in `seed`.
  void InitializeUniform(uint64_t seed, double scale = 0.1);

  const TagSet& tagset() const { return tagset_; }
  const Vocabulary& vocab() const { return vocab_; }
  const BiLstmDims& dims() const { return dims_; }
  int num_tags() const { return tagset_.size(); }

  BiLstmParams& params() { return params_; }
  const BiLstmParams& params() const { return params_; }

 private:
  TagSet tagset_;
  Vocabulary vocab_;
  BiLstmDims dims_;
  BiLstmParams params_;
};

// 2H x n concatenated hidden states ([h_fwd; h_bwd] per column).
Eigen::MatrixXd HiddenStates(const BiLstmModel& model,
                             const std::vector<std::string>& tokens);

// n x T per-token tag distributions.
Eigen::MatrixXd Forward(const BiLstmModel& model,
                        const std::vector<std::string>& tokens);

struct BiLstmLoss {
  double loss = 0.0;  // mean token cross-entropy
  BiLstmParams gradients;
};

BiLstmLoss LossAndGradients(const BiLstmModel& model,
                            const TaggedSentence& sentence);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState(const BiLstmParams& like, AdamConfig config = {});

  // One bias-corrected update of `params` against `grads`.
  void Step(BiLstmParams& params, const BiLstmParams& grads);
  int64_t step_count() const { return step_; }
  const BiLstmParams& first_moment() const { return m_; }
  const BiLstmParams& second_moment() const { return v_; }

 private:
  AdamConfig config_;
  BiLstmParams m_;
  BiLstmParams v_;
  int64_t step_ = 0;
};

struct BiLstmTrainConfig {
  int epochs = 40;
  double learning_rate = 0.001;
  uint64_t seed = 0;
  BiLstmDims dims;
};

// Sentences are visited in a fresh seeded order each epoch.
BiLstmModel TrainBiLstm(const Corpus& corpus,
                        const BiLstmTrainConfig& config = {});

// Per-token argmax; ties go to the lower tag index.
Corpus PredictBiLstm(const BiLstmModel& model, const Corpus& corpus);

}  // namespace aaetag

#endif  // AAETAG_BILSTM_H_
