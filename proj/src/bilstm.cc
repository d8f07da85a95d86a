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

#include "aaetag/bilstm.h"

#include <cmath>
#include <random>

#include "aaetag/corpus.h"
#include "aaetag/error.h"

namespace aaetag {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Activations of one direction, indexed by processing step.
struct DirectionCache {
  MatrixXd z;      // (E+H) x n   input to the gates
  MatrixXd gates;  // 4H x n      activated i | f | o | g
  MatrixXd c;      // H x n
  MatrixXd tanh_c; // H x n
  MatrixXd h;      // H x n
};

DirectionCache RunDirection(const MatrixXd& w, const MatrixXd& b,
                            const MatrixXd& inputs, int hidden) {
  const int n = static_cast<int>(inputs.cols());
  const int e = static_cast<int>(inputs.rows());
  const int H = hidden;
  DirectionCache cache;
  cache.z.resize(e + H, n);
  cache.gates.resize(4 * H, n);
  cache.c.resize(H, n);
  cache.tanh_c.resize(H, n);
  cache.h.resize(H, n);
  VectorXd h_prev = VectorXd::Zero(H);
  VectorXd c_prev = VectorXd::Zero(H);
  for (int t = 0; t < n; ++t) {
    cache.z.col(t).head(e) = inputs.col(t);
    cache.z.col(t).tail(H) = h_prev;
    VectorXd a = w.transpose() * cache.z.col(t) + b.col(0);
    for (int k = 0; k < 3 * H; ++k) a(k) = Sigmoid(a(k));
    for (int k = 3 * H; k < 4 * H; ++k) a(k) = std::tanh(a(k));
    cache.gates.col(t) = a;
    VectorXd c = a.segment(H, H).cwiseProduct(c_prev) +
                 a.segment(0, H).cwiseProduct(a.segment(3 * H, H));
    VectorXd tc = c.array().tanh().matrix();
    VectorXd h = a.segment(2 * H, H).cwiseProduct(tc);
    cache.c.col(t) = c;
    cache.tanh_c.col(t) = tc;
    cache.h.col(t) = h;
    h_prev = h;
    c_prev = c;
  }
  return cache;
}

// Backpropagates d(loss)/d(h_t) for every step; accumulates into dw, db and
// returns d(loss)/d(input_t) per step.
MatrixXd BackpropDirection(const MatrixXd& w, const DirectionCache& cache,
                           const MatrixXd& dh_out, int embed, int hidden,
                           MatrixXd& dw, MatrixXd& db) {
  const int n = static_cast<int>(cache.h.cols());
  const int H = hidden;
  MatrixXd dx(embed, n);
  VectorXd dh_next = VectorXd::Zero(H);
  VectorXd dc_next = VectorXd::Zero(H);
  VectorXd da(4 * H);
  for (int t = n - 1; t >= 0; --t) {
    const auto gates = cache.gates.col(t);
    const auto i = gates.segment(0, H);
    const auto f = gates.segment(H, H);
    const auto o = gates.segment(2 * H, H);
    const auto g = gates.segment(3 * H, H);
    const auto tc = cache.tanh_c.col(t);
    VectorXd c_prev = t > 0 ? VectorXd(cache.c.col(t - 1)) : VectorXd::Zero(H);

    VectorXd dh = dh_out.col(t) + dh_next;
    VectorXd d_o = dh.cwiseProduct(tc);
    VectorXd dc = dc_next + dh.cwiseProduct(o).cwiseProduct(
                                (1.0 - tc.array().square()).matrix());
    VectorXd d_i = dc.cwiseProduct(g);
    VectorXd d_g = dc.cwiseProduct(i);
    VectorXd d_f = dc.cwiseProduct(c_prev);
    dc_next = dc.cwiseProduct(f);

    da.segment(0, H) = d_i.array() * i.array() * (1.0 - i.array());
    da.segment(H, H) = d_f.array() * f.array() * (1.0 - f.array());
    da.segment(2 * H, H) = d_o.array() * o.array() * (1.0 - o.array());
    da.segment(3 * H, H) = d_g.array() * (1.0 - g.array().square());

    dw.noalias() += cache.z.col(t) * da.transpose();
    db.col(0) += da;
    VectorXd dz = w * da;
    dx.col(t) = dz.head(embed);
    dh_next = dz.tail(H);
  }
  return dx;
}

struct ForwardPass {
  std::vector<int> ids;
  DirectionCache fwd;
  DirectionCache bwd;
  MatrixXd hidden;  // 2H x n by position
  MatrixXd probs;   // T x n
};

ForwardPass RunForward(const BiLstmModel& model,
                       const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw Error("empty sentence");
  const auto& p = model.params();
  const int n = static_cast<int>(tokens.size());
  const int E = model.dims().embed;
  const int H = model.dims().hidden;

  ForwardPass pass;
  MatrixXd inputs(E, n);
  MatrixXd reversed(E, n);
  for (int t = 0; t < n; ++t) {
    pass.ids.push_back(model.vocab().Index(tokens[t]));
  }
  for (int t = 0; t < n; ++t) {
    inputs.col(t) = p.embed.row(pass.ids[t]).transpose();
    reversed.col(n - 1 - t) = inputs.col(t);
  }
  pass.fwd = RunDirection(p.fwd_w, p.fwd_b, inputs, H);
  pass.bwd = RunDirection(p.bwd_w, p.bwd_b, reversed, H);

  pass.hidden.resize(2 * H, n);
  for (int t = 0; t < n; ++t) {
    pass.hidden.col(t).head(H) = pass.fwd.h.col(t);
    pass.hidden.col(t).tail(H) = pass.bwd.h.col(n - 1 - t);
  }
  MatrixXd logits = p.out_w.transpose() * pass.hidden;
  logits.colwise() += p.out_b.col(0);
  pass.probs.resize(logits.rows(), n);
  for (int t = 0; t < n; ++t) {
    const double max = logits.col(t).maxCoeff();
    VectorXd ex = (logits.col(t).array() - max).exp().matrix();
    pass.probs.col(t) = ex / ex.sum();
  }
  return pass;
}

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Vocabulary::Vocabulary() { Insert(std::string(kUnknownToken)); }

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  if (words.empty() || words[0] != kUnknownToken) {
    throw Error("vocabulary must start with the unknown token");
  }
  for (const auto& w : words) {
    const size_t before = words_.size();
    Insert(w);
    if (words_.size() == before) {
      throw Error("duplicate vocabulary entry \"" + w + "\"");
    }
  }
}

Vocabulary Vocabulary::Build(const Corpus& corpus) {
  Vocabulary vocab;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) vocab.Insert(token);
  }
  return vocab;
}

int Vocabulary::Insert(const std::string& word) {
  auto [it, inserted] = index_.emplace(word, static_cast<int>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

int Vocabulary::Index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? 0 : it->second;
}

std::array<MatrixXd*, BiLstmParams::kNumTensors> BiLstmParams::tensors() {
  return {&embed, &fwd_w, &fwd_b, &bwd_w, &bwd_b, &out_w, &out_b};
}

std::array<const MatrixXd*, BiLstmParams::kNumTensors> BiLstmParams::tensors()
    const {
  return {&embed, &fwd_w, &fwd_b, &bwd_w, &bwd_b, &out_w, &out_b};
}

const std::array<std::string_view, BiLstmParams::kNumTensors>&
BiLstmParams::TensorNames() {
  static const std::array<std::string_view, kNumTensors> kNames = {
      "embed", "fwd_w", "fwd_b", "bwd_w", "bwd_b", "out_w", "out_b"};
  return kNames;
}

BiLstmParams BiLstmParams::ZerosLike() const {
  BiLstmParams zeros;
  auto src = tensors();
  auto dst = zeros.tensors();
  for (size_t k = 0; k < kNumTensors; ++k) {
    *dst[k] = MatrixXd::Zero(src[k]->rows(), src[k]->cols());
  }
  return zeros;
}

bool BiLstmParams::AllFinite() const {
  for (const auto* t : tensors()) {
    if (!t->allFinite()) return false;
  }
  return true;
}

BiLstmModel::BiLstmModel(TagSet tagset, Vocabulary vocab, BiLstmDims dims)
    : tagset_(std::move(tagset)), vocab_(std::move(vocab)), dims_(dims) {
  if (dims_.embed < 1 || dims_.hidden < 1) {
    throw Error("embedding and hidden sizes must be positive");
  }
  const int V = vocab_.size();
  const int E = dims_.embed;
  const int H = dims_.hidden;
  const int T = tagset_.size();
  params_.embed = MatrixXd::Zero(V, E);
  params_.fwd_w = MatrixXd::Zero(E + H, 4 * H);
  params_.fwd_b = MatrixXd::Zero(4 * H, 1);
  params_.bwd_w = MatrixXd::Zero(E + H, 4 * H);
  params_.bwd_b = MatrixXd::Zero(4 * H, 1);
  params_.out_w = MatrixXd::Zero(2 * H, T);
  params_.out_b = MatrixXd::Zero(T, 1);
}

void BiLstmModel::InitializeUniform(uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  for (auto* tensor : params_.tensors()) {
    for (Eigen::Index j = 0; j < tensor->cols(); ++j) {
      for (Eigen::Index i = 0; i < tensor->rows(); ++i) {
        (*tensor)(i, j) = (2.0 * Uniform01(rng) - 1.0) * scale;
      }
    }
  }
}

Eigen::MatrixXd HiddenStates(const BiLstmModel& model,
                             const std::vector<std::string>& tokens) {
  return RunForward(model, tokens).hidden;
}

Eigen::MatrixXd Forward(const BiLstmModel& model,
                        const std::vector<std::string>& tokens) {
  return RunForward(model, tokens).probs.transpose();
}

BiLstmLoss LossAndGradients(const BiLstmModel& model,
                            const TaggedSentence& sentence) {
  if (!sentence.gold_tags) {
    throw Error("sentence " + sentence.source_id + " has no gold tags");
  }
  const auto& p = model.params();
  const int E = model.dims().embed;
  const int H = model.dims().hidden;
  const auto pass = RunForward(model, sentence.tokens);
  const int n = static_cast<int>(sentence.tokens.size());

  BiLstmLoss out;
  out.gradients = p.ZerosLike();
  auto& g = out.gradients;

  MatrixXd dlogits = pass.probs;
  for (int t = 0; t < n; ++t) {
    const TagId gold = model.tagset().Id((*sentence.gold_tags)[t]);
    out.loss -= std::log(pass.probs(gold, t));
    dlogits(gold, t) -= 1.0;
  }
  out.loss /= n;
  dlogits /= n;

  g.out_w.noalias() = pass.hidden * dlogits.transpose();
  g.out_b.col(0) = dlogits.rowwise().sum();
  MatrixXd dhidden = p.out_w * dlogits;  // 2H x n by position

  MatrixXd dh_fwd = dhidden.topRows(H);
  MatrixXd dh_bwd(H, n);
  for (int t = 0; t < n; ++t) dh_bwd.col(n - 1 - t) = dhidden.col(t).tail(H);

  MatrixXd dx_fwd =
      BackpropDirection(p.fwd_w, pass.fwd, dh_fwd, E, H, g.fwd_w, g.fwd_b);
  MatrixXd dx_bwd =
      BackpropDirection(p.bwd_w, pass.bwd, dh_bwd, E, H, g.bwd_w, g.bwd_b);
  for (int t = 0; t < n; ++t) {
    g.embed.row(pass.ids[t]) +=
        (dx_fwd.col(t) + dx_bwd.col(n - 1 - t)).transpose();
  }
  return out;
}

AdamState::AdamState(const BiLstmParams& like, AdamConfig config)
    : config_(config), m_(like.ZerosLike()), v_(like.ZerosLike()) {}

void AdamState::Step(BiLstmParams& params, const BiLstmParams& grads) {
  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  auto theta = params.tensors();
  auto grad = grads.tensors();
  auto m = m_.tensors();
  auto v = v_.tensors();
  for (size_t k = 0; k < BiLstmParams::kNumTensors; ++k) {
    *m[k] = b1 * *m[k] + (1.0 - b1) * *grad[k];
    *v[k] = b2 * *v[k] + (1.0 - b2) * grad[k]->cwiseProduct(*grad[k]);
    theta[k]->array() -=
        config_.learning_rate * (m[k]->array() / correction1) /
        ((v[k]->array() / correction2).sqrt() + config_.epsilon);
  }
}

BiLstmModel TrainBiLstm(const Corpus& corpus, const BiLstmTrainConfig& config) {
  if (corpus.empty()) throw Error("cannot train on an empty corpus");
  if (!corpus.fully_tagged()) throw Error("training corpus is not gold-tagged");
  if (config.epochs < 0) throw Error("epochs must be non-negative");
  BiLstmModel model(corpus.tagset(), Vocabulary::Build(corpus), config.dims);
  model.InitializeUniform(config.seed);
  AdamState adam(model.params(), {.learning_rate = config.learning_rate});
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = ShuffledIndices(
        corpus.size(), config.seed + 0x9E3779B97F4A7C15ULL * (epoch + 1));
    for (size_t idx : order) {
      auto step = LossAndGradients(model, corpus[idx]);
      adam.Step(model.params(), step.gradients);
    }
  }
  return model;
}

Corpus PredictBiLstm(const BiLstmModel& model, const Corpus& corpus) {
  Corpus out(corpus.tagset());
  for (TaggedSentence sentence : corpus) {
    const MatrixXd probs = Forward(model, sentence.tokens);
    std::vector<std::string> tags;
    for (Eigen::Index t = 0; t < probs.rows(); ++t) {
      Eigen::Index best = 0;
      for (Eigen::Index y = 1; y < probs.cols(); ++y) {
        if (probs(t, y) > probs(t, best)) best = y;
      }
      tags.push_back(model.tagset().Name(static_cast<TagId>(best)));
    }
    sentence.pred_tags = std::move(tags);
    out.Add(std::move(sentence));
  }
  return out;
}

}  // namespace aaetag
