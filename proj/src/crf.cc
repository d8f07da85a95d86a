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

#include "aaetag/crf.h"

#include <unicode/uchar.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "aaetag/error.h"
#include "aaetag/preprocess.h"

namespace aaetag {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(const double* values, int n) {
  double max = kNegInf;
  for (int i = 0; i < n; ++i) max = std::max(max, values[i]);
  if (max == kNegInf) return kNegInf;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::exp(values[i] - max);
  return max + std::log(sum);
}

bool IsUpperToken(const std::u32string& cps) {
  bool any_letter = false;
  for (char32_t c : cps) {
    if (u_isalpha(static_cast<UChar32>(c))) {
      any_letter = true;
      if (!u_isupper(static_cast<UChar32>(c))) return false;
    }
  }
  return any_letter;
}

bool IsTitleToken(const std::u32string& cps) {
  if (cps.empty() || !u_isupper(static_cast<UChar32>(cps[0]))) return false;
  for (size_t i = 1; i < cps.size(); ++i) {
    if (u_isupper(static_cast<UChar32>(cps[i]))) return false;
  }
  return true;
}

bool IsDigitToken(const std::u32string& cps) {
  if (cps.empty()) return false;
  for (char32_t c : cps) {
    if (!u_isdigit(static_cast<UChar32>(c))) return false;
  }
  return true;
}

// Feature ids per position (unknown features dropped) and gold tag ids.
struct CompiledSentence {
  std::vector<std::vector<int>> features;
  std::vector<TagId> gold;
};

CompiledSentence Compile(const CrfModel& model,
                         const std::vector<std::string>& tokens) {
  CompiledSentence out;
  out.features.resize(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& name : ExtractFeatures(tokens, i).names) {
      int id = model.FeatureId(name);
      if (id >= 0) out.features[i].push_back(id);
    }
  }
  return out;
}

CompiledSentence CompileGold(const CrfModel& model,
                             const TaggedSentence& sentence) {
  if (!sentence.gold_tags) {
    throw Error("sentence " + sentence.source_id + " has no gold tags");
  }
  CompiledSentence out = Compile(model, sentence.tokens);
  for (const auto& tag : *sentence.gold_tags) {
    out.gold.push_back(model.tagset().Id(tag));
  }
  return out;
}

// n x T state scores, row-major.
std::vector<double> Emissions(const CrfModel& model,
                              const CompiledSentence& s) {
  const int T = model.num_tags();
  std::vector<double> e(s.features.size() * T, 0.0);
  for (size_t i = 0; i < s.features.size(); ++i) {
    double* row = &e[i * T];
    for (int f : s.features[i]) {
      for (int y = 0; y < T; ++y) row[y] += model.state(f, y);
    }
  }
  return e;
}

std::vector<double> ForwardLattice(const CrfModel& model,
                                   const std::vector<double>& e, size_t n) {
  const int T = model.num_tags();
  std::vector<double> alpha(n * T);
  std::vector<double> scratch(T);
  for (int y = 0; y < T; ++y) alpha[y] = e[y];
  for (size_t i = 1; i < n; ++i) {
    for (int y = 0; y < T; ++y) {
      for (int p = 0; p < T; ++p) {
        scratch[p] = alpha[(i - 1) * T + p] + model.transition(p, y);
      }
      alpha[i * T + y] = e[i * T + y] + LogSumExp(scratch.data(), T);
    }
  }
  return alpha;
}

std::vector<double> BackwardLattice(const CrfModel& model,
                                    const std::vector<double>& e, size_t n) {
  const int T = model.num_tags();
  std::vector<double> beta(n * T, 0.0);
  std::vector<double> scratch(T);
  for (size_t i = n - 1; i-- > 0;) {
    for (int y = 0; y < T; ++y) {
      for (int q = 0; q < T; ++q) {
        scratch[q] =
            model.transition(y, q) + e[(i + 1) * T + q] + beta[(i + 1) * T + q];
      }
      beta[i * T + y] = LogSumExp(scratch.data(), T);
    }
  }
  return beta;
}

double GoldScore(const CrfModel& model, const std::vector<double>& e,
                 const std::vector<TagId>& path) {
  const int T = model.num_tags();
  double score = 0.0;
  for (size_t i = 0; i < path.size(); ++i) {
    score += e[i * T + path[i]];
    if (i > 0) score += model.transition(path[i - 1], path[i]);
  }
  return score;
}

// Adds the sentence's NLL to the return value and its gradient to `grad`.
double AccumulateSentence(const CrfModel& model, const CompiledSentence& s,
                          std::vector<double>& grad) {
  const int T = model.num_tags();
  const size_t n = s.features.size();
  const auto e = Emissions(model, s);
  const auto alpha = ForwardLattice(model, e, n);
  const auto beta = BackwardLattice(model, e, n);
  const double log_z = LogSumExp(&alpha[(n - 1) * T], T);

  const size_t state_base = static_cast<size_t>(T) * T;
  std::vector<double> marginal(T);
  for (size_t i = 0; i < n; ++i) {
    for (int y = 0; y < T; ++y) {
      marginal[y] = std::exp(alpha[i * T + y] + beta[i * T + y] - log_z);
    }
    marginal[s.gold[i]] -= 1.0;
    for (int f : s.features[i]) {
      double* g = &grad[state_base + static_cast<size_t>(f) * T];
      for (int y = 0; y < T; ++y) g[y] += marginal[y];
    }
    if (i == 0) continue;
    for (int p = 0; p < T; ++p) {
      const double a = alpha[(i - 1) * T + p] - log_z;
      for (int y = 0; y < T; ++y) {
        grad[static_cast<size_t>(p) * T + y] +=
            std::exp(a + model.transition(p, y) + e[i * T + y] +
                     beta[i * T + y]);
      }
    }
    grad[static_cast<size_t>(s.gold[i - 1]) * T + s.gold[i]] -= 1.0;
  }
  return log_z - GoldScore(model, e, s.gold);
}

// Smooth part of the objective over precompiled sentences.
double SmoothObjective(const CrfModel& model,
                       const std::vector<CompiledSentence>& batch,
                       std::vector<double>& grad) {
  const auto w = model.weights();
  grad.assign(w.size(), 0.0);
  double loss = 0.0;
  for (const auto& s : batch) {
    if (!s.features.empty()) loss += AccumulateSentence(model, s, grad);
  }
  const double l2 = model.l2();
  for (size_t j = 0; j < w.size(); ++j) {
    loss += l2 * w[j] * w[j];
    grad[j] += 2.0 * l2 * w[j];
  }
  return loss;
}

double L1Norm(std::span<const double> w) {
  double sum = 0.0;
  for (double v : w) sum += std::abs(v);
  return sum;
}

std::string FormatTransition(const CrfModel& model, const Transition& t) {
  char weight[32];
  std::snprintf(weight, sizeof(weight), "%.3f", t.weight);
  return model.tagset().Name(t.from) + " -> " + model.tagset().Name(t.to) +
         "\t" + weight;
}

}  // namespace

FeatureVector ExtractFeatures(const std::vector<std::string>& tokens,
                              size_t position) {
  if (position >= tokens.size()) {
    throw Error("feature position " + std::to_string(position) +
                " out of range for " + std::to_string(tokens.size()) +
                " tokens");
  }
  FeatureVector fv;
  const std::string& token = tokens[position];
  const std::u32string original = DecodeUtf8(token);
  const std::string lower = LowercaseUtf8(token);
  const std::u32string cps = DecodeUtf8(lower);

  fv.names.push_back("w[0]=" + lower);
  for (size_t k = 1; k <= 3 && k <= cps.size(); ++k) {
    fv.names.push_back("p" + std::to_string(k) + "=" +
                       EncodeUtf8(cps.substr(0, k)));
  }
  for (size_t k = 1; k <= 3 && k <= cps.size(); ++k) {
    fv.names.push_back("s" + std::to_string(k) + "=" +
                       EncodeUtf8(cps.substr(cps.size() - k)));
  }
  if (IsUpperToken(original)) fv.names.emplace_back("is_upper");
  if (IsTitleToken(original)) fv.names.emplace_back("is_title");
  if (IsDigitToken(original)) fv.names.emplace_back("is_digit");
  if (position == 0) {
    fv.names.emplace_back("BOS");
  } else {
    fv.names.push_back("w[-1]=" + LowercaseUtf8(tokens[position - 1]));
  }
  if (position + 1 == tokens.size()) {
    fv.names.emplace_back("EOS");
  } else {
    fv.names.push_back("w[+1]=" + LowercaseUtf8(tokens[position + 1]));
  }
  return fv;
}

FeatureVector ExtractFeatures(const TaggedSentence& sentence,
                              size_t position) {
  return ExtractFeatures(sentence.tokens, position);
}

CrfModel::CrfModel(TagSet tagset, double l1, double l2)
    : tagset_(std::move(tagset)) {
  set_regularization(l1, l2);
  weights_.assign(static_cast<size_t>(num_tags()) * num_tags(), 0.0);
}

void CrfModel::set_regularization(double l1, double l2) {
  if (!(l1 >= 0.0) || !(l2 >= 0.0)) {
    throw Error("regularization strengths must be non-negative");
  }
  l1_ = l1;
  l2_ = l2;
}

int CrfModel::FeatureId(std::string_view name) const {
  auto it = feature_index_.find(std::string(name));
  return it == feature_index_.end() ? -1 : it->second;
}

int CrfModel::AddFeature(const std::string& name) {
  auto [it, inserted] =
      feature_index_.emplace(name, static_cast<int>(feature_names_.size()));
  if (inserted) {
    feature_names_.push_back(name);
    weights_.resize(weights_.size() + num_tags(), 0.0);
  }
  return it->second;
}

double LogPartition(const CrfModel& model, const TaggedSentence& sentence) {
  if (sentence.tokens.empty()) throw Error("empty sentence");
  const auto s = Compile(model, sentence.tokens);
  const auto e = Emissions(model, s);
  const auto alpha = ForwardLattice(model, e, s.features.size());
  return LogSumExp(&alpha[(s.features.size() - 1) * model.num_tags()],
                   model.num_tags());
}

double PathScore(const CrfModel& model, const TaggedSentence& sentence,
                 const std::vector<TagId>& path) {
  if (path.size() != sentence.tokens.size()) {
    throw Error("path length does not match sentence length");
  }
  const auto s = Compile(model, sentence.tokens);
  return GoldScore(model, Emissions(model, s), path);
}

ViterbiResult Viterbi(const CrfModel& model, const TaggedSentence& sentence) {
  if (sentence.tokens.empty()) throw Error("empty sentence");
  const int T = model.num_tags();
  const auto s = Compile(model, sentence.tokens);
  const auto e = Emissions(model, s);
  const size_t n = s.features.size();

  std::vector<double> delta(n * T);
  std::vector<TagId> back(n * T, 0);
  for (int y = 0; y < T; ++y) delta[y] = e[y];
  for (size_t i = 1; i < n; ++i) {
    for (int y = 0; y < T; ++y) {
      double best = kNegInf;
      TagId arg = 0;
      for (int p = 0; p < T; ++p) {
        double v = delta[(i - 1) * T + p] + model.transition(p, y);
        if (v > best) {
          best = v;
          arg = p;
        }
      }
      delta[i * T + y] = best + e[i * T + y];
      back[i * T + y] = arg;
    }
  }
  ViterbiResult result;
  result.path.resize(n);
  double best = kNegInf;
  for (int y = 0; y < T; ++y) {
    if (delta[(n - 1) * T + y] > best) {
      best = delta[(n - 1) * T + y];
      result.path[n - 1] = y;
    }
  }
  result.score = best;
  for (size_t i = n - 1; i > 0; --i) {
    result.path[i - 1] = back[i * T + result.path[i]];
  }
  return result;
}

NllResult NllAndGradient(const CrfModel& model, const Corpus& batch) {
  std::vector<CompiledSentence> compiled;
  compiled.reserve(batch.size());
  for (const auto& sentence : batch) {
    compiled.push_back(CompileGold(model, sentence));
  }
  NllResult result;
  result.loss = SmoothObjective(model, compiled, result.gradient);
  return result;
}

double SoftThreshold(double v, double threshold) {
  if (v > threshold) return v - threshold;
  if (v < -threshold) return v + threshold;
  return 0.0;
}

CrfModel TrainCrf(const Corpus& corpus, const CrfTrainConfig& config,
                  std::vector<double>* trace) {
  if (corpus.empty()) throw Error("cannot train on an empty corpus");
  if (!corpus.fully_tagged()) throw Error("training corpus is not gold-tagged");
  if (!(config.step_size > 0.0)) throw Error("step size must be positive");

  CrfModel model(corpus.tagset(), config.l1, config.l2);
  for (const auto& sentence : corpus) {
    for (size_t i = 0; i < sentence.size(); ++i) {
      for (const auto& name : ExtractFeatures(sentence.tokens, i).names) {
        model.AddFeature(name);
      }
    }
  }
  std::vector<CompiledSentence> compiled;
  compiled.reserve(corpus.size());
  for (const auto& sentence : corpus) {
    compiled.push_back(CompileGold(model, sentence));
  }

  auto w = model.weights();
  const size_t dim = w.size();
  std::vector<double> grad;
  double smooth = SmoothObjective(model, compiled, grad);
  double objective = smooth + config.l1 * L1Norm(w);
  if (trace) trace->push_back(objective);

  std::vector<double> current(w.begin(), w.end());
  std::vector<double> next_grad;
  double step = config.step_size;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      double linear = 0.0;
      double sq = 0.0;
      for (size_t j = 0; j < dim; ++j) {
        w[j] = SoftThreshold(current[j] - step * grad[j], step * config.l1);
        const double d = w[j] - current[j];
        linear += grad[j] * d;
        sq += d * d;
      }
      const double next_smooth = SmoothObjective(model, compiled, next_grad);
      const double next_objective = next_smooth + config.l1 * L1Norm(w);
      if (next_smooth <= smooth + linear + sq / (2.0 * step) &&
          next_objective <= objective) {
        accepted = true;
        smooth = next_smooth;
        objective = next_objective;
        grad.swap(next_grad);
        current.assign(w.begin(), w.end());
        step *= 1.25;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) {
      std::copy(current.begin(), current.end(), w.begin());
      break;
    }
    if (trace) trace->push_back(objective);
  }
  return model;
}

Corpus PredictCrf(const CrfModel& model, const Corpus& corpus) {
  Corpus out(corpus.tagset());
  for (TaggedSentence sentence : corpus) {
    const auto result = Viterbi(model, sentence);
    std::vector<std::string> tags;
    tags.reserve(result.path.size());
    for (TagId id : result.path) tags.push_back(model.tagset().Name(id));
    sentence.pred_tags = std::move(tags);
    out.Add(std::move(sentence));
  }
  return out;
}

TransitionReport TopTransitions(const CrfModel& model, int k) {
  const int T = model.num_tags();
  if (k < 1 || k > T * T) {
    throw Error("k must lie in [1, " + std::to_string(T * T) + "]");
  }
  TransitionReport report;
  for (TagId from = 0; from < T; ++from) {
    for (TagId to = 0; to < T; ++to) {
      report.ranked.push_back({from, to, model.transition(from, to)});
    }
  }
  std::stable_sort(report.ranked.begin(), report.ranked.end(),
                   [](const Transition& a, const Transition& b) {
                     return a.weight > b.weight;
                   });
  report.likely.assign(report.ranked.begin(), report.ranked.begin() + k);
  report.unlikely.assign(report.ranked.rbegin(), report.ranked.rbegin() + k);
  return report;
}

std::string FormatTransitionReport(const CrfModel& model,
                                   const TransitionReport& report) {
  std::ostringstream out;
  out << "Likely transitions\tWeight\n";
  for (const auto& t : report.likely) out << FormatTransition(model, t) << '\n';
  out << "\nUnlikely transitions\tWeight\n";
  for (const auto& t : report.unlikely) {
    out << FormatTransition(model, t) << '\n';
  }
  return out.str();
}

}  // namespace aaetag
