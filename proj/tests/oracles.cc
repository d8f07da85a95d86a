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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aaetag::testing {
namespace {

// Calls fn(path) for every path of length n over T tags.
template <typename Fn>
void ForEachPath(size_t n, int T, Fn fn) {
  std::vector<TagId> path(n, 0);
  while (true) {
    fn(path);
    size_t i = 0;
    while (i < n && ++path[i] == T) path[i++] = 0;
    if (i == n) return;
  }
}

bool PreferredOnTie(const std::vector<TagId>& a, const std::vector<TagId>& b) {
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

double Relative(double a, double b, double floor) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

// Central differences at `step` and `step / 2` combined so their h^2 error
// terms cancel. The remaining error is O(h^4), which lets a fairly large
// step keep cancellation noise in the loss far below the gradient.
template <typename LossAt>
double ExtrapolatedDerivative(const LossAt& loss_at, double w, double step) {
  auto central = [&](double h) {
    return (loss_at(w + h) - loss_at(w - h)) / (2.0 * h);
  };
  return (4.0 * central(step / 2.0) - central(step)) / 3.0;
}

}  // namespace

double OraclePathScore(const CrfModel& model,
                       const std::vector<std::string>& tokens,
                       const std::vector<TagId>& path) {
  double score = 0.0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& name : ExtractFeatures(tokens, i).names) {
      const int f = model.FeatureId(name);
      if (f >= 0) score += model.state(f, path[i]);
    }
    if (i > 0) score += model.transition(path[i - 1], path[i]);
  }
  return score;
}

double BruteForceLogPartition(const CrfModel& model,
                              const std::vector<std::string>& tokens) {
  std::vector<double> scores;
  ForEachPath(tokens.size(), model.num_tags(), [&](const auto& path) {
    scores.push_back(OraclePathScore(model, tokens, path));
  });
  const double max = *std::max_element(scores.begin(), scores.end());
  long double sum = 0.0L;
  for (double s : scores) sum += std::exp(static_cast<long double>(s - max));
  return max + static_cast<double>(std::log(sum));
}

BruteForceBest BruteForceViterbi(const CrfModel& model,
                                 const std::vector<std::string>& tokens) {
  BruteForceBest best;
  best.score = -std::numeric_limits<double>::infinity();
  ForEachPath(tokens.size(), model.num_tags(), [&](const auto& path) {
    const double s = OraclePathScore(model, tokens, path);
    if (s > best.score || (s == best.score && PreferredOnTie(path, best.path))) {
      best.score = s;
      best.path = path;
    }
  });
  return best;
}

RandomCrfCase MakeRandomCrfCase(std::mt19937_64& rng, int max_tokens,
                                int max_tags, bool integer_weights) {
  static const std::vector<std::string> kWords = {
      "the", "dog", "Runs", "fast", "da", "cat", "I", "42", "HEY", "u"};
  std::uniform_int_distribution<int> len(1, max_tokens);
  std::uniform_int_distribution<int> tags(2, max_tags);
  std::uniform_int_distribution<size_t> word(0, kWords.size() - 1);
  std::uniform_real_distribution<double> real(-2.0, 2.0);
  std::uniform_int_distribution<int> whole(-2, 2);
  auto draw = [&] {
    return integer_weights ? static_cast<double>(whole(rng)) : real(rng);
  };

  const int T = tags(rng);
  std::vector<std::string> names;
  for (int t = 0; t < T; ++t) names.push_back("T" + std::to_string(t));
  RandomCrfCase c{CrfModel(TagSet(names)), {}};

  const int n = len(rng);
  for (int i = 0; i < n; ++i) c.sentence.tokens.push_back(kWords[word(rng)]);
  c.sentence.gold_tags.emplace();
  std::uniform_int_distribution<int> tag(0, T - 1);
  for (int i = 0; i < n; ++i) c.sentence.gold_tags->push_back(names[tag(rng)]);

  for (int i = 0; i < n; ++i) {
    for (const auto& f : ExtractFeatures(c.sentence.tokens, i).names) {
      c.model.AddFeature(f);
    }
  }
  for (double& w : c.model.weights()) w = draw();
  return c;
}

GradientCheck CheckCrfGradient(const CrfModel& model, const Corpus& batch,
                               double step, double floor) {
  const NllResult analytic = NllAndGradient(model, batch);
  GradientCheck check;
  CrfModel probe = model;
  for (size_t k = 0; k < probe.num_weights(); ++k) {
    const double w = probe.weights()[k];
    const double numeric = ExtrapolatedDerivative(
        [&](double v) {
          probe.weights()[k] = v;
          return NllAndGradient(probe, batch).loss;
        },
        w, step);
    probe.weights()[k] = w;
    check.max_relative_error =
        std::max(check.max_relative_error,
                 Relative(numeric, analytic.gradient[k], floor));
    ++check.checked;
  }
  return check;
}

GradientCheck CheckBiLstmGradient(const BiLstmModel& model,
                                  const TaggedSentence& sentence, double step,
                                  double floor) {
  const BiLstmLoss analytic = LossAndGradients(model, sentence);
  GradientCheck check;
  BiLstmModel probe = model;
  const auto tensors = probe.params().tensors();
  const auto grads = analytic.gradients.tensors();
  for (size_t t = 0; t < tensors.size(); ++t) {
    Eigen::MatrixXd& m = *tensors[t];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double w = m(i, j);
        const double numeric = ExtrapolatedDerivative(
            [&](double v) {
              m(i, j) = v;
              return LossAndGradients(probe, sentence).loss;
            },
            w, step);
        m(i, j) = w;
        check.max_relative_error = std::max(
            check.max_relative_error, Relative(numeric, (*grads[t])(i, j), floor));
        ++check.checked;
      }
    }
  }
  return check;
}

double DirectAlpha(const AgreementTable& table) {
  std::vector<std::vector<std::string>> units;
  for (const auto& item : table.items()) {
    const auto& row = table.labels().at(item);
    if (row.size() < 2) continue;
    std::vector<std::string> values;
    for (const auto& [annotator, label] : row) values.push_back(label);
    units.push_back(std::move(values));
  }
  std::vector<std::string> all;
  double observed = 0.0;
  for (const auto& u : units) {
    double mismatches = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
      for (size_t j = 0; j < u.size(); ++j) {
        if (i != j && u[i] != u[j]) mismatches += 1.0;
      }
    }
    observed += mismatches / static_cast<double>(u.size() - 1);
    all.insert(all.end(), u.begin(), u.end());
  }
  const double n = static_cast<double>(all.size());
  observed /= n;
  double expected = 0.0;
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = 0; j < all.size(); ++j) {
      if (i != j && all[i] != all[j]) expected += 1.0;
    }
  }
  expected /= n * (n - 1.0);
  if (expected == 0.0) return 1.0;
  return 1.0 - observed / expected;
}

}  // namespace aaetag::testing
