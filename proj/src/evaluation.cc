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

#include "aaetag/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "aaetag/error.h"

namespace aaetag {

namespace {

double Ratio(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Derives every ratio from the raw counts already stored in `report`.
void Finalize(EvalReport& report) {
  report.absent_tags.clear();
  for (auto& [tag, s] : report.per_tag) {
    s.precision = Ratio(s.correct, s.predicted);
    s.recall = Ratio(s.correct, s.support);
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    if (s.support == 0 && s.predicted == 0) report.absent_tags.insert(tag);
  }
  report.token_accuracy = Ratio(report.correct_tokens, report.total_tokens);
}

EvalReport EmptyReport(const TagSet& tagset) {
  EvalReport report;
  report.tagset = tagset;
  for (const auto& name : tagset.names()) report.per_tag[name] = TagScore{};
  return report;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json doc;
  doc["tagset"] = tagset.names();
  doc["token_accuracy"] = token_accuracy;
  doc["correct_tokens"] = correct_tokens;
  doc["total_tokens"] = total_tokens;
  doc["absent_tags"] = std::vector<std::string>(absent_tags.begin(),
                                                absent_tags.end());
  nlohmann::json tags = nlohmann::json::object();
  for (const auto& [tag, s] : per_tag) {
    tags[tag] = {{"precision", s.precision}, {"recall", s.recall},
                 {"f1", s.f1},               {"support", s.support},
                 {"predicted", s.predicted}, {"correct", s.correct}};
  }
  doc["per_tag"] = std::move(tags);
  return doc;
}

EvalReport EvalReport::FromJson(const nlohmann::json& doc) {
  try {
    EvalReport report =
        EmptyReport(TagSet(doc.at("tagset").get<std::vector<std::string>>()));
    report.correct_tokens = doc.at("correct_tokens").get<int64_t>();
    report.total_tokens = doc.at("total_tokens").get<int64_t>();
    for (const auto& [tag, s] : doc.at("per_tag").items()) {
      if (!report.tagset.Contains(tag)) {
        throw Error("report lists tag \"" + tag + "\" outside its tagset");
      }
      auto& score = report.per_tag[tag];
      score.support = s.at("support").get<int64_t>();
      score.predicted = s.at("predicted").get<int64_t>();
      score.correct = s.at("correct").get<int64_t>();
    }
    Finalize(report);
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report document: ") + e.what());
  }
}

EvalReport Score(const Corpus& gold, const Corpus& pred) {
  if (!(gold.tagset() == pred.tagset())) throw Error("tag inventories differ");
  if (gold.size() != pred.size()) {
    throw Error("gold has " + std::to_string(gold.size()) +
                " sentences, predictions have " + std::to_string(pred.size()));
  }
  EvalReport report = EmptyReport(gold.tagset());
  for (size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    const auto& p = pred[i];
    if (g.size() != p.size()) {
      throw Error("sentence " + std::to_string(i) + " length mismatch");
    }
    if (!g.gold_tags) throw Error("gold sentence " + std::to_string(i) +
                                  " is untagged");
    if (!p.pred_tags) throw Error("sentence " + std::to_string(i) +
                                  " has no predictions");
    for (size_t t = 0; t < g.size(); ++t) {
      const auto& gt = (*g.gold_tags)[t];
      const auto& pt = (*p.pred_tags)[t];
      report.per_tag[gt].support++;
      report.per_tag[pt].predicted++;
      if (gt == pt) {
        report.per_tag[gt].correct++;
        report.correct_tokens++;
      }
      report.total_tokens++;
    }
  }
  Finalize(report);
  return report;
}

std::string FormatReport(const EvalReport& report) {
  std::ostringstream out;
  out << "Tag\tPrecision\tRecall\tF1\tSupport\n";
  for (const auto& name : report.tagset.names()) {
    const auto& s = report.per_tag.at(name);
    out << name << '\t';
    if (report.absent_tags.count(name)) {
      out << "---\t---\t---\t0\n";
      continue;
    }
    out << Fixed(s.precision, 2) << '\t' << Fixed(s.recall, 2) << '\t'
        << Fixed(s.f1, 2) << '\t' << s.support << '\n';
  }
  out << "accuracy\t" << Fixed(100.0 * report.token_accuracy, 2) << '\n';
  return out.str();
}

ReportDiff Compare(const EvalReport& a, const EvalReport& b) {
  if (!(a.tagset == b.tagset)) throw Error("reports use different tagsets");
  ReportDiff diff;
  diff.accuracy_a = a.token_accuracy;
  diff.accuracy_b = b.token_accuracy;
  diff.accuracy_delta = b.token_accuracy - a.token_accuracy;
  for (const auto& name : a.tagset.names()) {
    diff.f1_delta[name] = b.per_tag.at(name).f1 - a.per_tag.at(name).f1;
  }
  return diff;
}

std::string SignedPercent(double fraction) {
  // Round first so that -0.001% prints as +0.00.
  double points = static_cast<double>(std::llround(fraction * 10000.0)) / 100.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%+.2f", points == 0.0 ? 0.0 : points);
  return buf;
}

std::string FormatDiff(const ReportDiff& diff, const std::string& label_a,
                       const std::string& label_b) {
  std::ostringstream out;
  out << "Dataset\tAccuracy(%)\n";
  out << label_a << '\t' << Fixed(100.0 * diff.accuracy_a, 2) << '\n';
  out << label_b << '\t' << Fixed(100.0 * diff.accuracy_b, 2) << '\n';
  out << "Diff.\t" << SignedPercent(diff.accuracy_delta) << '\n';
  out << "\nTag\tF1 diff\n";
  for (const auto& [tag, delta] : diff.f1_delta) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.2f", delta == 0.0 ? 0.0 : delta);
    out << tag << '\t' << buf << '\n';
  }
  return out.str();
}

std::vector<TagCount> TagHistogram(const Corpus& a, const Corpus& b,
                                   TagChannel channel) {
  if (!(a.tagset() == b.tagset())) throw Error("tag inventories differ");
  if (!a.fully_tagged(channel) || !b.fully_tagged(channel)) {
    throw Error(channel == TagChannel::kGold
                    ? "histogram needs gold tags on every sentence"
                    : "histogram needs predicted tags on every sentence");
  }
  std::vector<TagCount> counts;
  for (const auto& name : a.tagset().names()) counts.push_back({name, 0, 0});
  auto tally = [&](const Corpus& c, bool first) {
    for (const auto& s : c) {
      const auto& tags = channel == TagChannel::kGold ? *s.gold_tags
                                                      : *s.pred_tags;
      for (const auto& t : tags) {
        auto& row = counts[c.tagset().Id(t)];
        (first ? row.count_a : row.count_b)++;
      }
    }
  };
  tally(a, true);
  tally(b, false);
  return counts;
}

std::string FormatHistogram(const std::vector<TagCount>& counts,
                            const std::string& label_a,
                            const std::string& label_b) {
  std::ostringstream out;
  out << "Tag\t" << label_a << '\t' << label_b << '\n';
  for (const auto& c : counts) {
    out << c.tag << '\t' << c.count_a << '\t' << c.count_b << '\n';
  }
  return out.str();
}

std::string HistogramSvg(const std::vector<TagCount>& counts,
                         const std::string& label_a,
                         const std::string& label_b) {
  const int bar = 10;
  const int group = 2 * bar + 8;
  const int left = 50;
  const int top = 30;
  const int plot_h = 240;
  const int width = left + group * static_cast<int>(counts.size()) + 20;
  const int height = top + plot_h + 60;
  int64_t max_count = 1;
  for (const auto& c : counts) {
    max_count = std::max({max_count, c.count_a, c.count_b});
  }
  auto scaled = [&](int64_t v) {
    return static_cast<int>(static_cast<double>(v) * plot_h /
                            static_cast<double>(max_count));
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
      << "font-size=\"9\">\n";
  svg << "<rect x=\"" << left << "\" y=\"8\" width=\"10\" height=\"10\" "
      << "fill=\"#4c72b0\"/><text x=\"" << left + 14 << "\" y=\"17\">"
      << label_a << "</text>\n";
  svg << "<rect x=\"" << left + 120 << "\" y=\"8\" width=\"10\" "
      << "height=\"10\" fill=\"#dd8452\"/><text x=\"" << left + 134
      << "\" y=\"17\">" << label_b << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << width - 10 << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"4\" y=\"" << top + 8 << "\">" << max_count << "</text>\n";
  for (size_t i = 0; i < counts.size(); ++i) {
    const int x = left + group * static_cast<int>(i) + 4;
    const int ha = scaled(counts[i].count_a);
    const int hb = scaled(counts[i].count_b);
    svg << "<rect x=\"" << x << "\" y=\"" << top + plot_h - ha
        << "\" width=\"" << bar << "\" height=\"" << ha
        << "\" fill=\"#4c72b0\"/>\n";
    svg << "<rect x=\"" << x + bar << "\" y=\"" << top + plot_h - hb
        << "\" width=\"" << bar << "\" height=\"" << hb
        << "\" fill=\"#dd8452\"/>\n";
    svg << "<text x=\"" << x + bar << "\" y=\"" << top + plot_h + 12
        << "\" text-anchor=\"end\" transform=\"rotate(-60 " << x + bar << ' '
        << top + plot_h + 12 << ")\">" << counts[i].tag << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

CrossValidationResult CrossValidate(const Corpus& corpus,
                                    const TrainerFn& trainer, int k,
                                    uint64_t seed) {
  auto folds = KFold(corpus, k, seed);
  CrossValidationResult result;
  result.pooled = EmptyReport(corpus.tagset());
  double accuracy_sum = 0.0;
  for (size_t f = 0; f < folds.size(); ++f) {
    EvalReport report;
    try {
      TaggerFn tagger = trainer(folds[f].train);
      report = Score(folds[f].validation, tagger(folds[f].validation));
    } catch (const std::exception& e) {
      throw Error("fold " + std::to_string(f) + ": " + e.what());
    }
    for (const auto& [tag, s] : report.per_tag) {
      auto& pooled = result.pooled.per_tag[tag];
      pooled.support += s.support;
      pooled.predicted += s.predicted;
      pooled.correct += s.correct;
    }
    result.pooled.correct_tokens += report.correct_tokens;
    result.pooled.total_tokens += report.total_tokens;
    accuracy_sum += report.token_accuracy;
    result.folds.push_back(std::move(report));
  }
  Finalize(result.pooled);
  result.mean_fold_accuracy = accuracy_sum / static_cast<double>(folds.size());
  return result;
}

}  // namespace aaetag
