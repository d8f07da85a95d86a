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

#include "aaetag/corpus.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "aaetag/error.h"

namespace aaetag {

namespace {

void ValidateColumn(const std::vector<std::string>& tags,
                    const TaggedSentence& sentence, const TagSet& tagset,
                    const char* column) {
  if (tags.size() != sentence.tokens.size()) {
    throw Error(std::string(column) + " tags have " +
                std::to_string(tags.size()) + " entries for " +
                std::to_string(sentence.tokens.size()) + " tokens in sentence " +
                sentence.source_id);
  }
  for (const auto& tag : tags) {
    if (!tagset.Contains(tag)) {
      throw Error("tag \"" + tag + "\" outside the tag inventory in sentence " +
                  sentence.source_id);
    }
  }
}

Corpus Subset(const Corpus& corpus, const std::vector<size_t>& order,
              size_t begin, size_t end) {
  Corpus out(corpus.tagset());
  for (size_t i = begin; i < end; ++i) out.Add(corpus[order[i]]);
  return out;
}

bool IsBlank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace

void ValidateSentence(const TaggedSentence& sentence, const TagSet& tagset) {
  if (sentence.tokens.empty()) {
    throw Error("sentence " + sentence.source_id + " has no tokens");
  }
  for (const auto& token : sentence.tokens) {
    if (token.empty()) {
      throw Error("sentence " + sentence.source_id + " has an empty token");
    }
  }
  if (sentence.gold_tags) {
    ValidateColumn(*sentence.gold_tags, sentence, tagset, "gold");
  }
  if (sentence.pred_tags) {
    ValidateColumn(*sentence.pred_tags, sentence, tagset, "predicted");
  }
}

Corpus::Corpus(std::vector<TaggedSentence> sentences, TagSet tagset)
    : tagset_(std::move(tagset)) {
  for (auto& sentence : sentences) Add(std::move(sentence));
}

void Corpus::Add(TaggedSentence sentence) {
  ValidateSentence(sentence, tagset_);
  sentences_.push_back(std::move(sentence));
}

size_t Corpus::token_count() const {
  size_t total = 0;
  for (const auto& s : sentences_) total += s.size();
  return total;
}

bool Corpus::fully_tagged(TagChannel channel) const {
  for (const auto& s : sentences_) {
    if (channel == TagChannel::kGold ? !s.has_gold() : !s.has_pred()) {
      return false;
    }
  }
  return true;
}

Corpus ReadConll(std::istream& in, const TagSet& tagset) {
  Corpus corpus(tagset);
  TaggedSentence current;
  std::vector<std::string> tags;
  int tagged_lines = 0;
  int first_line = 0;
  int line_no = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) return;
    if (tagged_lines != 0 &&
        tagged_lines != static_cast<int>(current.tokens.size())) {
      throw ParseError("sentence mixes tagged and untagged tokens", first_line);
    }
    if (tagged_lines != 0) current.gold_tags = std::move(tags);
    current.source_id = std::to_string(corpus.size());
    corpus.Add(std::move(current));
    current = TaggedSentence();
    tags.clear();
    tagged_lines = 0;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) {
      flush();
      continue;
    }
    if (current.tokens.empty()) first_line = line_no;
    if (line.back() == '\r') {
      throw ParseError("carriage return before newline", line_no);
    }
    size_t tab = line.find('\t');
    std::string token = line.substr(0, tab);
    if (token.empty()) throw ParseError("empty token", line_no);
    if (tab != std::string::npos) {
      std::string tag = line.substr(tab + 1);
      if (tag.empty() || tag.find('\t') != std::string::npos) {
        throw ParseError("expected token<TAB>tag", line_no);
      }
      if (!tagset.Contains(tag)) {
        throw ParseError("unknown tag \"" + tag + "\"", line_no);
      }
      tags.push_back(std::move(tag));
      ++tagged_lines;
    } else {
      tags.emplace_back();
    }
    current.tokens.push_back(std::move(token));
  }
  flush();
  return corpus;
}

Corpus ReadConll(const std::filesystem::path& path, const TagSet& tagset) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return ReadConll(in, tagset);
}

void WriteConll(const Corpus& corpus, std::ostream& out, TagChannel channel) {
  for (const auto& sentence : corpus) {
    const auto& tags = channel == TagChannel::kGold ? sentence.gold_tags
                                                    : sentence.pred_tags;
    for (size_t i = 0; i < sentence.size(); ++i) {
      out << sentence.tokens[i];
      if (tags) out << '\t' << (*tags)[i];
      out << '\n';
    }
    out << '\n';
  }
  if (!out) throw Error("write failed");
}

void WriteConll(const Corpus& corpus, const std::filesystem::path& path,
                TagChannel channel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  WriteConll(corpus, out, channel);
}

std::vector<size_t> ShuffledIndices(size_t n, uint64_t seed) {
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (size_t i = n; i > 1; --i) {
    size_t j = static_cast<size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::pair<Corpus, Corpus> SplitHoldout(const Corpus& corpus,
                                       double train_fraction, uint64_t seed) {
  if (corpus.size() < 2) throw Error("split needs at least 2 sentences");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("train fraction must lie strictly between 0 and 1");
  }
  auto order = ShuffledIndices(corpus.size(), seed);
  size_t n_train = static_cast<size_t>(
      std::llround(train_fraction * static_cast<double>(corpus.size())));
  return {Subset(corpus, order, 0, n_train),
          Subset(corpus, order, n_train, order.size())};
}

std::vector<Fold> KFold(const Corpus& corpus, int k, uint64_t seed) {
  if (k < 2) throw Error("k-fold needs k >= 2");
  if (corpus.size() < static_cast<size_t>(k)) {
    throw Error("k-fold needs at least k sentences");
  }
  auto order = ShuffledIndices(corpus.size(), seed);
  const size_t n = order.size();
  const size_t base = n / k;
  const size_t extra = n % k;
  std::vector<Fold> folds;
  size_t begin = 0;
  for (int f = 0; f < k; ++f) {
    size_t end = begin + base + (static_cast<size_t>(f) < extra ? 1 : 0);
    Fold fold{Corpus(corpus.tagset()), Subset(corpus, order, begin, end)};
    for (size_t i = 0; i < n; ++i) {
      if (i < begin || i >= end) fold.train.Add(corpus[order[i]]);
    }
    folds.push_back(std::move(fold));
    begin = end;
  }
  return folds;
}

Corpus SampleSentences(const Corpus& corpus, size_t k, uint64_t seed) {
  if (k > corpus.size()) throw Error("sample larger than corpus");
  auto order = ShuffledIndices(corpus.size(), seed);
  return Subset(corpus, order, 0, k);
}

Corpus Concat(const Corpus& a, const Corpus& b) {
  if (!(a.tagset() == b.tagset())) throw Error("tag inventories differ");
  Corpus out = a;
  for (const auto& s : b) out.Add(s);
  return out;
}

}  // namespace aaetag
