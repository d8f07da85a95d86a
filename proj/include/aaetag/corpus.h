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
#ifndef AAETAG_CORPUS_H_
#define AAETAG_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aaetag/tagset.h"

namespace aaetag {

// One tweet: a token sequence with optional gold and predicted tag columns.
struct TaggedSentence {
  std::vector<std::string> tokens;
  std::optional<std::vector<std::string>> gold_tags;
  std::optional<std::vector<std::string>> pred_tags;
  std::string source_id;

  size_t size() const { return tokens.size(); }
  bool has_gold() const { return gold_tags.has_value(); }
  bool has_pred() const { return pred_tags.has_value(); }

  bool operator==(const TaggedSentence&) const = default;
};

// Checks the structural sentence invariants (non-empty, no empty tokens, tag
// columns aligned, tags in inventory). Throws Error on the first violation.
void ValidateSentence(const TaggedSentence& sentence, const TagSet& tagset);

// Which tag column an operation reads or writes.
enum class TagChannel { kGold, kPredicted };

class Corpus {
 public:
  Corpus() : tagset_(TagSet::Default()) {}
  explicit Corpus(TagSet tagset) : tagset_(std::move(tagset)) {}
  // Validates every sentence against `tagset`.
  Corpus(std::vector<TaggedSentence> sentences, TagSet tagset);

  const TagSet& tagset() const { return tagset_; }
  const std::vector<TaggedSentence>& sentences() const { return sentences_; }
  const TaggedSentence& operator[](size_t i) const { return sentences_[i]; }
  size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  size_t token_count() const;

  // Validates before appending.
  void Add(TaggedSentence sentence);

  bool fully_tagged(TagChannel channel = TagChannel::kGold) const;

  auto begin() const { return sentences_.begin(); }
  auto end() const { return sentences_.end(); }

  bool operator==(const Corpus& other) const {
    return tagset_ == other.tagset_ && sentences_ == other.sentences_;
  }

 private:
  TagSet tagset_;
  std::vector<TaggedSentence> sentences_;
};

// Tab separated token/tag lines, blank line after every sentence. Sentence
// ids are assigned as "<index>" in file order.
Corpus ReadConll(std::istream& in, const TagSet& tagset = TagSet::Default());
Corpus ReadConll(const std::filesystem::path& path,
                 const TagSet& tagset = TagSet::Default());

// Writes the selected tag column when every sentence carries it for that
// channel, token-only lines for sentences without it.
void WriteConll(const Corpus& corpus, std::ostream& out,
                TagChannel channel = TagChannel::kGold);
void WriteConll(const Corpus& corpus, const std::filesystem::path& path,
                TagChannel channel = TagChannel::kGold);

// Seeded Fisher-Yates permutation of [0, n). Identical across platforms.
std::vector<size_t> ShuffledIndices(size_t n, uint64_t seed);

// Returns (train, held_out) with round(train_fraction * N) training sentences.
std::pair<Corpus, Corpus> SplitHoldout(const Corpus& corpus,
                                       double train_fraction, uint64_t seed);

struct Fold {
  Corpus train;
  Corpus validation;
};

// k folds over a seeded permutation; validation sizes differ by at most one.
std::vector<Fold> KFold(const Corpus& corpus, int k, uint64_t seed);

// k sentences drawn without replacement under `seed`.
Corpus SampleSentences(const Corpus& corpus, size_t k, uint64_t seed);

// Concatenation; tagsets must match.
Corpus Concat(const Corpus& a, const Corpus& b);

}  // namespace aaetag

#endif  // AAETAG_CORPUS_H_
