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
// Krippendorff's alpha for nominal labels.

#ifndef AAETAG_AGREEMENT_H_
#define AAETAG_AGREEMENT_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aaetag/tagset.h"

namespace aaetag {

// Sparse annotator x item label matrix. Item ids are opaque; token-level
// tables use "<sentence>:<token>".
class AgreementTable {
 public:
  explicit AgreementTable(TagSet tagset = TagSet::Default())
      : tagset_(std::move(tagset)) {}

  // Overwrites an earlier label by the same annotator for the same item.
  void Set(const std::string& annotator, const std::string& item,
           const std::string& label);

  const TagSet& tagset() const { return tagset_; }
  const std::vector<std::string>& items() const { return items_; }
  std::vector<std::string> annotators() const;
  // item -> (annotator -> label), items in first-seen order.
  const std::map<std::string, std::map<std::string, std::string>>& labels()
      const {
    return labels_;
  }
  size_t pairable_items() const;

 private:
  TagSet tagset_;
  std::vector<std::string> items_;
  std::map<std::string, std::map<std::string, std::string>> labels_;
};

// Reads "annotator<TAB>item<TAB>label" lines ('#' comments allowed).
AgreementTable ReadAgreementTable(std::istream& in,
                                  const TagSet& tagset = TagSet::Default());
AgreementTable ReadAgreementTable(const std::filesystem::path& path,
                                  const TagSet& tagset = TagSet::Default());

struct CoincidenceMatrix {
  std::vector<std::string> categories;  // sorted labels that occur
  std::vector<std::vector<double>> counts;
  double total = 0.0;  // number of pairable values

  double at(const std::string& a, const std::string& b) const;
};

// Each item with m >= 2 labels adds 1/(m-1) for every ordered pair of its
// values. Throws Error when no item has two labels.
CoincidenceMatrix BuildCoincidenceMatrix(const AgreementTable& table);

struct AlphaResult {
  double alpha = 0.0;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  // Expected disagreement was zero (a single category overall); alpha is
  // reported as 1.0 by convention.
  bool degenerate = false;
};

AlphaResult KrippendorffAlpha(const AgreementTable& table);

}  // namespace aaetag

#endif  // AAETAG_AGREEMENT_H_
