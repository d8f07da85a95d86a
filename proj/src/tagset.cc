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

#include "aaetag/tagset.h"

#include <cctype>

#include "aaetag/error.h"

namespace aaetag {

TagSet::TagSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw Error("empty tag name in inventory");
    if (!index_.emplace(names_[i], static_cast<TagId>(i)).second) {
      throw Error("duplicate tag in inventory: " + names_[i]);
    }
  }
}

const TagSet& TagSet::Default() {
  static const TagSet kDefault{
      "CC",  "CD",  "DT",   "EX", "IN", "JJ", "JJS", "MD",  "NN",  "NNP",
      "NNS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "TO", "UH",  "VB",
      "VBD", "VBG", "VBN",  "VBP", "VBZ", "WDT", "WP", "WRB"};
  return kDefault;
}

TagSet TagSet::WithExtras(const std::vector<std::string>& extras) {
  std::vector<std::string> names = Default().names();
  for (const auto& extra : extras) {
    if (!Default().Contains(extra)) names.push_back(extra);
  }
  return TagSet(std::move(names));
}

TagSet TagSet::Parse(std::string_view text) {
  std::vector<std::string> names;
  std::string current;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) names.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) names.push_back(std::move(current));
  if (names.empty()) throw Error("tag inventory is empty");
  return TagSet(std::move(names));
}

bool TagSet::Contains(std::string_view name) const { return Find(name) >= 0; }

TagId TagSet::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

TagId TagSet::Id(std::string_view name) const {
  TagId id = Find(name);
  if (id < 0) throw Error("unknown tag \"" + std::string(name) + "\"");
  return id;
}

}  // namespace aaetag
