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
#ifndef AAETAG_TAGSET_H_
#define AAETAG_TAGSET_H_

#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aaetag {

// Index of a tag inside a TagSet. Ordering of indices is the inventory order,
// which is also the tie-break order used by every decoder.
using TagId = int;

// An ordered, duplicate-free tag inventory.
class TagSet {
 public:
  TagSet() = default;
  explicit TagSet(std::vector<std::string> names);
  TagSet(std::initializer_list<std::string> names)
      : TagSet(std::vector<std::string>(names)) {}

  // The 28 Penn-Treebank-style tags used for tweet tagging.
  static const TagSet& Default();

  // Default() followed by `extras` (duplicates of existing tags are ignored).
  static TagSet WithExtras(const std::vector<std::string>& extras);

  // Parses a comma or whitespace separated list of tags.
  static TagSet Parse(std::string_view text);

  int size() const { return static_cast<int>(names_.size()); }
  bool empty() const { return names_.empty(); }
  bool Contains(std::string_view name) const;

  // Throws Error for a tag outside the inventory.
  TagId Id(std::string_view name) const;
  // Returns -1 for an unknown tag.
  TagId Find(std::string_view name) const;
  const std::string& Name(TagId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const TagSet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, TagId> index_;
};

}  // namespace aaetag

#endif  // AAETAG_TAGSET_H_
