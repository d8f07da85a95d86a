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
// Deterministic MAE <-> AAE rewriting driven by a rule catalog.
//
// Catalog file: one rule per line, tab separated
//
//   rule_id  kind  mae_pattern  aae_form  tag_category  invertible
//
// Token sequences are joined with '+'. A pattern token may be written
// "surface/TAG" to require that gold tag; a single-token pattern without a
// constraint requires tag_category instead. aae_form "-" means deletion.
// '#' starts a comment line. invertible is one of yes/no/true/false/1/0.
//
// Rules are tried longest pattern first; among equal lengths deletions come
// before substitutions, and context rewrites (been constructions) after
// them, then file order. Each match fires with probability apply_prob; a
// rule that does not fire hands the position on to the next matching rule.

#ifndef AAETAG_DIALECT_RULES_H_
#define AAETAG_DIALECT_RULES_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aaetag/corpus.h"
#include "aaetag/tagset.h"

namespace aaetag {

enum class RuleKind {
  kLexicalMap,
  kConsonantDeletion,
  kFricativeReplacement,
  kCopulaDeletion,
  kContractionLoss,
  kPhraseReduction,
  kFragmentDeletion,
  kFragmentReplacement,
  kBeenConstruction,
  kPossessionReplacement,
  kPronounReplacement,
  kHomophoneReplacement,
  kAuxiliaryReplacement,
};

std::string_view RuleKindName(RuleKind kind);
// Throws Error for an unknown name.
RuleKind ParseRuleKind(std::string_view name);
const std::vector<RuleKind>& AllRuleKinds();

struct PatternToken {
  std::string surface;
  std::optional<std::string> tag;

  bool operator==(const PatternToken&) const = default;
};

struct DialectRule {
  std::string rule_id;
  RuleKind kind = RuleKind::kLexicalMap;
  std::vector<PatternToken> mae_pattern;
  std::vector<std::string> aae_form;  // empty for deletions
  std::string tag_category;
  bool invertible = false;

  // Surface forms of mae_pattern joined by a single space.
  std::string MaeText() const;
  std::string AaeText() const;

  bool operator==(const DialectRule&) const = default;
};

class RuleCatalog {
 public:
  // Validates ids, tags, kinds and the one-to-one pairing of invertible rules
  // and computes the application order.
  RuleCatalog(std::vector<DialectRule> rules,
              TagSet tagset = TagSet::Default());

  // Built-in catalog (data/default_rules.tsv compiled into the library).
  static const RuleCatalog& Default();

  const std::vector<DialectRule>& rules() const { return rules_; }
  const TagSet& tagset() const { return tagset_; }
  // Indices into rules() in priority order.
  const std::vector<size_t>& application_order() const { return order_; }
  std::vector<std::string> application_order_ids() const;

  const DialectRule* Find(std::string_view rule_id) const;

  // Sub-catalog keeping rules for which pred(rule) holds.
  template <typename Pred>
  RuleCatalog Filter(Pred pred) const {
    std::vector<DialectRule> kept;
    for (const auto& r : rules_) {
      if (pred(r)) kept.push_back(r);
    }
    return RuleCatalog(std::move(kept), tagset_);
  }

 private:
  std::vector<DialectRule> rules_;
  std::vector<size_t> order_;
  TagSet tagset_;
};

RuleCatalog ParseCatalog(std::istream& in,
                         const TagSet& tagset = TagSet::Default());
RuleCatalog LoadCatalog(const std::filesystem::path& path,
                        const TagSet& tagset = TagSet::Default());
void WriteCatalog(const RuleCatalog& catalog, std::ostream& out);

// One rewrite performed by ToAae; spans index the input and output token
// sequences respectively.
struct RuleApplication {
  std::string rule_id;
  size_t source_begin = 0;
  size_t source_length = 0;
  size_t target_begin = 0;
  size_t target_length = 0;
};

struct AaeResult {
  TaggedSentence sentence;
  std::vector<RuleApplication> applications;
};

// Requires gold tags. prob 0 is the identity; prob 1 fires the first
// matching rule at every position.
AaeResult ToAaeTraced(const TaggedSentence& sentence,
                      const RuleCatalog& catalog, double apply_prob,
                      uint64_t seed);
TaggedSentence ToAae(const TaggedSentence& sentence, const RuleCatalog& catalog,
                     double apply_prob, uint64_t seed);

// A surface form produced by a non-invertible rule, left untouched.
struct Residue {
  std::string rule_id;
  size_t position = 0;  // in the output sentence
  std::string token;
};

struct MaeResult {
  TaggedSentence sentence;
  std::vector<Residue> residue;
};

// Inverts invertible rules only. Tags are optional.
MaeResult ToMae(const TaggedSentence& sentence, const RuleCatalog& catalog);
MaeResult ToMae(const std::vector<std::string>& tokens,
                const RuleCatalog& catalog);

// (mae, aae) sentence-aligned corpora. Sentence i uses a seed derived from
// (seed, i) so results do not depend on evaluation order.
std::pair<Corpus, Corpus> SynthesizeParallel(const Corpus& corpus,
                                             const RuleCatalog& catalog,
                                             double apply_prob, uint64_t seed);

}  // namespace aaetag

#endif  // AAETAG_DIALECT_RULES_H_
