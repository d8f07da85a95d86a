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

#include "aaetag/dialect_rules.h"

#include <unicode/uchar.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "aaetag/error.h"
#include "aaetag/preprocess.h"

namespace aaetag {

// Generated from data/default_rules.tsv.
extern const char* const kDefaultCatalogText;

namespace {

struct KindEntry {
  RuleKind kind;
  std::string_view name;
};

constexpr KindEntry kKinds[] = {
    {RuleKind::kLexicalMap, "lexical_map"},
    {RuleKind::kConsonantDeletion, "consonant_deletion"},
    {RuleKind::kFricativeReplacement, "fricative_replacement"},
    {RuleKind::kCopulaDeletion, "copula_deletion"},
    {RuleKind::kContractionLoss, "contraction_loss"},
    {RuleKind::kPhraseReduction, "phrase_reduction"},
    {RuleKind::kFragmentDeletion, "fragment_deletion"},
    {RuleKind::kFragmentReplacement, "fragment_replacement"},
    {RuleKind::kBeenConstruction, "been_construction"},
    {RuleKind::kPossessionReplacement, "possession_replacement"},
    {RuleKind::kPronounReplacement, "pronoun_replacement"},
    {RuleKind::kHomophoneReplacement, "homophone_replacement"},
    {RuleKind::kAuxiliaryReplacement, "auxiliary_replacement"},
};

int KindRank(RuleKind kind) {
  switch (kind) {
    case RuleKind::kCopulaDeletion:
      return 0;
    case RuleKind::kBeenConstruction:
      return 2;
    default:
      return 1;
  }
}

std::vector<std::string> SplitOn(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string current;
  std::istringstream in(s);
  while (std::getline(in, current, sep)) out.push_back(current);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string Join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool StartsUpper(const std::string& token) {
  std::u32string cps = DecodeUtf8(token);
  return !cps.empty() && u_isupper(static_cast<UChar32>(cps[0]));
}

std::string Capitalize(const std::string& token) {
  std::u32string cps = DecodeUtf8(token);
  if (cps.empty()) return token;
  cps[0] = static_cast<char32_t>(u_toupper(static_cast<UChar32>(cps[0])));
  return EncodeUtf8(cps);
}

// Capitalization is carried over only when it belongs to the instance (a
// sentence-initial "The") rather than to the stored lexeme ("I").
std::vector<std::string> WithCase(std::vector<std::string> output,
                                  const std::string& source_first,
                                  const std::string& stored_first) {
  if (!output.empty() && StartsUpper(source_first) &&
      !StartsUpper(stored_first)) {
    output[0] = Capitalize(output[0]);
  }
  return output;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::string> LowerAll(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(LowercaseUtf8(t));
  return out;
}

std::vector<std::string> Surfaces(const std::vector<PatternToken>& pattern) {
  std::vector<std::string> out;
  for (const auto& p : pattern) out.push_back(p.surface);
  return out;
}

bool MatchesMae(const DialectRule& rule, const std::vector<std::string>& lower,
                const std::vector<std::string>& tags, size_t pos) {
  const size_t len = rule.mae_pattern.size();
  if (pos + len > lower.size()) return false;
  for (size_t k = 0; k < len; ++k) {
    const PatternToken& p = rule.mae_pattern[k];
    if (lower[pos + k] != LowercaseUtf8(p.surface)) return false;
    if (p.tag) {
      if (tags[pos + k] != *p.tag) return false;
    } else if (len == 1 && tags[pos] != rule.tag_category) {
      return false;
    }
  }
  return true;
}

bool MatchesAae(const DialectRule& rule, const std::vector<std::string>& lower,
                size_t pos) {
  const size_t len = rule.aae_form.size();
  if (len == 0 || pos + len > lower.size()) return false;
  for (size_t k = 0; k < len; ++k) {
    if (lower[pos + k] != LowercaseUtf8(rule.aae_form[k])) return false;
  }
  return true;
}

}  // namespace

std::string_view RuleKindName(RuleKind kind) {
  for (const auto& e : kKinds) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

RuleKind ParseRuleKind(std::string_view name) {
  for (const auto& e : kKinds) {
    if (e.name == name) return e.kind;
  }
  throw Error("unknown rule kind \"" + std::string(name) + "\"");
}

const std::vector<RuleKind>& AllRuleKinds() {
  static const std::vector<RuleKind> kAll = [] {
    std::vector<RuleKind> all;
    for (const auto& e : kKinds) all.push_back(e.kind);
    return all;
  }();
  return kAll;
}

std::string DialectRule::MaeText() const {
  return Join(Surfaces(mae_pattern), " ");
}

std::string DialectRule::AaeText() const { return Join(aae_form, " "); }

RuleCatalog::RuleCatalog(std::vector<DialectRule> rules, TagSet tagset)
    : rules_(std::move(rules)), tagset_(std::move(tagset)) {
  std::unordered_set<std::string> ids;
  std::unordered_map<std::string, std::string> mae_to_aae;
  std::unordered_map<std::string, std::string> aae_to_mae;
  for (const auto& r : rules_) {
    if (r.rule_id.empty()) throw Error("rule with empty id");
    if (!ids.insert(r.rule_id).second) {
      throw Error("duplicate rule id \"" + r.rule_id + "\"");
    }
    if (r.mae_pattern.empty()) {
      throw Error("rule " + r.rule_id + " has an empty pattern");
    }
    if (!tagset_.Contains(r.tag_category)) {
      throw Error("rule " + r.rule_id + ": tag \"" + r.tag_category +
                  "\" outside the tag inventory");
    }
    for (const auto& p : r.mae_pattern) {
      if (p.surface.empty()) throw Error("rule " + r.rule_id + ": empty token");
      if (p.tag && !tagset_.Contains(*p.tag)) {
        throw Error("rule " + r.rule_id + ": tag \"" + *p.tag +
                    "\" outside the tag inventory");
      }
    }
    for (const auto& a : r.aae_form) {
      if (a.empty()) throw Error("rule " + r.rule_id + ": empty output token");
    }
    if (r.kind == RuleKind::kCopulaDeletion) {
      const std::string surface = LowercaseUtf8(r.mae_pattern[0].surface);
      if (r.mae_pattern.size() != 1 || !r.aae_form.empty() ||
          (surface != "is" && surface != "are")) {
        throw Error("rule " + r.rule_id +
                    ": copula deletion removes a single is/are token");
      }
    } else if (r.aae_form.empty()) {
      throw Error("rule " + r.rule_id + ": only copula deletion may delete");
    }
    if (r.invertible) {
      if (r.kind == RuleKind::kCopulaDeletion ||
          r.kind == RuleKind::kBeenConstruction) {
        throw Error("rule " + r.rule_id + ": " +
                    std::string(RuleKindName(r.kind)) + " is not invertible");
      }
      const std::string mae = LowercaseUtf8(r.MaeText());
      const std::string aae = LowercaseUtf8(r.AaeText());
      auto [m, m_new] = mae_to_aae.emplace(mae, aae);
      auto [a, a_new] = aae_to_mae.emplace(aae, mae);
      if (m->second != aae || a->second != mae) {
        throw Error("rule " + r.rule_id +
                    ": invertible pair \"" + mae + "\" <-> \"" + aae +
                    "\" conflicts with another invertible rule");
      }
    }
  }

  order_.resize(rules_.size());
  for (size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  std::stable_sort(order_.begin(), order_.end(), [&](size_t a, size_t b) {
    const auto& ra = rules_[a];
    const auto& rb = rules_[b];
    if (ra.mae_pattern.size() != rb.mae_pattern.size()) {
      return ra.mae_pattern.size() > rb.mae_pattern.size();
    }
    return KindRank(ra.kind) < KindRank(rb.kind);
  });
}

const RuleCatalog& RuleCatalog::Default() {
  static const RuleCatalog kCatalog = [] {
    std::istringstream in(kDefaultCatalogText);
    return ParseCatalog(in, TagSet::Default());
  }();
  return kCatalog;
}

std::vector<std::string> RuleCatalog::application_order_ids() const {
  std::vector<std::string> ids;
  for (size_t i : order_) ids.push_back(rules_[i].rule_id);
  return ids;
}

const DialectRule* RuleCatalog::Find(std::string_view rule_id) const {
  for (const auto& r : rules_) {
    if (r.rule_id == rule_id) return &r;
  }
  return nullptr;
}

RuleCatalog ParseCatalog(std::istream& in, const TagSet& tagset) {
  std::vector<DialectRule> rules;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos ||
        line[line.find_first_not_of(" \t")] == '#') {
      continue;
    }
    auto fields = SplitOn(line, '\t');
    if (fields.size() != 6) {
      throw ParseError("expected 6 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    try {
      DialectRule rule;
      rule.rule_id = fields[0];
      rule.kind = ParseRuleKind(fields[1]);
      for (const auto& part : SplitOn(fields[2], '+')) {
        PatternToken token;
        size_t slash = part.rfind('/');
        if (slash != std::string::npos && slash > 0) {
          token.surface = part.substr(0, slash);
          token.tag = part.substr(slash + 1);
        } else {
          token.surface = part;
        }
        rule.mae_pattern.push_back(std::move(token));
      }
      if (fields[3] != "-") rule.aae_form = SplitOn(fields[3], '+');
      rule.tag_category = fields[4];
      const std::string& flag = fields[5];
      if (flag == "yes" || flag == "true" || flag == "1") {
        rule.invertible = true;
      } else if (flag == "no" || flag == "false" || flag == "0") {
        rule.invertible = false;
      } else {
        throw Error("invalid invertible flag \"" + flag + "\"");
      }
      rules.push_back(std::move(rule));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return RuleCatalog(std::move(rules), tagset);
}

RuleCatalog LoadCatalog(const std::filesystem::path& path,
                        const TagSet& tagset) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ParseCatalog(in, tagset);
}

void WriteCatalog(const RuleCatalog& catalog, std::ostream& out) {
  out << "# rule_id\tkind\tmae_pattern\taae_form\ttag_category\tinvertible\n";
  for (const auto& r : catalog.rules()) {
    std::vector<std::string> pattern;
    for (const auto& p : r.mae_pattern) {
      pattern.push_back(p.tag ? p.surface + "/" + *p.tag : p.surface);
    }
    out << r.rule_id << '\t' << RuleKindName(r.kind) << '\t'
        << Join(pattern, "+") << '\t'
        << (r.aae_form.empty() ? std::string("-") : Join(r.aae_form, "+"))
        << '\t' << r.tag_category << '\t' << (r.invertible ? "yes" : "no")
        << '\n';
  }
}

AaeResult ToAaeTraced(const TaggedSentence& sentence,
                      const RuleCatalog& catalog, double apply_prob,
                      uint64_t seed) {
  if (!sentence.gold_tags) {
    throw Error("dialect rewriting needs gold tags (sentence " +
                sentence.source_id + ")");
  }
  if (!(apply_prob >= 0.0 && apply_prob <= 1.0)) {
    throw Error("apply probability must lie in [0, 1]");
  }
  const auto& tokens = sentence.tokens;
  const auto& tags = *sentence.gold_tags;
  const auto lower = LowerAll(tokens);
  std::mt19937_64 rng(seed);

  AaeResult result;
  result.sentence.source_id = sentence.source_id;
  std::vector<std::string> out_tokens;
  std::vector<std::string> out_tags;

  size_t pos = 0;
  while (pos < tokens.size()) {
    const DialectRule* fired = nullptr;
    if (apply_prob > 0.0) {
      for (size_t idx : catalog.application_order()) {
        const DialectRule& rule = catalog.rules()[idx];
        if (!MatchesMae(rule, lower, tags, pos)) continue;
        if (Uniform01(rng) < apply_prob) {
          fired = &rule;
          break;
        }
      }
    }
    if (!fired) {
      out_tokens.push_back(tokens[pos]);
      out_tags.push_back(tags[pos]);
      ++pos;
      continue;
    }
    const size_t src_len = fired->mae_pattern.size();
    RuleApplication app{fired->rule_id, pos, src_len, out_tokens.size(),
                        fired->aae_form.size()};
    auto replacement = WithCase(fired->aae_form, tokens[pos],
                                fired->mae_pattern[0].surface);
    for (size_t k = 0; k < replacement.size(); ++k) {
      out_tokens.push_back(replacement[k]);
      out_tags.push_back(replacement.size() == src_len ? tags[pos + k]
                                                       : fired->tag_category);
    }
    result.applications.push_back(std::move(app));
    pos += src_len;
  }

  // A sentence made only of copulas would vanish; keep it unchanged.
  if (out_tokens.empty()) {
    result.sentence = sentence;
    result.sentence.pred_tags.reset();
    result.applications.clear();
    return result;
  }
  result.sentence.tokens = std::move(out_tokens);
  result.sentence.gold_tags = std::move(out_tags);
  return result;
}

TaggedSentence ToAae(const TaggedSentence& sentence, const RuleCatalog& catalog,
                     double apply_prob, uint64_t seed) {
  return ToAaeTraced(sentence, catalog, apply_prob, seed).sentence;
}

MaeResult ToMae(const TaggedSentence& sentence, const RuleCatalog& catalog) {
  const auto& tokens = sentence.tokens;
  const auto lower = LowerAll(tokens);
  const bool tagged = sentence.gold_tags.has_value();

  std::vector<size_t> inverse_order;
  for (size_t i = 0; i < catalog.rules().size(); ++i) {
    if (catalog.rules()[i].invertible) inverse_order.push_back(i);
  }
  std::stable_sort(inverse_order.begin(), inverse_order.end(),
                   [&](size_t a, size_t b) {
                     return catalog.rules()[a].aae_form.size() >
                            catalog.rules()[b].aae_form.size();
                   });

  MaeResult result;
  result.sentence.source_id = sentence.source_id;
  std::vector<std::string> out_tokens;
  std::vector<std::string> out_tags;

  size_t pos = 0;
  while (pos < tokens.size()) {
    const DialectRule* chosen = nullptr;
    for (size_t idx : inverse_order) {
      const DialectRule& rule = catalog.rules()[idx];
      if (!MatchesAae(rule, lower, pos)) continue;
      if (chosen && chosen->aae_form.size() > rule.aae_form.size()) break;
      if (!chosen) chosen = &rule;
      // Same surface under several categories ("dat"): prefer the one that
      // agrees with the token's tag.
      if (tagged && rule.aae_form.size() == 1 &&
          rule.tag_category == (*sentence.gold_tags)[pos]) {
        chosen = &rule;
        break;
      }
    }
    if (!chosen) {
      for (const auto& rule : catalog.rules()) {
        if (!rule.invertible && MatchesAae(rule, lower, pos)) {
          result.residue.push_back({rule.rule_id, out_tokens.size(),
                                    tokens[pos]});
        }
      }
      out_tokens.push_back(tokens[pos]);
      if (tagged) out_tags.push_back((*sentence.gold_tags)[pos]);
      ++pos;
      continue;
    }
    const size_t src_len = chosen->aae_form.size();
    auto replacement = WithCase(Surfaces(chosen->mae_pattern), tokens[pos],
                                chosen->aae_form[0]);
    for (size_t k = 0; k < replacement.size(); ++k) {
      out_tokens.push_back(replacement[k]);
      if (!tagged) continue;
      if (replacement.size() == src_len) {
        out_tags.push_back((*sentence.gold_tags)[pos + k]);
      } else {
        const auto& tag = chosen->mae_pattern[k].tag;
        out_tags.push_back(tag ? *tag : chosen->tag_category);
      }
    }
    pos += src_len;
  }
  result.sentence.tokens = std::move(out_tokens);
  if (tagged) result.sentence.gold_tags = std::move(out_tags);
  return result;
}

MaeResult ToMae(const std::vector<std::string>& tokens,
                const RuleCatalog& catalog) {
  TaggedSentence sentence;
  sentence.tokens = tokens;
  return ToMae(sentence, catalog);
}

std::pair<Corpus, Corpus> SynthesizeParallel(const Corpus& corpus,
                                             const RuleCatalog& catalog,
                                             double apply_prob, uint64_t seed) {
  if (!corpus.fully_tagged()) {
    throw Error("parallel synthesis needs a fully gold-tagged corpus");
  }
  Corpus mae(corpus.tagset());
  Corpus aae(corpus.tagset());
  for (size_t i = 0; i < corpus.size(); ++i) {
    TaggedSentence source = corpus[i];
    source.pred_tags.reset();
    aae.Add(ToAae(source, catalog, apply_prob,
                  SplitMix64(seed ^ SplitMix64(static_cast<uint64_t>(i)))));
    mae.Add(std::move(source));
  }
  return {std::move(mae), std::move(aae)};
}

}  // namespace aaetag
