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

#include "aaetag/synthetic.h"

#include <map>
#include <random>
#include <sstream>

#include "aaetag/error.h"

namespace aaetag {
namespace {

struct Slot {
  std::string tag;
  std::vector<std::string> words;
  bool optional = false;
};

using Template = std::vector<Slot>;

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

std::vector<Template> Compile(const ToyGrammar& grammar, const TagSet& tagset) {
  std::map<std::string, std::vector<std::string>> lists;
  for (const auto& [name, words] : grammar.lists) {
    if (words.empty()) throw Error("word list @" + name + " is empty");
    lists[name] = words;
  }
  if (grammar.templates.empty()) throw Error("grammar has no templates");

  std::vector<Template> out;
  for (const auto& text : grammar.templates) {
    Template t;
    std::istringstream in(text);
    std::string slot_text;
    while (in >> slot_text) {
      Slot slot;
      if (slot_text.back() == '?') {
        slot.optional = true;
        slot_text.pop_back();
      }
      const size_t colon = slot_text.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == slot_text.size()) {
        throw Error("malformed template slot \"" + slot_text + "\"");
      }
      slot.tag = slot_text.substr(0, colon);
      if (!tagset.Contains(slot.tag)) {
        throw Error("unknown tag \"" + slot.tag + "\" in template");
      }
      for (const auto& alt : Split(slot_text.substr(colon + 1), '|')) {
        if (alt.empty()) throw Error("empty alternative in \"" + slot_text + "\"");
        if (alt[0] == '@') {
          auto it = lists.find(alt.substr(1));
          if (it == lists.end()) throw Error("unknown word list " + alt);
          slot.words.insert(slot.words.end(), it->second.begin(),
                            it->second.end());
        } else {
          slot.words.push_back(alt);
        }
      }
      t.push_back(std::move(slot));
    }
    bool has_required = false;
    for (const auto& s : t) has_required |= !s.optional;
    if (!has_required) throw Error("template \"" + text + "\" can be empty");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

const ToyGrammar& DefaultToyGrammar() {
  static const ToyGrammar* grammar = new ToyGrammar{
      .templates =
          {
              "PRP:you|they|we|I VBP:@vbp DT:the|this|that NN:@noun "
              "RB:now|again?",
              "PRP:they|we|you VBP:are VBG:fixing|trying TO:to VB:@verb "
              "RB:now|soon?",
              "PRP:he|she VBZ:is VBG:trying|fixing TO:to VB:@verb RB:soon?",
              "DT:that|this VBZ:is RB:@rb? JJ:fine|hot|@adj",
              "EX:there VBZ:is NN:something|nothing IN:for PRP:you|them "
              "RB:here?",
              "WP:what's RP:up IN:with PRP:you|them NNP:@name?",
              "PRP:I VBP:don't VB:know|care|@verb RB:@rb?",
              "PRP$:my|her|your NN:brother|sister VBZ:is VBG:sleeping "
              "RB:now?",
              "PRP:you're|we're VBG:getting RBR:better RB:now?",
              "PRP:it|this VBZ:is RBR:hotter|better IN:than DT:the NN:@noun",
              "PRP:we're|you're VBG:going RP:through DT:the|this NN:@noun",
              "PRP:she|he VBZ:has DT:a|the NN:@noun RB:now?",
              "PRP:they|we|I RB:already VBP:have DT:the|that NN:@noun",
              "PRP:we|they|I RB:already VBD:did DT:that NN:@noun?",
              "PRP:I|we|you VBP:have RB:already VBN:done PRP:it",
              "WRB:how VBZ:is PRP$:your|her NN:brother|sister|@noun",
              "WDT:when VBZ:is DT:the NN:@noun",
              "WDT:what VBZ:is DT:that|this NN:@noun?",
              "WDT:what's DT:that|this NN:@noun?",
              "RB:just VB:tell|ask PRP:me|them RP:about PRP:it",
              "CC:and PRP:I|we VBP:@vbp PRP:it|them RBR:more",
              "CC:but PRP:you|they MD:must VB:@verb RB:now?",
              "IN:because PRP:they|you VBP:are JJ:hot|fine|@adj CC:though?",
              "PRP:he|she VBZ:doesn't VB:care|@verb RB:@rb?",
              "PRP:I|we VBP:suppose RB:so",
              "NN:anyone MD:can|will VB:see|do DT:that",
              "DT:this VBZ:is DT:the NN:@noun WDT:that VBZ:matters|works",
              "PRP:I|we VBP:know|think IN:that PRP:you|they VBP:are "
              "JJ:fine|@adj",
              "NNP:@name VBZ:is VBG:sleeping|playing RB:now",
              "NNP:@name CC:and NNP:@name VBP:are JJ:@adj",
              "UH:lol|yeah|yo PRP:you|they VBP:are RB:so|too JJ:@adj",
              "DT:the NN:@noun VBZ:is JJ:@adj IN:for PRP:her|them",
              "CD:two|three NNS:songs|games|friends VBP:are RB:really? "
              "JJ:@adj",
              "PRP:she|he VBZ:is DT:the JJS:best|worst NN:@noun RB:ever?",
              "WP:who VBZ:is NNP:@name",
              "PRP:I VBP:like DT:this NN:@noun RBS:most",
              "VB:come RP:through RB:now|again",
              "PRP:I|you VBP:feel JJ:fine RB:@rb?",
          },
      .lists =
          {
              {"noun",
               {"car", "game", "song", "phone", "movie", "party", "house",
                "job", "class", "team", "show", "food"}},
              {"name", {"Mike", "Sarah", "Tasha", "Jordan", "Keisha", "Marcus"}},
              {"verb", {"go", "leave", "eat", "sleep", "play", "win", "talk"}},
              {"vbp", {"like", "want", "need", "love", "see", "hate"}},
              {"adj", {"good", "happy", "tired", "crazy", "real"}},
              {"rb", {"really", "always", "never", "too", "so"}},
          },
  };
  return *grammar;
}

const ToyGrammar& PronounVerbGrammar() {
  static const ToyGrammar* grammar = new ToyGrammar{
      .templates =
          {
              "PRP:@prp VBP:@amb DT:the|a NN:@noun",
              "PRP:@prp VBP:@amb RB:@rb",
              "CC:and PRP:@prp VBP:@amb IN:with NNP:@name",
              "DT:the|a JJ:@adj? NN:@amb VBZ:is JJ:@adj",
              "PRP$:my|our NN:@amb VBD:was JJ:@adj",
              "NNP:@name VBZ:likes DT:the NN:@amb",
              "RB:now|then PRP:@prp VBP:@amb RB:@rb?",
              "DT:the NN:@noun VBZ:is IN:for DT:the NN:@amb",
          },
      .lists =
          {
              {"prp", {"I", "you", "we", "they"}},
              {"amb",
               {"work", "love", "run", "need", "watch", "play", "dance",
                "walk", "call", "drink"}},
              {"noun", {"car", "song", "house", "team", "show"}},
              {"name", {"Mike", "Sarah", "Jordan"}},
              {"adj", {"good", "long", "hard", "late"}},
              {"rb", {"daily", "often", "again", "hard"}},
          },
  };
  return *grammar;
}

Corpus GenerateCorpus(const ToyGrammar& grammar, size_t n, uint64_t seed,
                      const TagSet& tagset) {
  if (n == 0) throw Error("sentence count must be positive");
  const auto templates = Compile(grammar, tagset);
  std::mt19937_64 rng(seed);
  Corpus corpus(tagset);
  for (size_t i = 0; i < n; ++i) {
    const Template& t = templates[rng() % templates.size()];
    TaggedSentence s;
    s.gold_tags.emplace();
    for (const auto& slot : t) {
      if (slot.optional && (rng() & 1) == 0) continue;
      s.tokens.push_back(slot.words[rng() % slot.words.size()]);
      s.gold_tags->push_back(slot.tag);
    }
    s.source_id = std::to_string(i);
    corpus.Add(std::move(s));
  }
  return corpus;
}

}  // namespace aaetag
