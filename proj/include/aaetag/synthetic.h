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
// Small template grammars that produce gold-tagged English sentences for
// experiments and tests.

#ifndef AAETAG_SYNTHETIC_H_
#define AAETAG_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "aaetag/corpus.h"

namespace aaetag {

// A template is a space-separated list of slots "TAG:word|word" or
// "TAG:@list", where @list names a word list of the grammar. A trailing '?'
// on a slot makes it optional (kept with probability 1/2).
struct ToyGrammar {
  std::vector<std::string> templates;
  std::vector<std::pair<std::string, std::vector<std::string>>> lists;
};

// Mostly lowercase MAE sentences (about seven tokens) that exercise every
// word the default rule catalog rewrites.
const ToyGrammar& DefaultToyGrammar();

// Sentences in which every personal pronoun is immediately followed by a
// present-tense non-third-person verb, whose word forms also occur as nouns
// elsewhere.
const ToyGrammar& PronounVerbGrammar();

// Draws `n` sentences, each from a uniformly chosen template. Throws Error on
// a malformed grammar or n == 0.
Corpus GenerateCorpus(const ToyGrammar& grammar, size_t n, uint64_t seed,
                      const TagSet& tagset = TagSet::Default());

}  // namespace aaetag

#endif  // AAETAG_SYNTHETIC_H_
