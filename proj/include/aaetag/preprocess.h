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
// Tweet denoising: letter-run squeezing, handle/punctuation/emoji removal and
// whitespace tokenization.

#ifndef AAETAG_PREPROCESS_H_
#define AAETAG_PREPROCESS_H_

#include <string>
#include <string_view>
#include <vector>

namespace aaetag {

// Inclusive codepoint range.
struct CodepointRange {
  char32_t first;
  char32_t last;
};

// Emoticon, pictograph, transport, supplemental-symbol, dingbat and flag
// blocks plus the joiners and selectors that glue emoji sequences together.
const std::vector<CodepointRange>& DefaultEmojiRanges();

struct PreprocessConfig {
  int max_letter_run = 3;
  bool strip_handles = true;
  bool strip_punct = true;
  bool strip_emoji = true;
  bool lowercase = false;
  std::vector<CodepointRange> emoji_ranges = DefaultEmojiRanges();

  // Throws Error when max_letter_run < 1.
  void Validate() const;
};

bool IsEmoji(char32_t c, const PreprocessConfig& cfg);
// Unicode general category P*, apostrophes included.
bool IsPunctuation(char32_t c);
// U+0027 and U+2019, the two forms tweets use inside contractions.
bool IsApostrophe(char32_t c);

// Total on valid UTF-8; invalid byte sequences are dropped. Idempotent.
std::string Normalize(std::string_view text, const PreprocessConfig& cfg = {});

// Splits on Unicode whitespace; never yields empty tokens.
std::vector<std::string> Tokenize(std::string_view cleaned);

// UTF-8 helpers shared with the feature extractor.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);
std::string LowercaseUtf8(std::string_view text);

}  // namespace aaetag

#endif  // AAETAG_PREPROCESS_H_
