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

#include "aaetag/preprocess.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "aaetag/error.h"

namespace aaetag {

namespace {

bool IsSpace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool IsLetter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

void SqueezeLetterRuns(std::u32string& token, int max_run) {
  std::u32string out;
  out.reserve(token.size());
  int run = 0;
  for (size_t i = 0; i < token.size(); ++i) {
    char32_t c = token[i];
    run = (i > 0 && c == token[i - 1]) ? run + 1 : 1;
    if (IsLetter(c) && run > max_run) continue;
    out.push_back(c);
  }
  token.swap(out);
}

void TrimApostrophes(std::u32string& token) {
  size_t begin = 0;
  size_t end = token.size();
  while (begin < end && IsApostrophe(token[begin])) ++begin;
  while (end > begin && IsApostrophe(token[end - 1])) --end;
  token = token.substr(begin, end - begin);
}

}  // namespace

const std::vector<CodepointRange>& DefaultEmojiRanges() {
  static const std::vector<CodepointRange> kRanges = {
      {0x1F600, 0x1F64F},  // emoticons
      {0x1F300, 0x1F5FF},  // misc symbols and pictographs, skin tones
      {0x1F680, 0x1F6FF},  // transport and map
      {0x1F900, 0x1F9FF},  // supplemental symbols and pictographs
      {0x1FA70, 0x1FAFF},  // symbols and pictographs extended-A
      {0x1F1E6, 0x1F1FF},  // regional indicators (flags)
      {0x2600, 0x26FF},    // misc symbols
      {0x2700, 0x27BF},    // dingbats
      {0xFE00, 0xFE0F},    // variation selectors
      {0x200D, 0x200D},    // zero width joiner
      {0x20E3, 0x20E3},    // combining enclosing keycap
      {0xE0020, 0xE007F},  // tag characters (subdivision flags)
  };
  return kRanges;
}

void PreprocessConfig::Validate() const {
  if (max_letter_run < 1) throw Error("max_letter_run must be >= 1");
}

bool IsEmoji(char32_t c, const PreprocessConfig& cfg) {
  for (const auto& r : cfg.emoji_ranges) {
    if (c >= r.first && c <= r.last) return true;
  }
  return false;
}

bool IsPunctuation(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_P_MASK) != 0;
}

bool IsApostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  int32_t i = 0;
  const auto length = static_cast<int32_t>(text.size());
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c >= 0) out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (!error) out.append(reinterpret_cast<const char*>(buf), n);
  }
  return out;
}

std::string LowercaseUtf8(std::string_view text) {
  std::u32string cps = DecodeUtf8(text);
  for (auto& c : cps) {
    c = static_cast<char32_t>(
        u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
  }
  return EncodeUtf8(cps);
}

std::string Normalize(std::string_view text, const PreprocessConfig& cfg) {
  cfg.Validate();
  std::u32string cps = DecodeUtf8(text);
  if (cfg.lowercase) {
    for (auto& c : cps) {
      c = static_cast<char32_t>(
          u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
    }
  }

  std::u32string out;
  size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && IsSpace(cps[i])) ++i;
    size_t begin = i;
    while (i < cps.size() && !IsSpace(cps[i])) ++i;
    if (begin == i) break;

    // Emoji go first so that an emoji-prefixed handle is still a handle.
    std::u32string token;
    for (size_t j = begin; j < i; ++j) {
      if (!(cfg.strip_emoji && IsEmoji(cps[j], cfg))) token.push_back(cps[j]);
    }
    if (cfg.strip_handles && !token.empty() && token[0] == U'@') continue;
    if (cfg.strip_punct) {
      std::u32string kept;
      for (char32_t c : token) {
        if (!IsPunctuation(c) || IsApostrophe(c)) kept.push_back(c);
      }
      token.swap(kept);
      TrimApostrophes(token);
    }
    SqueezeLetterRuns(token, cfg.max_letter_run);
    if (token.empty()) continue;
    if (!out.empty()) out.push_back(U' ');
    out += token;
  }
  return EncodeUtf8(out);
}

std::vector<std::string> Tokenize(std::string_view cleaned) {
  std::vector<std::string> tokens;
  std::u32string cps = DecodeUtf8(cleaned);
  std::u32string current;
  for (char32_t c : cps) {
    if (IsSpace(c)) {
      if (!current.empty()) tokens.push_back(EncodeUtf8(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(EncodeUtf8(current));
  return tokens;
}

}  // namespace aaetag
