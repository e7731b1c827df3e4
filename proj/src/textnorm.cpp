// Copyright 2026 The corpus-tagger Authors.
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

#include "ctag/textnorm.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>

#include "ctag/error.hpp"
#include "ctag/unicode_tables.hpp"

namespace ctag::textnorm {
namespace {

bool in_intervals(const uni::Interval* table, int count, char32_t cp) {
  int lo = 0, hi = count - 1;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    if (cp < table[mid].lo) {
      hi = mid - 1;
    } else if (cp > table[mid].hi) {
      lo = mid + 1;
    } else {
      return true;
    }
  }
  return false;
}

// Appends the lowercase expansion of cp. BMP code points use the
// generated fold table; the rest map to themselves.
void append_folded(char32_t cp, std::u32string& out) {
  int lo = 0, hi = uni::kFoldTableCount - 1;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    if (cp < uni::kFoldTable[mid].from) {
      hi = mid - 1;
    } else if (cp > uni::kFoldTable[mid].from) {
      lo = mid + 1;
    } else {
      for (char32_t c : uni::kFoldTable[mid].to) {
        if (c != 0) out.push_back(c);
      }
      return;
    }
  }
  out.push_back(cp);
}

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one UTF-8 sequence starting at i; advances i past it. Returns
// kInvalid (advancing one byte) on malformed input.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kInvalid;
  }
  if (i + len > s.size()) {
    ++i;
    return kInvalid;
  }
  for (int j = 1; j < len; ++j) {
    unsigned char b = static_cast<unsigned char>(s[i + j]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong encodings and surrogates are malformed.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && cp < 0x10000) || (cp >= 0xD800 && cp <= 0xDFFF) ||
      cp > 0x10FFFF) {
    ++i;
    return kInvalid;
  }
  i += len;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

bool is_word_codepoint(char32_t cp) {
  if (cp == kInvalid) return false;
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9');
  }
  if (cp > 0xFFFF) return true;  // astral plane: keep as letters
  return in_intervals(uni::kLetterIntervals, uni::kLetterIntervalsCount, cp) ||
         in_intervals(uni::kDigitIntervals, uni::kDigitIntervalsCount, cp);
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::u32string surface, lower;
  auto flush = [&] {
    if (surface.empty()) return;
    Token t;
    for (char32_t c : surface) encode_utf8(c, t.surface);
    for (char32_t c : lower) encode_utf8(c, t.lower);
    tokens.push_back(std::move(t));
    surface.clear();
    lower.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = decode_utf8(text, i);
    if (is_word_codepoint(cp)) {
      surface.push_back(cp);
      append_folded(cp, lower);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::string fold_case(std::string_view word) {
  std::u32string folded;
  std::size_t i = 0;
  while (i < word.size()) {
    char32_t cp = decode_utf8(word, i);
    if (cp == kInvalid) continue;
    append_folded(cp, folded);
  }
  std::string out;
  for (char32_t c : folded) encode_utf8(c, out);
  return out;
}

StemKey StemKey::from_joined(std::string joined) {
  StemKey k;
  k.joined_ = std::move(joined);
  return k;
}

StemKey StemKey::from_stems(const std::vector<std::string>& stems) {
  StemKey k;
  for (const auto& s : stems) {
    if (s.empty()) throw InternalError("stem key with empty stem");
    if (!k.joined_.empty()) k.joined_.push_back(' ');
    k.joined_ += s;
  }
  return k;
}

std::vector<std::string> StemKey::stems() const {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= joined_.size() && !joined_.empty()) {
    std::size_t sp = joined_.find(' ', start);
    if (sp == std::string::npos) {
      out.push_back(joined_.substr(start));
      break;
    }
    out.push_back(joined_.substr(start, sp - start));
    start = sp + 1;
  }
  return out;
}

std::size_t StemKey::size() const {
  if (joined_.empty()) return 0;
  return static_cast<std::size_t>(
             std::count(joined_.begin(), joined_.end(), ' ')) +
         1;
}

std::ostream& operator<<(std::ostream& os, const StemKey& key) {
  return os << key.joined();
}

StemKey stem_key(std::span<const Token> tokens) {
  if (tokens.empty()) throw InternalError("stem_key over empty token list");
  std::string joined;
  for (const Token& t : tokens) {
    if (!joined.empty()) joined.push_back(' ');
    joined += porter_stem(t.lower);
  }
  return StemKey::from_joined(std::move(joined));
}

StopwordList StopwordList::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open stopword file: " + path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return parse(content);
}

StopwordList StopwordList::parse(std::string_view content) {
  StopwordList list;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    list.entries_.insert(fold_case(line));
  }
  return list;
}

StopwordList StopwordList::from_words(const std::vector<std::string>& words) {
  StopwordList list;
  for (const auto& w : words) list.entries_.insert(fold_case(w));
  return list;
}

bool StopwordList::contains(std::string_view lower_word) const {
  return entries_.count(std::string(lower_word)) > 0;
}

}  // namespace ctag::textnorm
