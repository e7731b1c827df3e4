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

#ifndef CTAG_TEXTNORM_HPP_
#define CTAG_TEXTNORM_HPP_

#include <compare>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ctag::textnorm {

// One word as it appeared in the text plus its case-folded form.
// Tokens never contain whitespace and are never empty.
struct Token {
  std::string surface;
  std::string lower;

  bool operator==(const Token&) const = default;
};

// Splits on every code point that is not a letter or digit, so hyphens,
// apostrophes and all punctuation act as separators. Non-ASCII letters
// are kept and case-folded; invalid UTF-8 bytes act as separators.
std::vector<Token> tokenize(std::string_view text);

// Case-folds one already-tokenized word (simple lowercase mapping).
std::string fold_case(std::string_view word);

bool is_word_codepoint(char32_t cp);

// Porter (1980) stemmer, the variant distributed by its author (the one
// the reference vocabulary/output pairs validate). Expects a lowercase
// word; code points outside a-z are treated as consonants. Words of
// length <= 2 come back unchanged.
std::string porter_stem(std::string_view word);

// Ordered sequence of Porter stems identifying a phrase up to
// inflection. Stored as the stems joined by single spaces, which is
// also the serialized form; comparisons are bytewise on that string.
class StemKey {
 public:
  StemKey() = default;
  static StemKey from_joined(std::string joined);
  static StemKey from_stems(const std::vector<std::string>& stems);

  const std::string& joined() const { return joined_; }
  std::vector<std::string> stems() const;
  std::size_t size() const;  // number of stems
  bool empty() const { return joined_.empty(); }

  auto operator<=>(const StemKey&) const = default;

 private:
  std::string joined_;
};

std::ostream& operator<<(std::ostream& os, const StemKey& key);

// Stems every token's lower form, preserving order. Rejects an empty
// token list.
StemKey stem_key(std::span<const Token> tokens);

// Lowercase word set loaded from a one-word-per-line UTF-8 file
// ('#' starts a comment line). "of" is a member like any other
// stopword; the cleaning exception for it lives in the dictionary
// module.
class StopwordList {
 public:
  StopwordList() = default;
  static StopwordList load(const std::string& path);
  // Same line format as load, from an in-memory buffer (used for the
  // compiled-in default list).
  static StopwordList parse(std::string_view content);
  static StopwordList from_words(const std::vector<std::string>& words);

  bool contains(std::string_view lower_word) const;
  bool contains_of() const { return contains("of"); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

}  // namespace ctag::textnorm

namespace std {
template <>
struct hash<ctag::textnorm::StemKey> {
  size_t operator()(const ctag::textnorm::StemKey& k) const {
    return hash<string>()(k.joined());
  }
};
}  // namespace std

#endif  // CTAG_TEXTNORM_HPP_
