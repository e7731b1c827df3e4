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

// Porter (1980) suffix-stripping stemmer. This follows the variant the
// author distributed (the one validated by the public vocabulary/output
// pairs), which differs from the journal text in step 2: "bli" stands
// in for "abli" and the rule "logi" -> "log" is present.
//
// The word is processed as a code point sequence so that multi-byte
// UTF-8 letters count as single (consonant) positions.

#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "ctag/textnorm.hpp"

namespace ctag::textnorm {
namespace {

class Stemmer {
 public:
  explicit Stemmer(std::u32string word) : b_(std::move(word)) {
    k_ = static_cast<int>(b_.size()) - 1;
  }

  std::u32string run() {
    if (k_ > 1) {  // length <= 2 is left unchanged
      step1ab();
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    b_.resize(static_cast<std::size_t>(k_) + 1);
    return std::move(b_);
  }

 private:
  bool cons(int i) const {
    switch (b_[static_cast<std::size_t>(i)]) {
      case U'a': case U'e': case U'i': case U'o': case U'u':
        return false;
      case U'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of consonant-vowel sequences in [0, j_].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool doublec(int j) const {
    if (j < 1) return false;
    if (b_[static_cast<std::size_t>(j)] != b_[static_cast<std::size_t>(j - 1)])
      return false;
    return cons(j);
  }

  // consonant-vowel-consonant at i-2..i, final consonant not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    char32_t ch = b_[static_cast<std::size_t>(i)];
    return ch != U'w' && ch != U'x' && ch != U'y';
  }

  bool ends(const char* s) {
    int len = static_cast<int>(std::strlen(s));
    if (len > k_ + 1) return false;
    for (int i = 0; i < len; ++i) {
      if (b_[static_cast<std::size_t>(k_ - len + 1 + i)] !=
          static_cast<char32_t>(s[i]))
        return false;
    }
    j_ = k_ - len;
    return true;
  }

  void setto(const char* s) {
    int len = static_cast<int>(std::strlen(s));
    b_.resize(static_cast<std::size_t>(j_ + len) + 1);
    for (int i = 0; i < len; ++i) {
      b_[static_cast<std::size_t>(j_ + 1 + i)] = static_cast<char32_t>(s[i]);
    }
    k_ = j_ + len;
  }

  void r(const char* s) {
    if (m() > 0) setto(s);
  }

  char32_t at(int i) const { return b_[static_cast<std::size_t>(i)]; }

  void step1ab() {
    if (at(k_) == U's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        setto("i");
      } else if (at(k_ - 1) != U's') {
        --k_;
      }
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        setto("ate");
      } else if (ends("bl")) {
        setto("ble");
      } else if (ends("iz")) {
        setto("ize");
      } else if (doublec(k_)) {
        --k_;
        char32_t ch = at(k_);
        if (ch == U'l' || ch == U's' || ch == U'z') ++k_;
      } else {
        j_ = k_;
        if (m() == 1 && cvc(k_)) setto("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = U'i';
  }

  void step2() {
    if (k_ < 1) return;
    switch (at(k_ - 1)) {
      case U'a':
        if (ends("ational")) { r("ate"); break; }
        if (ends("tional")) { r("tion"); break; }
        break;
      case U'c':
        if (ends("enci")) { r("ence"); break; }
        if (ends("anci")) { r("ance"); break; }
        break;
      case U'e':
        if (ends("izer")) { r("ize"); break; }
        break;
      case U'l':
        if (ends("bli")) { r("ble"); break; }
        if (ends("alli")) { r("al"); break; }
        if (ends("entli")) { r("ent"); break; }
        if (ends("eli")) { r("e"); break; }
        if (ends("ousli")) { r("ous"); break; }
        break;
      case U'o':
        if (ends("ization")) { r("ize"); break; }
        if (ends("ation")) { r("ate"); break; }
        if (ends("ator")) { r("ate"); break; }
        break;
      case U's':
        if (ends("alism")) { r("al"); break; }
        if (ends("iveness")) { r("ive"); break; }
        if (ends("fulness")) { r("ful"); break; }
        if (ends("ousness")) { r("ous"); break; }
        break;
      case U't':
        if (ends("aliti")) { r("al"); break; }
        if (ends("iviti")) { r("ive"); break; }
        if (ends("biliti")) { r("ble"); break; }
        break;
      case U'g':
        if (ends("logi")) { r("log"); break; }
        break;
      default:
        break;
    }
  }

  void step3() {
    switch (at(k_)) {
      case U'e':
        if (ends("icate")) { r("ic"); break; }
        if (ends("ative")) { r(""); break; }
        if (ends("alize")) { r("al"); break; }
        break;
      case U'i':
        if (ends("iciti")) { r("ic"); break; }
        break;
      case U'l':
        if (ends("ical")) { r("ic"); break; }
        if (ends("ful")) { r(""); break; }
        break;
      case U's':
        if (ends("ness")) { r(""); break; }
        break;
      default:
        break;
    }
  }

  void step4() {
    if (k_ < 1) return;
    switch (at(k_ - 1)) {
      case U'a':
        if (ends("al")) break;
        return;
      case U'c':
        if (ends("ance")) break;
        if (ends("ence")) break;
        return;
      case U'e':
        if (ends("er")) break;
        return;
      case U'i':
        if (ends("ic")) break;
        return;
      case U'l':
        if (ends("able")) break;
        if (ends("ible")) break;
        return;
      case U'n':
        if (ends("ant")) break;
        if (ends("ement")) break;
        if (ends("ment")) break;
        if (ends("ent")) break;
        return;
      case U'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == U's' || at(j_) == U't')) break;
        if (ends("ou")) break;
        return;
      case U's':
        if (ends("ism")) break;
        return;
      case U't':
        if (ends("ate")) break;
        if (ends("iti")) break;
        return;
      case U'u':
        if (ends("ous")) break;
        return;
      case U'v':
        if (ends("ive")) break;
        return;
      case U'z':
        if (ends("ize")) break;
        return;
      default:
        return;
    }
    if (m() > 1) k_ = j_;
  }

  void step5() {
    j_ = k_;
    if (at(k_) == U'e') {
      int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == U'l' && doublec(k_) && m() > 1) --k_;
  }

  std::u32string b_;
  int k_ = -1;
  int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  std::u32string cps;
  cps.reserve(word.size());
  std::size_t i = 0;
  while (i < word.size()) {
    unsigned char b0 = static_cast<unsigned char>(word[i]);
    if (b0 < 0x80) {
      cps.push_back(b0);
      ++i;
      continue;
    }
    // Multi-byte sequence: decode leniently, one code point per unit.
    int len = (b0 & 0xE0) == 0xC0 ? 2 : (b0 & 0xF0) == 0xE0 ? 3
              : (b0 & 0xF8) == 0xF0 ? 4 : 1;
    char32_t cp = 0;
    if (len == 1 || i + static_cast<std::size_t>(len) > word.size()) {
      cp = 0xFFFD;
      len = 1;
    } else {
      cp = b0 & (0xFF >> (len + 1));
      for (int j = 1; j < len; ++j) {
        cp = (cp << 6) |
             (static_cast<unsigned char>(word[i + static_cast<std::size_t>(j)]) &
              0x3F);
      }
    }
    cps.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  if (cps.empty()) return std::string();

  std::u32string stemmed = Stemmer(std::move(cps)).run();
  std::string out;
  out.reserve(stemmed.size());
  for (char32_t cp : stemmed) {
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
  return out;
}

}  // namespace ctag::textnorm
