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

#include "ctag/xml.hpp"

#include <cctype>

#include "ctag/error.hpp"

namespace ctag::xml {

namespace {

bool is_name_start(int c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         c >= 0x80;
}

bool is_name_char(int c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '-' || c == '.';
}

bool is_space(int c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
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

Reader::Reader(std::istream& in) : in_(in) {}

void Reader::fail(const std::string& what) const {
  throw InputError("malformed XML at byte " + std::to_string(offset_) + ": " +
                   what);
}

int Reader::peek() { return in_.peek(); }

int Reader::get() {
  int c = in_.get();
  if (c != std::char_traits<char>::eof()) ++offset_;
  return c;
}

void Reader::expect(char c) {
  int got = get();
  if (got != c) {
    fail(std::string("expected '") + c + "'");
  }
}

void Reader::skip_until(std::string_view lit) {
  std::size_t matched = 0;
  while (matched < lit.size()) {
    int c = get();
    if (c == std::char_traits<char>::eof()) fail("unexpected end of input");
    if (c == lit[matched]) {
      ++matched;
    } else {
      matched = (c == lit[0]) ? 1 : 0;
    }
  }
}

std::string Reader::read_name() {
  int c = peek();
  if (!is_name_start(c)) fail("expected a name");
  std::string name;
  while (is_name_char(peek())) {
    name.push_back(static_cast<char>(get()));
  }
  return name;
}

std::string Reader::read_entity() {
  // '&' already consumed.
  std::string ent;
  while (true) {
    int c = get();
    if (c == std::char_traits<char>::eof()) fail("unterminated entity");
    if (c == ';') break;
    ent.push_back(static_cast<char>(c));
    if (ent.size() > 10) fail("entity too long");
  }
  if (ent == "lt") return "<";
  if (ent == "gt") return ">";
  if (ent == "amp") return "&";
  if (ent == "quot") return "\"";
  if (ent == "apos") return "'";
  if (!ent.empty() && ent[0] == '#') {
    std::uint32_t cp = 0;
    bool any = false;
    if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
      for (std::size_t i = 2; i < ent.size(); ++i) {
        char h = ent[i];
        std::uint32_t d = 0;
        if (h >= '0' && h <= '9') d = static_cast<std::uint32_t>(h - '0');
        else if (h >= 'a' && h <= 'f') d = static_cast<std::uint32_t>(h - 'a' + 10);
        else if (h >= 'A' && h <= 'F') d = static_cast<std::uint32_t>(h - 'A' + 10);
        else fail("bad hex character reference");
        cp = cp * 16 + d;
        any = true;
      }
    } else {
      for (std::size_t i = 1; i < ent.size(); ++i) {
        char d = ent[i];
        if (d < '0' || d > '9') fail("bad character reference");
        cp = cp * 10 + static_cast<std::uint32_t>(d - '0');
        any = true;
      }
    }
    if (!any || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      fail("character reference out of range");
    }
    std::string out;
    append_utf8(out, cp);
    return out;
  }
  fail("unknown entity '&" + ent + ";'");
}

std::string Reader::read_attr_value() {
  int quote = get();
  if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
  std::string value;
  while (true) {
    int c = get();
    if (c == std::char_traits<char>::eof()) fail("unterminated attribute");
    if (c == quote) break;
    if (c == '<') fail("'<' inside attribute value");
    if (c == '&') {
      value += read_entity();
    } else {
      value.push_back(static_cast<char>(c));
    }
  }
  return value;
}

void Reader::parse_markup(Event& ev) {
  // '<' was consumed and the next character selects element kind;
  // comments/PI/DOCTYPE/CDATA were already dispatched by next().
  int c = peek();
  if (c == '/') {
    get();
    ev.type = EventType::kEndElement;
    ev.name = read_name();
    while (is_space(peek())) get();
    expect('>');
    if (depth_ == 0) fail("closing tag without matching opening tag");
    --depth_;
    return;
  }
  ev.type = EventType::kStartElement;
  ev.name = read_name();
  while (true) {
    while (is_space(peek())) get();
    int n = peek();
    if (n == '>') {
      get();
      break;
    }
    if (n == '/') {
      get();
      expect('>');
      ev.self_closing = true;
      break;
    }
    if (n == std::char_traits<char>::eof()) fail("unterminated start tag");
    Attribute attr;
    attr.name = read_name();
    while (is_space(peek())) get();
    expect('=');
    while (is_space(peek())) get();
    attr.value = read_attr_value();
    ev.attributes.push_back(std::move(attr));
  }
  seen_root_ = true;
  if (!ev.self_closing) ++depth_;
}

bool Reader::next(Event& ev) {
  while (!done_) {
    ev = Event{};
    ev.byte_offset = offset_;

    int c = peek();
    if (c == std::char_traits<char>::eof()) {
      if (depth_ != 0) fail("unexpected end of input inside an element");
      if (!seen_root_) fail("no root element");
      done_ = true;
      break;
    }

    if (c == '<') {
      get();
      int m = peek();
      if (m == '!') {
        get();
        int k = peek();
        if (k == '-') {
          get();
          expect('-');
          skip_until("-->");
          continue;
        }
        if (k == '[') {
          get();
          for (char ch : std::string_view("CDATA[")) expect(ch);
          if (depth_ == 0) fail("CDATA outside the root element");
          ev.type = EventType::kText;
          std::size_t matched = 0;
          static constexpr std::string_view kEnd = "]]>";
          while (matched < kEnd.size()) {
            int b = get();
            if (b == std::char_traits<char>::eof()) fail("unterminated CDATA");
            if (b == kEnd[matched]) {
              ++matched;
            } else {
              ev.text.append(kEnd.substr(0, matched));
              matched = (b == kEnd[0]) ? 1 : 0;
              if (matched == 0) ev.text.push_back(static_cast<char>(b));
            }
          }
          return true;
        }
        // DOCTYPE and other declarations: skipped, no internal-subset
        // support (none of the handled dump formats carry one).
        skip_until(">");
        continue;
      }
      if (m == '?') {
        get();
        skip_until("?>");
        continue;
      }
      parse_markup(ev);
      return true;
    }

    // Character data up to the next '<'.
    ev.type = EventType::kText;
    bool only_space = true;
    while (true) {
      int b = peek();
      if (b == '<' || b == std::char_traits<char>::eof()) break;
      get();
      if (b == '&') {
        ev.text += read_entity();
        only_space = false;
      } else {
        ev.text.push_back(static_cast<char>(b));
        if (!is_space(b)) only_space = false;
      }
    }
    if (depth_ == 0) {
      if (!only_space) fail("character data outside the root element");
      continue;  // inter-element whitespace
    }
    if (only_space) continue;  // whitespace-only runs between elements
    return true;
  }
  ev = Event{};
  ev.type = EventType::kEof;
  ev.byte_offset = offset_;
  return false;
}

}  // namespace ctag::xml
