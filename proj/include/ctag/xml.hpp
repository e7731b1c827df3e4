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

#ifndef CTAG_XML_HPP_
#define CTAG_XML_HPP_

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ctag::xml {

// Streaming pull parser for the XML subset that record dumps use:
// elements, attributes, character data, CDATA, comments, processing
// instructions and numeric/predefined entities. It keeps only the
// current event in memory, so input size does not matter. Anything
// malformed raises ctag::InputError carrying the byte offset.
//
// Not supported (rejected or ignored as noted): DTD-defined entities
// (rejected), element content validation (none - this is a tokenizer).

struct Attribute {
  std::string name;
  std::string value;
};

enum class EventType { kStartElement, kEndElement, kText, kEof };

struct Event {
  EventType type = EventType::kEof;
  std::string name;                   // element name for Start/End
  std::string text;                   // decoded character data for kText
  std::vector<Attribute> attributes;  // kStartElement only
  bool self_closing = false;          // <name/> start events
  std::uint64_t byte_offset = 0;      // where the event started
};

class Reader {
 public:
  explicit Reader(std::istream& in);

  // Fills `ev` with the next event; returns false once (and after) the
  // document ended. Whitespace-only text between elements is skipped;
  // other text is delivered verbatim with entities decoded.
  bool next(Event& ev);

  std::uint64_t byte_offset() const { return offset_; }

 private:
  int peek();
  int get();
  void expect(char c);
  void skip_until(std::string_view lit);
  std::string read_name();
  std::string read_entity();
  std::string read_attr_value();
  void parse_markup(Event& ev);  // after '<' was consumed
  [[noreturn]] void fail(const std::string& what) const;

  std::istream& in_;
  std::uint64_t offset_ = 0;  // bytes consumed so far
  bool done_ = false;
  int depth_ = 0;
  bool seen_root_ = false;
};

}  // namespace ctag::xml

#endif  // CTAG_XML_HPP_
