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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "ctag/error.hpp"
#include "ctag/xml.hpp"

using namespace ctag;
using xml::Event;
using xml::EventType;

namespace {

struct Flat {
  EventType type;
  std::string name_or_text;
};

std::vector<Flat> pull_all(const std::string& doc) {
  std::istringstream in(doc);
  xml::Reader reader(in);
  std::vector<Flat> out;
  Event ev;
  while (reader.next(ev)) {
    out.push_back({ev.type, ev.type == EventType::kText ? ev.text : ev.name});
  }
  return out;
}

void expect_throw(const std::string& doc) {
  CHECK_THROWS_AS(pull_all(doc), InputError);
}

}  // namespace

TEST_SUITE("xml") {

TEST_CASE("element, text and end events in document order") {
  const auto events = pull_all("<a><b>hi</b><c/></a>");
  REQUIRE(events.size() == 6);
  CHECK(events[0].type == EventType::kStartElement);
  CHECK(events[0].name_or_text == "a");
  CHECK(events[1].name_or_text == "b");
  CHECK(events[2].type == EventType::kText);
  CHECK(events[2].name_or_text == "hi");
  CHECK(events[3].type == EventType::kEndElement);
  CHECK(events[3].name_or_text == "b");
  CHECK(events[4].type == EventType::kStartElement);
  CHECK(events[4].name_or_text == "c");
  CHECK(events[5].type == EventType::kEndElement);
  CHECK(events[5].name_or_text == "a");
}

TEST_CASE("self-closing elements are flagged") {
  std::istringstream in("<a><b x='1'/></a>");
  xml::Reader reader(in);
  Event ev;
  REQUIRE(reader.next(ev));  // <a>
  CHECK_FALSE(ev.self_closing);
  REQUIRE(reader.next(ev));  // <b/>
  CHECK(ev.self_closing);
  REQUIRE(ev.attributes.size() == 1);
  CHECK(ev.attributes[0].name == "x");
  CHECK(ev.attributes[0].value == "1");
  REQUIRE(reader.next(ev));  // </a>
  CHECK(ev.type == EventType::kEndElement);
  CHECK_FALSE(reader.next(ev));
  CHECK_FALSE(reader.next(ev));  // stays exhausted
}

TEST_CASE("attributes with both quote styles and entities") {
  std::istringstream in(
      R"(<page a="x &amp; y" b='say &quot;hi&quot;'></page>)");
  xml::Reader reader(in);
  Event ev;
  REQUIRE(reader.next(ev));
  REQUIRE(ev.attributes.size() == 2);
  CHECK(ev.attributes[0].value == "x & y");
  CHECK(ev.attributes[1].value == "say \"hi\"");
}

TEST_CASE("predefined and numeric entities decode in text") {
  const auto events =
      pull_all("<t>&lt;tag&gt; &amp; &apos;q&apos; &quot;x&quot;</t>");
  REQUIRE(events.size() == 3);
  CHECK(events[1].name_or_text == "<tag> & 'q' \"x\"");

  const auto numeric = pull_all("<t>&#233;&#xE9;&#x2013;</t>");
  CHECK(numeric[1].name_or_text == "éé–");
}

TEST_CASE("CDATA, comments and processing instructions") {
  const auto events = pull_all(
      "<?xml version=\"1.0\"?><!-- note --><r><![CDATA[a <raw> & b]]>"
      "<!-- inner --></r>");
  REQUIRE(events.size() == 3);
  CHECK(events[1].type == EventType::kText);
  CHECK(events[1].name_or_text == "a <raw> & b");
}

TEST_CASE("whitespace-only gaps between elements are skipped") {
  const auto events = pull_all("<a>\n  <b> x </b>\n</a>");
  REQUIRE(events.size() == 5);
  CHECK(events[2].type == EventType::kText);
  CHECK(events[2].name_or_text == " x ");
}

TEST_CASE("namespace-prefixed names pass through verbatim") {
  const auto events = pull_all("<dc:description>d</dc:description>");
  CHECK(events[0].name_or_text == "dc:description");
}

TEST_CASE("byte offsets are monotone") {
  std::istringstream in("<a><b>text</b></a>");
  xml::Reader reader(in);
  Event ev;
  std::uint64_t last = 0;
  while (reader.next(ev)) {
    CHECK(ev.byte_offset >= last);
    last = ev.byte_offset;
  }
}

TEST_CASE("malformed documents raise input errors") {
  expect_throw("<a>");                        // EOF inside element
  expect_throw("</a>");                       // close without open
  expect_throw("<a></a></b>");                // extra close
  expect_throw("<a>&unknown;</a>");           // undefined entity
  expect_throw("<a>&amp</a>!");               // unterminated entity
  expect_throw("<a b=c></a>");                // unquoted attribute
  expect_throw("<a b=\"x<y\"></a>");          // '<' in attribute
  expect_throw("text only");                  // data outside root
  expect_throw("");                           // no root element
  expect_throw("<a><![CDATA[x]]</a>");        // unterminated CDATA
  expect_throw("<a>&#xZZ;</a>");              // bad hex reference
  expect_throw("<a>&#9999999999;</a>");       // out-of-range reference
}

}  // TEST_SUITE
