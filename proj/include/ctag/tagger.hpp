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

#ifndef CTAG_TAGGER_HPP_
#define CTAG_TAGGER_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctag/dictionary.hpp"
#include "ctag/ingest.hpp"
#include "ctag/textnorm.hpp"

namespace ctag::tagger {

// The distinct dictionary phrases found in one document. Presence
// semantics: five occurrences of a phrase still yield one tag.
struct TagAssignment {
  std::string doc_id;
  std::vector<textnorm::StemKey> tags;  // unique, bytewise sorted

  bool operator==(const TagAssignment&) const = default;
};

// Aho-Corasick matcher over a stem-token alphabet. Compilation interns
// every distinct stem as a dense symbol and builds the classic trie
// with failure and output links, so matching a document costs time
// linear in its stem count plus the number of matches, independent of
// the pattern count. Immutable after compile and safe to share across
// threads.
class PhraseAutomaton {
 public:
  static PhraseAutomaton compile(const dictionary::Dictionary& dict);

  dictionary::Source source() const { return source_; }
  std::size_t pattern_count() const { return patterns_.size(); }

  // Trie nodes allocated; bounded by total stems across patterns + 1,
  // which is what makes memory linear in dictionary size.
  std::size_t node_count() const { return nodes_.size(); }

  // All patterns occurring contiguously in `stems`, including nested
  // and overlapping ones, de-duplicated and bytewise sorted.
  std::vector<textnorm::StemKey> match(
      std::span<const std::string> stems) const;

  TagAssignment tag_document(const ingest::Document& doc) const;

 private:
  struct Node {
    std::int32_t fail = 0;
    std::int32_t output_link = -1;  // nearest proper-suffix pattern node
    std::int32_t pattern = -1;      // pattern ending exactly here
    std::unordered_map<std::int32_t, std::int32_t> next;
  };

  std::int32_t transition(std::int32_t state, std::int32_t symbol) const;

  dictionary::Source source_ = dictionary::Source::kWiki;
  std::unordered_map<std::string, std::int32_t> symbols_;
  std::vector<Node> nodes_;
  std::vector<textnorm::StemKey> patterns_;  // bytewise sorted
};

// One TagAssignment per input document, in input order; the result is
// identical for any worker count.
std::vector<TagAssignment> tag_corpus(std::span<const ingest::Document> docs,
                                      const PhraseAutomaton& automaton,
                                      unsigned workers = 1);

// Assignment TSV: header `#corpus-tagger-assign v1 <source>`, one
// `doc_id<TAB>source<TAB>stem_key` row per (document, tag) in document
// order with keys bytewise sorted inside a document, then a trailing
// `#count <rows>` line. Documents without tags produce no rows.
void write_assignments(const std::filesystem::path& path,
                       std::span<const TagAssignment> assignments,
                       dictionary::Source source);

struct AssignmentFile {
  dictionary::Source source = dictionary::Source::kWiki;
  std::vector<TagAssignment> assignments;  // only documents with tags
};

AssignmentFile read_assignments(const std::filesystem::path& path);

}  // namespace ctag::tagger

#endif  // CTAG_TAGGER_HPP_
