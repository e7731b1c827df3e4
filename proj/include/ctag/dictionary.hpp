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

#ifndef CTAG_DICTIONARY_HPP_
#define CTAG_DICTIONARY_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctag/ingest.hpp"
#include "ctag/textnorm.hpp"

namespace ctag::dictionary {

enum class Source { kWiki, kNp };

std::string_view source_name(Source source);      // "WIKI" | "NP"
Source parse_source(std::string_view name);

struct PhraseEntry {
  std::string display;  // lower-cased token sequence joined by spaces
  textnorm::StemKey key;
  Source source = Source::kWiki;
  std::uint64_t doc_frequency = 0;  // 0 sentinel for WIKI entries

  bool operator==(const PhraseEntry&) const = default;
};

// A cleaned, de-duplicated phrase set keyed by StemKey. The first
// entry inserted for a key keeps its display form; later duplicates
// only accumulate doc_frequency. Builders feed entries in first-seen
// order, which makes display forms deterministic.
class Dictionary {
 public:
  explicit Dictionary(Source source) : source_(source) {}

  Source source() const { return source_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool contains(const textnorm::StemKey& key) const;
  const PhraseEntry* find(const textnorm::StemKey& key) const;

  // Returns true when the key was new.
  bool insert_or_merge(PhraseEntry entry);

  // Entries in bytewise stem-key order (the canonical file order).
  std::vector<const PhraseEntry*> sorted_entries() const;
  std::vector<textnorm::StemKey> sorted_keys() const;

 private:
  Source source_;
  std::unordered_map<textnorm::StemKey, PhraseEntry> entries_;
};

// Outcome counters shared by the dictionary builders.
struct BuildCounters {
  std::uint64_t candidates = 0;          // phrases that reached cleaning
  std::uint64_t rejected_short = 0;      // < 2 tokens after stripping
  std::uint64_t rejected_interior = 0;   // interior stopword (not "of")
  std::uint64_t below_min_df = 0;        // NP threshold casualties
  std::uint64_t merged_duplicates = 0;   // stem-key collisions
  std::uint64_t kept = 0;                // distinct keys in the result
};

enum class CleanReason { kKept, kRejectedShort, kRejectedInterior };

struct CleanOutcome {
  std::optional<std::vector<textnorm::Token>> tokens;  // empty on reject
  CleanReason reason = CleanReason::kKept;
};

// The cleaning rule: strip leading stopwords, strip trailing stopwords,
// reject what is left if it is shorter than two tokens or if any
// interior token is a stopword other than "of".
CleanOutcome clean_phrase_detailed(std::span<const textnorm::Token> tokens,
                                   const textnorm::StopwordList& stopwords);

std::optional<std::vector<textnorm::Token>> clean_phrase(
    std::span<const textnorm::Token> tokens,
    const textnorm::StopwordList& stopwords);

Dictionary build_wiki_dictionary(ingest::WikiTitleReader& titles,
                                 const textnorm::StopwordList& stopwords,
                                 BuildCounters* counters = nullptr);

Dictionary build_wiki_dictionary(std::span<const ingest::TitleCandidate> titles,
                                 const textnorm::StopwordList& stopwords,
                                 BuildCounters* counters = nullptr);

enum class NpStrategy { kStopwordChunks, kPosPattern };

std::string_view np_strategy_name(NpStrategy strategy);
NpStrategy parse_np_strategy(std::string_view name);

// Word -> part-of-speech table for the pos-pattern extractor, loaded
// from a `word<TAB>tag` file (tags: noun adjective verb adverb other,
// '#' comments). Words missing from the table fall back to suffix
// rules: -tion/-ment/-ness noun, -ous/-ive/-al adjective, -ly adverb,
// anything else noun.
class PosLexicon {
 public:
  enum class Tag { kNoun, kAdjective, kVerb, kAdverb, kOther };

  static PosLexicon load(const std::filesystem::path& path);
  // Same format as load, from an in-memory buffer; `origin` names the
  // source in error messages.
  static PosLexicon parse(std::string_view content, const std::string& origin);
  static PosLexicon from_pairs(
      const std::vector<std::pair<std::string, Tag>>& pairs);
  static Tag suffix_tag(std::string_view lower_word);

  Tag tag_of(std::string_view lower_word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_map<std::string, Tag> words_;
};

struct NpExtractorConfig {
  NpStrategy strategy = NpStrategy::kStopwordChunks;
  std::uint64_t min_df = 4;
  std::optional<std::filesystem::path> pos_lexicon_path;
};

// Noun-phrase candidates of one document, maximal matches only, each
// with >= 2 tokens, de-duplicated on the lower token sequence in
// first-occurrence order. Strategy stopword-chunks emits maximal runs
// of non-stopword tokens; pos-pattern emits maximal (adjective|noun)*
// noun matches with stopwords acting as boundaries. pos-pattern
// without a lexicon is a configuration error.
std::vector<std::vector<textnorm::Token>> extract_noun_phrases(
    const ingest::Document& doc, const NpExtractorConfig& cfg,
    const textnorm::StopwordList& stopwords, const PosLexicon* lexicon);

// Counts document frequency per raw stem key (a phrase occurring twice
// in one abstract counts once), drops keys below cfg.min_df, then
// cleans the survivors. Sharding across workers changes neither keys,
// nor counts, nor display forms.
Dictionary build_np_dictionary(std::span<const ingest::Document> corpus,
                               const NpExtractorConfig& cfg,
                               const textnorm::StopwordList& stopwords,
                               const PosLexicon* lexicon,
                               unsigned workers = 1,
                               BuildCounters* counters = nullptr);

// Canonical TSV persistence: header `#corpus-tagger-dict v1 <source>`,
// rows `stem_key<TAB>display<TAB>doc_frequency` sorted bytewise by
// stem key. Reading validates the header, ordering and per-line shape
// and reports offending line numbers.
void write_dictionary(const Dictionary& dict,
                      const std::filesystem::path& path);
Dictionary read_dictionary(const std::filesystem::path& path);

}  // namespace ctag::dictionary

#endif  // CTAG_DICTIONARY_HPP_
