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

#include "ctag/dictionary.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>
#include <utility>

#include "ctag/error.hpp"
#include "ctag/parallel.hpp"
#include "ctag/util.hpp"

namespace ctag::dictionary {

namespace {

std::string join_lower(std::span<const textnorm::Token> tokens) {
  std::string out;
  for (const textnorm::Token& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.lower;
  }
  return out;
}

}  // namespace

std::string_view source_name(Source source) {
  return source == Source::kWiki ? "WIKI" : "NP";
}

Source parse_source(std::string_view name) {
  if (name == "WIKI" || name == "wiki") return Source::kWiki;
  if (name == "NP" || name == "np") return Source::kNp;
  throw InputError("unknown dictionary source '" + std::string(name) +
                   "' (expected wiki or np)");
}

// ---------------------------------------------------------------------------
// Dictionary

bool Dictionary::contains(const textnorm::StemKey& key) const {
  return entries_.find(key) != entries_.end();
}

const PhraseEntry* Dictionary::find(const textnorm::StemKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Dictionary::insert_or_merge(PhraseEntry entry) {
  entry.source = source_;
  std::uint64_t df = entry.doc_frequency;
  textnorm::StemKey key = entry.key;
  auto [it, inserted] = entries_.try_emplace(std::move(key), std::move(entry));
  if (!inserted) {
    it->second.doc_frequency += df;
  }
  return inserted;
}

std::vector<const PhraseEntry*> Dictionary::sorted_entries() const {
  std::vector<const PhraseEntry*> out;
  out.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) out.push_back(&entry);
  std::sort(out.begin(), out.end(), [](const PhraseEntry* a,
                                       const PhraseEntry* b) {
    return a->key < b->key;
  });
  return out;
}

std::vector<textnorm::StemKey> Dictionary::sorted_keys() const {
  std::vector<textnorm::StemKey> out;
  out.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) out.push_back(key);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Cleaning

CleanOutcome clean_phrase_detailed(std::span<const textnorm::Token> tokens,
                                   const textnorm::StopwordList& stopwords) {
  std::size_t begin = 0;
  std::size_t end = tokens.size();
  while (begin < end && stopwords.contains(tokens[begin].lower)) ++begin;
  while (end > begin && stopwords.contains(tokens[end - 1].lower)) --end;

  CleanOutcome outcome;
  if (end - begin < 2) {
    outcome.reason = CleanReason::kRejectedShort;
    return outcome;
  }
  for (std::size_t i = begin + 1; i + 1 < end; ++i) {
    if (tokens[i].lower != "of" && stopwords.contains(tokens[i].lower)) {
      outcome.reason = CleanReason::kRejectedInterior;
      return outcome;
    }
  }
  outcome.reason = CleanReason::kKept;
  outcome.tokens.emplace(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                         tokens.begin() + static_cast<std::ptrdiff_t>(end));
  return outcome;
}

std::optional<std::vector<textnorm::Token>> clean_phrase(
    std::span<const textnorm::Token> tokens,
    const textnorm::StopwordList& stopwords) {
  return clean_phrase_detailed(tokens, stopwords).tokens;
}

// ---------------------------------------------------------------------------
// WIKI builder

namespace {

// Cleans one candidate and merges it into the dictionary; returns
// whether the candidate survived.
bool clean_into(Dictionary& dict, std::span<const textnorm::Token> tokens,
                std::uint64_t doc_frequency,
                const textnorm::StopwordList& stopwords,
                BuildCounters& counters) {
  ++counters.candidates;
  CleanOutcome outcome = clean_phrase_detailed(tokens, stopwords);
  switch (outcome.reason) {
    case CleanReason::kRejectedShort:
      ++counters.rejected_short;
      return false;
    case CleanReason::kRejectedInterior:
      ++counters.rejected_interior;
      return false;
    case CleanReason::kKept:
      break;
  }
  PhraseEntry entry;
  entry.display = join_lower(*outcome.tokens);
  entry.key = textnorm::stem_key(*outcome.tokens);
  entry.doc_frequency = doc_frequency;
  if (!dict.insert_or_merge(std::move(entry))) {
    ++counters.merged_duplicates;
  }
  return true;
}

}  // namespace

Dictionary build_wiki_dictionary(std::span<const ingest::TitleCandidate> titles,
                                 const textnorm::StopwordList& stopwords,
                                 BuildCounters* counters) {
  Dictionary dict(Source::kWiki);
  BuildCounters local;
  for (const ingest::TitleCandidate& cand : titles) {
    clean_into(dict, cand.tokens, 0, stopwords, local);
  }
  local.kept = dict.size();
  if (counters != nullptr) *counters = local;
  return dict;
}

Dictionary build_wiki_dictionary(ingest::WikiTitleReader& titles,
                                 const textnorm::StopwordList& stopwords,
                                 BuildCounters* counters) {
  Dictionary dict(Source::kWiki);
  BuildCounters local;
  while (auto cand = titles.next()) {
    clean_into(dict, cand->tokens, 0, stopwords, local);
  }
  local.kept = dict.size();
  if (counters != nullptr) *counters = local;
  return dict;
}

// ---------------------------------------------------------------------------
// Noun-phrase extraction

std::string_view np_strategy_name(NpStrategy strategy) {
  return strategy == NpStrategy::kStopwordChunks ? "stopword-chunks"
                                                 : "pos-pattern";
}

NpStrategy parse_np_strategy(std::string_view name) {
  if (name == "stopword-chunks") return NpStrategy::kStopwordChunks;
  if (name == "pos-pattern") return NpStrategy::kPosPattern;
  throw InputError("unknown noun-phrase strategy '" + std::string(name) +
                   "' (expected stopword-chunks or pos-pattern)");
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  return parse(util::read_file_to_string(path), path.string());
}

PosLexicon PosLexicon::parse(std::string_view content, const std::string& origin) {
  PosLexicon lex;
  std::uint64_t line_no = 0;
  for (std::string_view line : util::split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto cols = util::split(line, '\t');
    if (cols.size() != 2 || cols[0].empty()) {
      throw InputError(origin + ":" + std::to_string(line_no) +
                       ": expected 'word<TAB>tag'");
    }
    Tag tag;
    if (cols[1] == "noun") tag = Tag::kNoun;
    else if (cols[1] == "adjective") tag = Tag::kAdjective;
    else if (cols[1] == "verb") tag = Tag::kVerb;
    else if (cols[1] == "adverb") tag = Tag::kAdverb;
    else if (cols[1] == "other") tag = Tag::kOther;
    else {
      throw InputError(origin + ":" + std::to_string(line_no) +
                       ": unknown tag '" + std::string(cols[1]) + "'");
    }
    lex.words_[textnorm::fold_case(cols[0])] = tag;
  }
  return lex;
}

PosLexicon PosLexicon::from_pairs(
    const std::vector<std::pair<std::string, Tag>>& pairs) {
  PosLexicon lex;
  for (const auto& [word, tag] : pairs) lex.words_[word] = tag;
  return lex;
}

PosLexicon::Tag PosLexicon::suffix_tag(std::string_view w) {
  auto ends = [&](std::string_view suffix) {
    return w.size() > suffix.size() + 1 && w.ends_with(suffix);
  };
  if (ends("tion") || ends("ment") || ends("ness")) return Tag::kNoun;
  if (ends("ous") || ends("ive") || ends("al")) return Tag::kAdjective;
  if (ends("ly")) return Tag::kAdverb;
  return Tag::kNoun;
}

PosLexicon::Tag PosLexicon::tag_of(std::string_view lower_word) const {
  auto it = words_.find(std::string(lower_word));
  if (it != words_.end()) return it->second;
  return suffix_tag(lower_word);
}

std::vector<std::vector<textnorm::Token>> extract_noun_phrases(
    const ingest::Document& doc, const NpExtractorConfig& cfg,
    const textnorm::StopwordList& stopwords, const PosLexicon* lexicon) {
  if (cfg.strategy == NpStrategy::kPosPattern && lexicon == nullptr) {
    throw InputError("pos-pattern extraction requires a lexicon");
  }

  std::vector<textnorm::Token> tokens = textnorm::tokenize(doc.abstract_text);

  std::vector<std::vector<textnorm::Token>> phrases;
  std::unordered_set<std::string> seen;  // lower joined forms

  auto emit = [&](std::size_t begin, std::size_t end) {
    if (end - begin < 2) return;
    std::span<const textnorm::Token> run(tokens.data() + begin, end - begin);
    std::string joined = join_lower(run);
    if (seen.insert(std::move(joined)).second) {
      phrases.emplace_back(run.begin(), run.end());
    }
  };

  if (cfg.strategy == NpStrategy::kStopwordChunks) {
    std::size_t run_start = 0;
    for (std::size_t i = 0; i <= tokens.size(); ++i) {
      bool boundary =
          i == tokens.size() || stopwords.contains(tokens[i].lower);
      if (boundary) {
        emit(run_start, i);
        run_start = i + 1;
      }
    }
    return phrases;
  }

  // pos-pattern: maximal runs of adjective/noun tokens (stopwords act
  // as boundaries), then trailing adjectives are trimmed so every
  // emitted match satisfies (adjective|noun)* noun.
  auto phrasal = [&](const textnorm::Token& t) {
    if (stopwords.contains(t.lower)) return false;
    PosLexicon::Tag tag = lexicon->tag_of(t.lower);
    return tag == PosLexicon::Tag::kNoun || tag == PosLexicon::Tag::kAdjective;
  };
  std::size_t run_start = 0;
  for (std::size_t i = 0; i <= tokens.size(); ++i) {
    bool boundary = i == tokens.size() || !phrasal(tokens[i]);
    if (boundary) {
      std::size_t end = i;
      while (end > run_start &&
             lexicon->tag_of(tokens[end - 1].lower) !=
                 PosLexicon::Tag::kNoun) {
        --end;
      }
      emit(run_start, end);
      run_start = i + 1;
    }
  }
  return phrases;
}

// ---------------------------------------------------------------------------
// NP builder

namespace {

struct RawAggregate {
  std::uint64_t doc_frequency = 0;
  // First sighting, as (document index, candidate ordinal); the merge
  // across shards keeps the lexicographically smallest, which equals
  // the sequential first-seen order.
  std::uint64_t first_doc = 0;
  std::uint32_t first_ordinal = 0;
  std::vector<std::string> display_lowers;

  bool earlier_than(std::uint64_t doc, std::uint32_t ord) const {
    return first_doc < doc || (first_doc == doc && first_ordinal <= ord);
  }
};

using RawMap = std::unordered_map<textnorm::StemKey, RawAggregate>;

}  // namespace

Dictionary build_np_dictionary(std::span<const ingest::Document> corpus,
                               const NpExtractorConfig& cfg,
                               const textnorm::StopwordList& stopwords,
                               const PosLexicon* lexicon, unsigned workers,
                               BuildCounters* counters) {
  if (cfg.min_df < 1) throw InputError("min_df must be >= 1");
  if (cfg.strategy == NpStrategy::kPosPattern && lexicon == nullptr) {
    throw InputError("pos-pattern extraction requires a lexicon");
  }

  unsigned n_workers = parallel::effective_workers(workers);
  std::vector<RawMap> shard_maps(std::max(1u, n_workers));

  parallel::for_shards(
      corpus.size(), n_workers,
      [&](unsigned shard, std::size_t begin, std::size_t end) {
        RawMap& map = shard_maps[shard];
        for (std::size_t d = begin; d < end; ++d) {
          auto phrases = extract_noun_phrases(corpus[d], cfg, stopwords,
                                              lexicon);
          // Distinct stem keys per document; extraction already
          // de-duplicated identical lower sequences, but two different
          // sequences can share a stem key.
          std::unordered_set<textnorm::StemKey> in_doc;
          for (std::size_t ord = 0; ord < phrases.size(); ++ord) {
            textnorm::StemKey key = textnorm::stem_key(phrases[ord]);
            if (!in_doc.insert(key).second) continue;
            auto [it, inserted] = map.try_emplace(std::move(key));
            RawAggregate& agg = it->second;
            ++agg.doc_frequency;
            if (inserted ||
                !agg.earlier_than(d, static_cast<std::uint32_t>(ord))) {
              agg.first_doc = d;
              agg.first_ordinal = static_cast<std::uint32_t>(ord);
              agg.display_lowers.clear();
              agg.display_lowers.reserve(phrases[ord].size());
              for (const textnorm::Token& t : phrases[ord]) {
                agg.display_lowers.push_back(t.lower);
              }
            }
          }
        }
      });

  // Merge shard maps (order-insensitive: counts add up, the earliest
  // sighting wins the display form).
  RawMap merged = std::move(shard_maps[0]);
  for (std::size_t s = 1; s < shard_maps.size(); ++s) {
    for (auto& [key, agg] : shard_maps[s]) {
      auto [it, inserted] = merged.try_emplace(key, std::move(agg));
      if (!inserted) {
        RawAggregate& dst = it->second;
        dst.doc_frequency += agg.doc_frequency;
        if (!dst.earlier_than(agg.first_doc, agg.first_ordinal)) {
          dst.first_doc = agg.first_doc;
          dst.first_ordinal = agg.first_ordinal;
          dst.display_lowers = std::move(agg.display_lowers);
        }
      }
    }
  }

  BuildCounters local;

  // Threshold, then clean the survivors in first-seen order so that
  // display forms of colliding cleaned keys are deterministic.
  std::vector<const RawMap::value_type*> survivors;
  survivors.reserve(merged.size());
  for (const auto& kv : merged) {
    if (kv.second.doc_frequency < cfg.min_df) {
      ++local.below_min_df;
      continue;
    }
    survivors.push_back(&kv);
  }
  std::sort(survivors.begin(), survivors.end(),
            [](const RawMap::value_type* a, const RawMap::value_type* b) {
              const RawAggregate& x = a->second;
              const RawAggregate& y = b->second;
              if (x.first_doc != y.first_doc) return x.first_doc < y.first_doc;
              if (x.first_ordinal != y.first_ordinal) {
                return x.first_ordinal < y.first_ordinal;
              }
              return a->first < b->first;
            });

  Dictionary dict(Source::kNp);
  for (const RawMap::value_type* kv : survivors) {
    std::vector<textnorm::Token> tokens;
    tokens.reserve(kv->second.display_lowers.size());
    for (const std::string& lower : kv->second.display_lowers) {
      tokens.push_back(textnorm::Token{lower, lower});
    }
    clean_into(dict, tokens, kv->second.doc_frequency, stopwords, local);
  }
  local.kept = dict.size();
  if (counters != nullptr) *counters = local;
  return dict;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr std::string_view kDictMagic = "#corpus-tagger-dict";
constexpr std::string_view kDictVersion = "v1";

}  // namespace

void write_dictionary(const Dictionary& dict,
                      const std::filesystem::path& path) {
  std::string out;
  out += kDictMagic;
  out += ' ';
  out += kDictVersion;
  out += ' ';
  out += source_name(dict.source());
  out += '\n';
  for (const PhraseEntry* entry : dict.sorted_entries()) {
    if (!util::tsv_safe(entry->key.joined()) ||
        !util::tsv_safe(entry->display)) {
      throw InternalError("dictionary entry contains TSV separators: '" +
                          entry->display + "'");
    }
    out += entry->key.joined();
    out += '\t';
    out += entry->display;
    out += '\t';
    out += std::to_string(entry->doc_frequency);
    out += '\n';
  }
  util::atomic_write_file(path, out);
}

Dictionary read_dictionary(const std::filesystem::path& path) {
  std::string content = util::read_file_to_string(path);
  auto lines = util::split(content, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  auto fail = [&](std::uint64_t line_no, const std::string& what) -> void {
    throw InputError(path.string() + ":" + std::to_string(line_no) + ": " +
                     what);
  };

  if (lines.empty()) fail(1, "missing dictionary header");
  std::string_view header = lines[0];
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  auto head_cols = util::split(header, ' ');
  if (head_cols.size() != 3 || head_cols[0] != kDictMagic) {
    fail(1, "not a dictionary file (expected '" + std::string(kDictMagic) +
            " " + std::string(kDictVersion) + " <source>')");
  }
  if (head_cols[1] != kDictVersion) {
    fail(1, "unsupported dictionary version '" + std::string(head_cols[1]) +
            "' (expected " + std::string(kDictVersion) + ")");
  }
  Source source = parse_source(head_cols[2]);

  Dictionary dict(source);
  std::string_view prev_key;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::uint64_t line_no = i + 1;
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) fail(line_no, "empty line");
    auto cols = util::split(line, '\t');
    if (cols.size() != 3) {
      fail(line_no, "expected 'stem_key<TAB>display<TAB>doc_frequency'");
    }
    std::string_view key_text = cols[0];
    if (key_text.empty()) fail(line_no, "empty stem key");
    std::vector<std::string> stems;
    for (std::string_view stem : util::split(key_text, ' ')) {
      if (stem.empty()) fail(line_no, "malformed stem key");
      stems.emplace_back(stem);
    }
    if (stems.size() < 2) fail(line_no, "stem key has fewer than 2 stems");
    if (!prev_key.empty() && !(prev_key < key_text)) {
      fail(line_no, "stem keys out of canonical (bytewise sorted) order");
    }
    prev_key = key_text;
    if (cols[1].empty()) fail(line_no, "empty display form");
    std::uint64_t df = 0;
    auto rc = std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(),
                              df);
    if (rc.ec != std::errc{} || rc.ptr != cols[2].data() + cols[2].size()) {
      fail(line_no, "malformed doc_frequency '" + std::string(cols[2]) + "'");
    }

    PhraseEntry entry;
    entry.key = textnorm::StemKey::from_joined(std::string(key_text));
    entry.display = std::string(cols[1]);
    entry.doc_frequency = df;
    dict.insert_or_merge(std::move(entry));
  }
  return dict;
}

}  // namespace ctag::dictionary
