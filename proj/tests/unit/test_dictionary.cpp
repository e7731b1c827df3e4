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

#include <json.hpp>
#include <random>
#include <string>
#include <vector>

#include "ctag/dictionary.hpp"
#include "ctag/error.hpp"
#include "ctag/ingest.hpp"
#include "ctag/textnorm.hpp"
#include "test_support.hpp"

using namespace ctag;
using dictionary::BuildCounters;
using dictionary::CleanReason;
using dictionary::Dictionary;
using dictionary::NpExtractorConfig;
using dictionary::NpStrategy;
using dictionary::PhraseEntry;
using dictionary::PosLexicon;
using dictionary::Source;
using ingest::Document;
using test_support::TempDir;
using textnorm::StemKey;
using textnorm::StopwordList;
using textnorm::Token;

namespace {

StopwordList tiny_stopwords() {
  return StopwordList::from_words({"the", "of", "and", "in", "a", "we"});
}

StopwordList default_stopwords() {
  return StopwordList::load(
      test_support::data_file("stopwords_en.txt").string());
}

std::vector<Token> toks(std::string_view text) {
  return textnorm::tokenize(text);
}

std::vector<std::string> lowers(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.lower);
  return out;
}

CleanReason clean_reason(std::string_view phrase, const StopwordList& stops) {
  const auto tokens = toks(phrase);
  return dictionary::clean_phrase_detailed(tokens, stops).reason;
}

Document make_doc(std::string id, std::string text) {
  Document doc;
  doc.id = std::move(id);
  doc.abstract_text = std::move(text);
  return doc;
}

std::vector<Document> fixture_corpus() {
  return ingest::read_corpus(test_support::fixture("mini_corpus.jsonl"),
                             ingest::CorpusFormat::kJsonl,
                             ingest::CategoryTable::builtin());
}

std::string dict_bytes(const Dictionary& dict) {
  TempDir tmp;
  const auto path = tmp.file("dict.tsv");
  dictionary::write_dictionary(dict, path);
  return test_support::slurp(path);
}

nlohmann::json expected_counters() {
  return nlohmann::json::parse(
      test_support::slurp(test_support::golden("expected_counters.json")));
}

void check_build_counters(const BuildCounters& got, const nlohmann::json& want) {
  CHECK(got.candidates == want["candidates"].get<std::uint64_t>());
  CHECK(got.rejected_short == want["rejected_short"].get<std::uint64_t>());
  CHECK(got.rejected_interior ==
        want["rejected_interior"].get<std::uint64_t>());
  CHECK(got.merged_duplicates ==
        want["merged_duplicates"].get<std::uint64_t>());
  CHECK(got.kept == want["entries"].get<std::uint64_t>());
  if (want.contains("below_min_df")) {
    CHECK(got.below_min_df == want["below_min_df"].get<std::uint64_t>());
  }
}

}  // namespace

TEST_SUITE("dictionary") {

TEST_CASE("phrase cleaning keeps, strips and rejects as specified") {
  const auto stops = tiny_stopwords();

  auto kept = dictionary::clean_phrase(toks("the lower bound"), stops);
  REQUIRE(kept.has_value());
  CHECK(lowers(*kept) == std::vector<std::string>{"lower", "bound"});

  kept = dictionary::clean_phrase(toks("theory of fields"), stops);
  REQUIRE(kept.has_value());
  CHECK(lowers(*kept) == std::vector<std::string>{"theory", "of", "fields"});

  CHECK(clean_reason("lower", stops) == CleanReason::kRejectedShort);
  CHECK(clean_reason("in the end", stops) == CleanReason::kRejectedShort);
  CHECK(clean_reason("the of", stops) == CleanReason::kRejectedShort);
  CHECK(clean_reason("", stops) == CleanReason::kRejectedShort);

  CHECK(clean_reason("proof of the theorem", stops) ==
        CleanReason::kRejectedInterior);
  CHECK(clean_reason("state of the art", stops) ==
        CleanReason::kRejectedInterior);
  CHECK(clean_reason("of mice and men", stops) ==
        CleanReason::kRejectedInterior);

  CHECK(clean_reason("heavy ion collisions", stops) == CleanReason::kKept);
  CHECK(clean_reason("the equation of state", stops) == CleanReason::kKept);
}

TEST_CASE("cleaning a kept phrase again is a no-op") {
  const auto stops = default_stopwords();
  const std::vector<std::string> vocab = {
      "the",   "of",       "and",    "in",     "lower", "bounds",
      "field", "theory",   "state",  "art",    "phase", "transitions",
      "a",     "networks", "neural", "energy", "with"};
  std::mt19937 rng(20260814);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(0, 6);
  for (int trial = 0; trial < 500; ++trial) {
    std::string phrase;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      if (!phrase.empty()) phrase += ' ';
      phrase += vocab[pick(rng)];
    }
    const auto first = dictionary::clean_phrase(toks(phrase), stops);
    if (!first.has_value()) continue;
    const auto second = dictionary::clean_phrase(*first, stops);
    CAPTURE(phrase);
    REQUIRE(second.has_value());
    CHECK(lowers(*second) == lowers(*first));
  }
}

TEST_CASE("suffix rules assign fallback part-of-speech tags") {
  using Tag = PosLexicon::Tag;
  CHECK(PosLexicon::suffix_tag("motion") == Tag::kNoun);
  CHECK(PosLexicon::suffix_tag("movement") == Tag::kNoun);
  CHECK(PosLexicon::suffix_tag("darkness") == Tag::kNoun);
  CHECK(PosLexicon::suffix_tag("famous") == Tag::kAdjective);
  CHECK(PosLexicon::suffix_tag("adaptive") == Tag::kAdjective);
  CHECK(PosLexicon::suffix_tag("national") == Tag::kAdjective);
  CHECK(PosLexicon::suffix_tag("clearly") == Tag::kAdverb);
  CHECK(PosLexicon::suffix_tag("network") == Tag::kNoun);
  // Suffix must leave at least two extra characters.
  CHECK(PosLexicon::suffix_tag("al") == Tag::kNoun);
  CHECK(PosLexicon::suffix_tag("ly") == Tag::kNoun);
  CHECK(PosLexicon::suffix_tag("tion") == Tag::kNoun);
  CHECK(PosLexicon::suffix_tag("ion") == Tag::kNoun);
  CHECK(PosLexicon::suffix_tag("pal") == Tag::kNoun);
  CHECK(PosLexicon::suffix_tag("royal") == Tag::kAdjective);
}

TEST_CASE("lexicon entries override suffix rules") {
  const auto lex = PosLexicon::parse("run\tverb\nData\tnoun\nfast\tother\n",
                                     "test-lexicon");
  using Tag = PosLexicon::Tag;
  CHECK(lex.size() == 3);
  CHECK(lex.tag_of("run") == Tag::kVerb);
  CHECK(lex.tag_of("data") == Tag::kNoun);  // folded at parse time
  CHECK(lex.tag_of("fast") == Tag::kOther);
  CHECK(lex.tag_of("unlisted") == Tag::kNoun);     // suffix fallback
  CHECK(lex.tag_of("supportive") == Tag::kAdjective);
}

TEST_CASE("lexicon parse errors carry line numbers") {
  CHECK_THROWS_AS(PosLexicon::parse("word\tnope\n", "x"), InputError);
  CHECK_THROWS_AS(PosLexicon::parse("word noun\n", "x"), InputError);
  CHECK_THROWS_AS(PosLexicon::parse("word\tnoun\textra\n", "x"), InputError);
  CHECK_THROWS_WITH_AS(PosLexicon::parse("ok\tnoun\nbad\tzzz\n", "lex"),
                       "lex:2: unknown tag 'zzz'", InputError);
}

TEST_CASE("stopword chunks are maximal runs, deduplicated per document") {
  const auto stops = tiny_stopwords();
  NpExtractorConfig cfg;
  cfg.strategy = NpStrategy::kStopwordChunks;
  const auto doc = make_doc(
      "d", "The lower bounds and the upper bounds улучшены in the lower "
           "bounds and bound");
  const auto phrases =
      dictionary::extract_noun_phrases(doc, cfg, stops, nullptr);
  REQUIRE(phrases.size() == 2);
  CHECK(lowers(phrases[0]) == std::vector<std::string>{"lower", "bounds"});
  CHECK(lowers(phrases[1]) ==
        std::vector<std::string>{"upper", "bounds", "улучшены"});
}

TEST_CASE("single-token runs never become chunk candidates") {
  const auto stops = tiny_stopwords();
  NpExtractorConfig cfg;
  cfg.strategy = NpStrategy::kStopwordChunks;
  const auto doc = make_doc("d", "the proof in the appendix");
  CHECK(dictionary::extract_noun_phrases(doc, cfg, stops, nullptr).empty());
}

TEST_CASE("pos-pattern matches adjective/noun runs ending in a noun") {
  const auto stops = tiny_stopwords();
  const auto lex = PosLexicon::parse(
      "show\tverb\nstrong\tadjective\nneural\tadjective\nyields\tverb\n",
      "test-lexicon");
  NpExtractorConfig cfg;
  cfg.strategy = NpStrategy::kPosPattern;

  // Verbs break runs that stopwords do not.
  auto doc = make_doc("d", "strong correlations show neural networks");
  auto phrases = dictionary::extract_noun_phrases(doc, cfg, stops, &lex);
  REQUIRE(phrases.size() == 2);
  CHECK(lowers(phrases[0]) ==
        std::vector<std::string>{"strong", "correlations"});
  CHECK(lowers(phrases[1]) == std::vector<std::string>{"neural", "networks"});

  // Trailing non-nouns are trimmed, which can sink the whole match.
  doc = make_doc("d", "the model yields results and networks neural");
  phrases = dictionary::extract_noun_phrases(doc, cfg, stops, &lex);
  REQUIRE(phrases.empty());

  // After trimming, the rest still counts when two tokens remain.
  doc = make_doc("d", "the sensor networks neural");
  phrases = dictionary::extract_noun_phrases(doc, cfg, stops, &lex);
  REQUIRE(phrases.size() == 1);
  CHECK(lowers(phrases[0]) == std::vector<std::string>{"sensor", "networks"});
}

TEST_CASE("pos-pattern without a lexicon is a configuration error") {
  NpExtractorConfig cfg;
  cfg.strategy = NpStrategy::kPosPattern;
  const auto doc = make_doc("d", "anything");
  CHECK_THROWS_AS(
      dictionary::extract_noun_phrases(doc, cfg, tiny_stopwords(), nullptr),
      InputError);
}

TEST_CASE("dictionary keeps the first display form and merges frequencies") {
  Dictionary dict(Source::kNp);
  PhraseEntry first;
  first.display = "lower bounds";
  first.key = StemKey::from_joined("lower bound");
  first.source = Source::kNp;
  first.doc_frequency = 5;
  PhraseEntry second = first;
  second.display = "lower bound";
  second.doc_frequency = 3;
  CHECK(dict.insert_or_merge(first));
  CHECK_FALSE(dict.insert_or_merge(second));
  REQUIRE(dict.size() == 1);
  const auto* entry = dict.find(StemKey::from_joined("lower bound"));
  REQUIRE(entry != nullptr);
  CHECK(entry->display == "lower bounds");
  CHECK(entry->doc_frequency == 8);
  CHECK(dict.contains(StemKey::from_joined("lower bound")));
  CHECK_FALSE(dict.contains(StemKey::from_joined("upper bound")));
}

TEST_CASE("wiki builder cleans, merges and keeps df at zero") {
  const auto stops = tiny_stopwords();
  std::vector<ingest::TitleCandidate> titles;
  for (const char* raw : {"Lower bound", "Lower bounds", "Entropy",
                          "Proof of the theorem", "Equation of state"}) {
    ingest::TitleCandidate cand;
    cand.raw_title = raw;
    cand.tokens = toks(raw);
    titles.push_back(std::move(cand));
  }
  BuildCounters counters;
  const auto dict = dictionary::build_wiki_dictionary(titles, stops, &counters);
  CHECK(counters.candidates == 5);
  CHECK(counters.rejected_short == 1);     // Entropy
  CHECK(counters.rejected_interior == 1);  // interior "the"
  CHECK(counters.merged_duplicates == 1);  // Lower bound + Lower bounds
  CHECK(counters.kept == 2);
  CHECK(dict.source() == Source::kWiki);
  const auto* lower = dict.find(StemKey::from_joined("lower bound"));
  REQUIRE(lower != nullptr);
  CHECK(lower->display == "lower bound");  // first occurrence wins
  CHECK(lower->doc_frequency == 0);
  const auto* eos = dict.find(StemKey::from_joined("equat of state"));
  REQUIRE(eos != nullptr);
  CHECK(eos->display == "equation of state");
}

TEST_CASE("np builder thresholds on document frequency, not occurrences") {
  const auto stops = tiny_stopwords();
  NpExtractorConfig cfg;
  cfg.min_df = 2;
  std::vector<Document> docs = {
      // "lower bounds" twice in one document still counts df=1.
      make_doc("d1", "the lower bounds and the lower bounds"),
      make_doc("d2", "the lower bound and the upper bounds"),
      make_doc("d3", "the upper bound"),
  };
  BuildCounters counters;
  const auto dict = dictionary::build_np_dictionary(docs, cfg, stops, nullptr,
                                                    1, &counters);
  CHECK(counters.below_min_df == 0);
  CHECK(counters.candidates == 2);
  CHECK(counters.kept == 2);
  const auto* lower = dict.find(StemKey::from_joined("lower bound"));
  REQUIRE(lower != nullptr);
  CHECK(lower->doc_frequency == 2);
  CHECK(lower->display == "lower bounds");  // first sighting, d1
  const auto* upper = dict.find(StemKey::from_joined("upper bound"));
  REQUIRE(upper != nullptr);
  CHECK(upper->doc_frequency == 2);
  CHECK(upper->display == "upper bounds");

  cfg.min_df = 3;
  const auto strict = dictionary::build_np_dictionary(docs, cfg, stops,
                                                      nullptr, 1, &counters);
  CHECK(strict.empty());
  CHECK(counters.below_min_df == 2);
  CHECK(counters.candidates == 0);
}

TEST_CASE("np builder rejects min_df below one") {
  NpExtractorConfig cfg;
  cfg.min_df = 0;
  std::vector<Document> docs = {make_doc("d", "x")};
  CHECK_THROWS_AS(
      dictionary::build_np_dictionary(docs, cfg, tiny_stopwords(), nullptr),
      InputError);
}

TEST_CASE("raising min_df only removes entries") {
  const auto stops = default_stopwords();
  const auto docs = fixture_corpus();
  NpExtractorConfig cfg;
  std::vector<Dictionary> dicts;
  for (std::uint64_t min_df = 1; min_df <= 5; ++min_df) {
    cfg.min_df = min_df;
    dicts.push_back(
        dictionary::build_np_dictionary(docs, cfg, stops, nullptr));
  }
  for (std::size_t i = 1; i < dicts.size(); ++i) {
    CHECK(dicts[i].size() <= dicts[i - 1].size());
    for (const auto* entry : dicts[i].sorted_entries()) {
      const auto* prev = dicts[i - 1].find(entry->key);
      REQUIRE_MESSAGE(prev != nullptr, entry->key.joined());
      CHECK(prev->doc_frequency == entry->doc_frequency);
      CHECK(prev->display == entry->display);
    }
  }
}

TEST_CASE("np build results do not depend on the worker count") {
  const auto stops = default_stopwords();
  const auto docs = fixture_corpus();
  NpExtractorConfig cfg;
  const auto baseline =
      dict_bytes(dictionary::build_np_dictionary(docs, cfg, stops, nullptr, 1));
  for (unsigned workers : {2u, 3u, 8u}) {
    CAPTURE(workers);
    const auto dict =
        dictionary::build_np_dictionary(docs, cfg, stops, nullptr, workers);
    CHECK(dict_bytes(dict) == baseline);
  }
}

TEST_CASE("wiki dictionary from the fixture dump matches the golden file") {
  const auto stops = default_stopwords();
  const auto want = expected_counters();

  ingest::WikiTitleReader xml_reader(test_support::fixture("mini_wiki.xml"));
  BuildCounters xml_counters;
  const auto from_xml =
      dictionary::build_wiki_dictionary(xml_reader, stops, &xml_counters);
  check_build_counters(xml_counters, want["wiki_build"]);
  const auto golden = test_support::slurp(test_support::golden("wiki_dict.tsv"));
  CHECK(dict_bytes(from_xml) == golden);

  ingest::WikiTitleReader plain_reader(
      test_support::fixture("mini_wiki_titles.txt"));
  const auto from_plain = dictionary::build_wiki_dictionary(plain_reader, stops);
  CHECK(dict_bytes(from_plain) == golden);
}

TEST_CASE("np dictionaries from the fixture corpus match the golden files") {
  const auto stops = default_stopwords();
  const auto docs = fixture_corpus();
  const auto want = expected_counters();
  REQUIRE(want["min_df"].get<std::uint64_t>() == NpExtractorConfig{}.min_df);

  NpExtractorConfig cfg;
  BuildCounters counters;
  const auto chunks =
      dictionary::build_np_dictionary(docs, cfg, stops, nullptr, 3, &counters);
  check_build_counters(counters, want["np_chunks_build"]);
  CHECK(dict_bytes(chunks) ==
        test_support::slurp(test_support::golden("np_dict_chunks.tsv")));

  cfg.strategy = NpStrategy::kPosPattern;
  const auto lex =
      PosLexicon::load(test_support::data_file("pos_lexicon_en.txt"));
  const auto pos =
      dictionary::build_np_dictionary(docs, cfg, stops, &lex, 2, &counters);
  check_build_counters(counters, want["np_pos_build"]);
  CHECK(dict_bytes(pos) ==
        test_support::slurp(test_support::golden("np_dict_pos.tsv")));
}

TEST_CASE("dictionary files round-trip byte for byte") {
  const auto path = test_support::golden("np_dict_chunks.tsv");
  const auto dict = dictionary::read_dictionary(path);
  CHECK(dict.source() == Source::kNp);
  const auto* entry = dict.find(StemKey::from_joined("ad hoc network"));
  REQUIRE(entry != nullptr);
  CHECK(entry->display == "ad hoc networks");
  CHECK(entry->doc_frequency == 8);
  CHECK(dict_bytes(dict) == test_support::slurp(path));

  const auto wiki =
      dictionary::read_dictionary(test_support::golden("wiki_dict.tsv"));
  CHECK(wiki.source() == Source::kWiki);
  CHECK(dict_bytes(wiki) == test_support::slurp(test_support::golden(
                                "wiki_dict.tsv")));
}

TEST_CASE("dictionary reader rejects malformed files") {
  TempDir tmp;
  auto bad = [&](const char* name, const std::string& content) {
    const auto path = tmp.write(name, content);
    CHECK_THROWS_AS(dictionary::read_dictionary(path), InputError);
  };
  bad("empty.tsv", "");
  bad("magic.tsv", "#something-else v1 NP\n");
  bad("version.tsv", "#corpus-tagger-dict v2 NP\n");
  bad("source.tsv", "#corpus-tagger-dict v1 OTHER\n");
  bad("order.tsv",
      "#corpus-tagger-dict v1 NP\nb b\tb b\t4\na a\ta a\t4\n");
  bad("dup-key.tsv",
      "#corpus-tagger-dict v1 NP\na a\ta a\t4\na a\ta a\t4\n");
  bad("one-stem.tsv", "#corpus-tagger-dict v1 NP\nalpha\talpha\t4\n");
  bad("stray-space.tsv", "#corpus-tagger-dict v1 NP\na  b\ta b\t4\n");
  bad("columns.tsv", "#corpus-tagger-dict v1 NP\na b\tab\n");
  bad("df.tsv", "#corpus-tagger-dict v1 NP\na b\ta b\tmany\n");
  bad("df-trail.tsv", "#corpus-tagger-dict v1 NP\na b\ta b\t4x\n");
  bad("df-neg.tsv", "#corpus-tagger-dict v1 NP\na b\ta b\t-4\n");
  bad("display.tsv", "#corpus-tagger-dict v1 NP\na b\t\t4\n");
  bad("blank-line.tsv", "#corpus-tagger-dict v1 NP\n\na b\ta b\t4\n");
}

TEST_CASE("source and strategy names parse both ways") {
  CHECK(dictionary::source_name(Source::kWiki) == "WIKI");
  CHECK(dictionary::source_name(Source::kNp) == "NP");
  CHECK(dictionary::parse_source("WIKI") == Source::kWiki);
  CHECK(dictionary::parse_source("NP") == Source::kNp);
  // Lowercase aliases cover the CLI flag spelling.
  CHECK(dictionary::parse_source("wiki") == Source::kWiki);
  CHECK(dictionary::parse_source("np") == Source::kNp);
  CHECK_THROWS_AS(dictionary::parse_source("wikipedia"), InputError);

  CHECK(dictionary::np_strategy_name(NpStrategy::kStopwordChunks) ==
        "stopword-chunks");
  CHECK(dictionary::np_strategy_name(NpStrategy::kPosPattern) ==
        "pos-pattern");
  CHECK(dictionary::parse_np_strategy("stopword-chunks") ==
        NpStrategy::kStopwordChunks);
  CHECK(dictionary::parse_np_strategy("pos-pattern") ==
        NpStrategy::kPosPattern);
  CHECK_THROWS_AS(dictionary::parse_np_strategy("chunks"), InputError);
}

}  // TEST_SUITE
