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

#ifndef CTAG_INGEST_HPP_
#define CTAG_INGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctag/textnorm.hpp"
#include "ctag/xml.hpp"

namespace ctag::ingest {

// A coarse subject code. Codes from record headers are normalized
// (':' becomes '-') and looked up in the configured category table;
// codes missing from the table are preserved and flagged unknown
// rather than dropped.
struct CategoryCode {
  std::string code;
  bool known = true;

  bool operator==(const CategoryCode& o) const { return code == o.code; }
  auto operator<=>(const CategoryCode& o) const { return code <=> o.code; }
};

// The code -> full name table. The built-in table carries the 18
// standard arXiv top-level categories; a TSV file (code<TAB>full name,
// '#' comments) can replace it.
class CategoryTable {
 public:
  static CategoryTable builtin();
  static CategoryTable load(const std::filesystem::path& path);

  bool known(std::string_view code) const;
  std::optional<std::string> full_name(std::string_view code) const;
  std::size_t size() const { return rows_.size(); }

  // Normalizes a raw header code and classifies it against the table.
  CategoryCode resolve(std::string_view raw) const;

  static std::string normalize_code(std::string_view raw);

 private:
  std::vector<std::pair<std::string, std::string>> rows_;  // sorted by code
};

struct Document {
  std::string id;
  std::string abstract_text;
  std::vector<CategoryCode> categories;  // sorted by code, unique

  bool operator==(const Document&) const = default;
};

enum class CorpusFormat { kOaiXml, kJsonl };

std::string_view format_name(CorpusFormat format);
CorpusFormat parse_format(std::string_view name);  // "oai-xml" | "jsonl"

struct ReadCounters {
  std::uint64_t documents = 0;         // emitted
  std::uint64_t skipped_records = 0;   // malformed, counted and dropped
  std::uint64_t empty_abstracts = 0;   // emitted but flagged
  std::uint64_t unknown_codes = 0;     // category codes outside the table
};

// Streaming single-consumer corpus reader. Malformed records are
// skipped and counted; anything that makes further progress impossible
// (unreadable file, broken XML framing) throws ctag::InputError.
class CorpusReader {
 public:
  CorpusReader(const std::filesystem::path& path, CorpusFormat format,
               const CategoryTable& table);
  ~CorpusReader();

  CorpusReader(const CorpusReader&) = delete;
  CorpusReader& operator=(const CorpusReader&) = delete;

  std::optional<Document> next();
  const ReadCounters& counters() const { return counters_; }

 private:
  std::optional<Document> next_jsonl();
  std::optional<Document> next_oai();

  const CategoryTable& table_;
  CorpusFormat format_;
  std::string path_;
  std::ifstream file_;
  std::unique_ptr<xml::Reader> xml_;
  std::uint64_t line_ = 0;
  ReadCounters counters_;
};

// Reads a whole corpus into memory (convenience for the mid-size
// corpora this toolkit targets; the reader above stays streaming).
std::vector<Document> read_corpus(const std::filesystem::path& path,
                                  CorpusFormat format,
                                  const CategoryTable& table,
                                  ReadCounters* counters = nullptr);

// JSONL interchange writer; read_corpus(jsonl) of the output yields the
// same documents. Atomic (no partial file on failure).
void write_corpus_jsonl(const std::filesystem::path& path,
                        std::span<const Document> docs);

// A phrase candidate mined from a page title.
struct TitleCandidate {
  std::string raw_title;                     // title as it appeared
  std::vector<textnorm::Token> tokens;       // after normalization
};

// Replaces underscores with spaces and strips one trailing
// parenthetical disambiguator like "Mercury (planet)" -> "Mercury".
std::string normalize_title(std::string_view raw);

struct WikiCounters {
  std::uint64_t pages = 0;             // main-namespace pages visited
  std::uint64_t redirects_skipped = 0;
  std::uint64_t other_namespaces = 0;
  std::uint64_t too_short = 0;         // < 2 tokens after normalization
  std::uint64_t emitted = 0;
};

// Streams multi-word title candidates from either a MediaWiki XML dump
// (main namespace, redirects skipped) or a plain one-title-per-line
// list; the format is sniffed from the first non-space byte ('<' means
// XML). Single-word titles never come out.
class WikiTitleReader {
 public:
  explicit WikiTitleReader(const std::filesystem::path& path);
  ~WikiTitleReader();

  WikiTitleReader(const WikiTitleReader&) = delete;
  WikiTitleReader& operator=(const WikiTitleReader&) = delete;

  std::optional<TitleCandidate> next();
  const WikiCounters& counters() const { return counters_; }

 private:
  std::optional<TitleCandidate> next_xml();
  std::optional<TitleCandidate> next_plain();
  std::optional<TitleCandidate> accept(std::string raw_title);

  std::string path_;
  std::ifstream file_;
  std::unique_ptr<xml::Reader> xml_;
  bool is_xml_ = false;
  WikiCounters counters_;
};

struct CategoryCount {
  CategoryCode category;
  std::uint64_t doc_count = 0;
  double percentage = 0.0;  // over total documents; columns can sum > 100
};

// Streaming accumulator behind category_histogram.
class CategoryHistogram {
 public:
  void add(const Document& doc);
  // Rows sorted by descending count, ties by code bytewise.
  std::vector<CategoryCount> finish() const;
  std::uint64_t total_documents() const { return total_; }

 private:
  struct Cell {
    std::uint64_t count = 0;
    bool known = true;
  };
  std::map<std::string, Cell> counts_;
  std::uint64_t total_ = 0;
};

std::vector<CategoryCount> category_histogram(std::span<const Document> docs);

}  // namespace ctag::ingest

#endif  // CTAG_INGEST_HPP_
