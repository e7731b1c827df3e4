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

#include "ctag/ingest.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "ctag/error.hpp"
#include "ctag/util.hpp"

namespace ctag::ingest {

namespace {

constexpr std::pair<std::string_view, std::string_view> kBuiltinCategories[] = {
    {"cs", "Computer Science"},
    {"math", "Mathematics"},
    {"nlin", "Nonlinear Sciences"},
    {"physics-astro-ph", "Astrophysics"},
    {"physics-cond-mat", "Condensed Matter Physics"},
    {"physics-gr-qc", "Physics - General Relativity and Quantum Cosmology"},
    {"physics-hep-ex", "High Energy Physics - Experiment"},
    {"physics-hep-lat", "High Energy Physics - Lattice"},
    {"physics-hep-ph", "High Energy Physics - Phenomenology"},
    {"physics-hep-th", "High Energy Physics - Theory"},
    {"physics-math-ph", "Mathematical Physics"},
    {"physics-nucl-ex", "Nuclear Physics - Experiment"},
    {"physics-nucl-th", "Nuclear Physics - Theory"},
    {"physics-physics", "Physics - Other Fields"},
    {"physics-quant-ph", "Quantum Physics"},
    {"q-bio", "Quantitative Biology"},
    {"q-fin", "Quantitative Finance"},
    {"stat", "Statistics"},
};

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Local element name with any namespace prefix removed.
std::string_view local_name(std::string_view qualified) {
  std::size_t pos = qualified.rfind(':');
  return pos == std::string_view::npos ? qualified : qualified.substr(pos + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// CategoryTable

CategoryTable CategoryTable::builtin() {
  CategoryTable t;
  for (const auto& [code, name] : kBuiltinCategories) {
    t.rows_.emplace_back(std::string(code), std::string(name));
  }
  return t;
}

CategoryTable CategoryTable::load(const std::filesystem::path& path) {
  std::string content = util::read_file_to_string(path);
  CategoryTable t;
  std::uint64_t line_no = 0;
  for (std::string_view line : util::split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto cols = util::split(line, '\t');
    if (cols.size() != 2 || cols[0].empty()) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 'code<TAB>full name'");
    }
    t.rows_.emplace_back(trim(cols[0]), trim(cols[1]));
  }
  std::sort(t.rows_.begin(), t.rows_.end());
  for (std::size_t i = 1; i < t.rows_.size(); ++i) {
    if (t.rows_[i].first == t.rows_[i - 1].first) {
      throw InputError(path.string() + ": duplicate category code '" +
                       t.rows_[i].first + "'");
    }
  }
  return t;
}

bool CategoryTable::known(std::string_view code) const {
  return full_name(code).has_value();
}

std::optional<std::string> CategoryTable::full_name(
    std::string_view code) const {
  auto it = std::lower_bound(
      rows_.begin(), rows_.end(), code,
      [](const auto& row, std::string_view c) { return row.first < c; });
  if (it != rows_.end() && it->first == code) return it->second;
  return std::nullopt;
}

std::string CategoryTable::normalize_code(std::string_view raw) {
  std::string code = trim(raw);
  std::replace(code.begin(), code.end(), ':', '-');
  return code;
}

CategoryCode CategoryTable::resolve(std::string_view raw) const {
  CategoryCode cc;
  cc.code = normalize_code(raw);
  cc.known = known(cc.code);
  return cc;
}

// ---------------------------------------------------------------------------
// Corpus formats

std::string_view format_name(CorpusFormat format) {
  return format == CorpusFormat::kOaiXml ? "oai-xml" : "jsonl";
}

CorpusFormat parse_format(std::string_view name) {
  if (name == "oai-xml") return CorpusFormat::kOaiXml;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw InputError("unknown corpus format '" + std::string(name) +
                   "' (expected oai-xml or jsonl)");
}

namespace {

// Documents carry their categories sorted and de-duplicated.
void finalize_categories(std::vector<CategoryCode>& cats) {
  std::sort(cats.begin(), cats.end());
  cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
}

}  // namespace

CorpusReader::CorpusReader(const std::filesystem::path& path,
                           CorpusFormat format, const CategoryTable& table)
    : table_(table), format_(format), path_(path.string()) {
  file_.open(path, std::ios::binary);
  if (!file_) throw InputError("cannot open corpus file " + path_);
  if (format_ == CorpusFormat::kOaiXml) {
    xml_ = std::make_unique<xml::Reader>(file_);
  }
}

CorpusReader::~CorpusReader() = default;

std::optional<Document> CorpusReader::next() {
  return format_ == CorpusFormat::kJsonl ? next_jsonl() : next_oai();
}

std::optional<Document> CorpusReader::next_jsonl() {
  std::string line;
  while (std::getline(file_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("id") ||
        !rec["id"].is_string() || rec["id"].get<std::string>().empty() ||
        !rec.contains("abstract") || !rec["abstract"].is_string() ||
        !rec.contains("categories") || !rec["categories"].is_array()) {
      ++counters_.skipped_records;
      continue;
    }
    bool bad_category = false;
    Document doc;
    doc.id = rec["id"].get<std::string>();
    doc.abstract_text = rec["abstract"].get<std::string>();
    for (const auto& c : rec["categories"]) {
      if (!c.is_string()) {
        bad_category = true;
        break;
      }
      CategoryCode cc = table_.resolve(c.get<std::string>());
      if (cc.code.empty()) {
        bad_category = true;
        break;
      }
      if (!cc.known) ++counters_.unknown_codes;
      doc.categories.push_back(std::move(cc));
    }
    if (bad_category) {
      ++counters_.skipped_records;
      continue;
    }
    finalize_categories(doc.categories);
    if (doc.abstract_text.empty()) ++counters_.empty_abstracts;
    ++counters_.documents;
    return doc;
  }
  if (file_.bad()) throw InputError("I/O error reading " + path_);
  return std::nullopt;
}

std::optional<Document> CorpusReader::next_oai() {
  // Pull events looking for <record> elements; inside one, the content
  // of <identifier>, every <setSpec> and the first <abstract> or
  // <description> element are collected. A record without an
  // identifier is malformed and skipped.
  xml::Event ev;
  bool in_record = false;
  std::string id, abstract_text;
  bool have_abstract = false;
  std::vector<std::string> set_specs;
  std::string* capture = nullptr;
  std::string capture_buf;

  while (xml_->next(ev)) {
    switch (ev.type) {
      case xml::EventType::kStartElement: {
        std::string_view name = local_name(ev.name);
        if (!in_record && name == "record") {
          if (ev.self_closing) {
            ++counters_.skipped_records;  // empty record, no identifier
            break;
          }
          in_record = true;
          id.clear();
          abstract_text.clear();
          have_abstract = false;
          set_specs.clear();
        } else if (in_record && !ev.self_closing) {
          if (name == "identifier") {
            capture = &id;
          } else if (name == "setSpec") {
            capture = &capture_buf;
            capture_buf.clear();
          } else if (!have_abstract &&
                     (name == "abstract" || name == "description")) {
            capture = &abstract_text;
            have_abstract = true;
          }
        }
        break;
      }
      case xml::EventType::kEndElement: {
        std::string_view name = local_name(ev.name);
        if (capture != nullptr &&
            (name == "identifier" || name == "setSpec" ||
             name == "abstract" || name == "description")) {
          if (name == "setSpec") set_specs.push_back(capture_buf);
          capture = nullptr;
        }
        if (in_record && name == "record") {
          in_record = false;
          std::string trimmed_id = trim(id);
          if (trimmed_id.empty()) {
            ++counters_.skipped_records;
            break;
          }
          Document doc;
          doc.id = std::move(trimmed_id);
          doc.abstract_text = trim(abstract_text);
          for (const std::string& s : set_specs) {
            CategoryCode cc = table_.resolve(s);
            if (cc.code.empty()) continue;
            if (!cc.known) ++counters_.unknown_codes;
            doc.categories.push_back(std::move(cc));
          }
          finalize_categories(doc.categories);
          if (doc.abstract_text.empty()) ++counters_.empty_abstracts;
          ++counters_.documents;
          return doc;
        }
        break;
      }
      case xml::EventType::kText:
        if (capture != nullptr) *capture += ev.text;
        break;
      case xml::EventType::kEof:
        break;
    }
  }
  return std::nullopt;
}

std::vector<Document> read_corpus(const std::filesystem::path& path,
                                  CorpusFormat format,
                                  const CategoryTable& table,
                                  ReadCounters* counters) {
  CorpusReader reader(path, format, table);
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  while (auto doc = reader.next()) {
    if (!ids.insert(doc->id).second) {
      throw InputError("duplicate document id '" + doc->id + "' in " +
                       path.string());
    }
    docs.push_back(std::move(*doc));
  }
  if (counters != nullptr) *counters = reader.counters();
  return docs;
}

void write_corpus_jsonl(const std::filesystem::path& path,
                        std::span<const Document> docs) {
  std::string out;
  for (const Document& doc : docs) {
    nlohmann::ordered_json rec;
    rec["id"] = doc.id;
    rec["abstract"] = doc.abstract_text;
    nlohmann::ordered_json cats = nlohmann::ordered_json::array();
    for (const CategoryCode& c : doc.categories) cats.push_back(c.code);
    rec["categories"] = std::move(cats);
    out += rec.dump();
    out += '\n';
  }
  util::atomic_write_file(path, out);
}

// ---------------------------------------------------------------------------
// Wikipedia titles

std::string normalize_title(std::string_view raw) {
  std::string title(raw);
  std::replace(title.begin(), title.end(), '_', ' ');
  title = trim(title);
  // Strip one trailing parenthetical disambiguator: find the '(' whose
  // matching ')' is the final character, then require a space before it.
  if (!title.empty() && title.back() == ')') {
    int depth = 0;
    for (std::size_t i = title.size(); i-- > 0;) {
      if (title[i] == ')') {
        ++depth;
      } else if (title[i] == '(') {
        --depth;
        if (depth == 0) {
          if (i > 0 && title[i - 1] == ' ') {
            title = trim(std::string_view(title).substr(0, i - 1));
          }
          break;
        }
      }
    }
  }
  return title;
}

WikiTitleReader::WikiTitleReader(const std::filesystem::path& path)
    : path_(path.string()) {
  // Sniff the format from the first non-whitespace byte.
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw InputError("cannot open titles file " + path_);
    int c;
    while ((c = probe.get()) != std::char_traits<char>::eof()) {
      if (c != ' ' && c != '\t' && c != '\r' && c != '\n') break;
    }
    is_xml_ = (c == '<');
  }
  file_.open(path, std::ios::binary);
  if (!file_) throw InputError("cannot open titles file " + path_);
  if (is_xml_) xml_ = std::make_unique<xml::Reader>(file_);
}

WikiTitleReader::~WikiTitleReader() = default;

std::optional<TitleCandidate> WikiTitleReader::next() {
  return is_xml_ ? next_xml() : next_plain();
}

std::optional<TitleCandidate> WikiTitleReader::accept(std::string raw_title) {
  ++counters_.pages;
  TitleCandidate cand;
  cand.tokens = textnorm::tokenize(normalize_title(raw_title));
  cand.raw_title = std::move(raw_title);
  if (cand.tokens.size() < 2) {
    ++counters_.too_short;
    return std::nullopt;
  }
  ++counters_.emitted;
  return cand;
}

std::optional<TitleCandidate> WikiTitleReader::next_xml() {
  xml::Event ev;
  std::vector<std::string> stack;
  bool in_page = false;
  std::string title, ns;
  bool redirect = false;
  std::string* capture = nullptr;

  while (xml_->next(ev)) {
    switch (ev.type) {
      case xml::EventType::kStartElement: {
        std::string_view name = local_name(ev.name);
        bool page_child = in_page && !stack.empty() && stack.back() == "page";
        if (name == "page") {
          if (!ev.self_closing) {
            in_page = true;
            title.clear();
            ns.clear();
            redirect = false;
          }
        } else if (page_child && name == "redirect") {
          redirect = true;
        } else if (page_child && name == "title" && !ev.self_closing) {
          capture = &title;
        } else if (page_child && name == "ns" && !ev.self_closing) {
          capture = &ns;
        }
        if (!ev.self_closing) stack.push_back(std::string(name));
        break;
      }
      case xml::EventType::kEndElement: {
        std::string_view name = local_name(ev.name);
        if (!stack.empty()) stack.pop_back();
        if (name == "title" || name == "ns") capture = nullptr;
        if (name == "page" && in_page) {
          in_page = false;
          std::string t = trim(title);
          if (t.empty()) break;
          if (!ns.empty() && trim(ns) != "0") {
            ++counters_.other_namespaces;
            break;
          }
          if (redirect) {
            ++counters_.redirects_skipped;
            break;
          }
          if (auto cand = accept(std::move(t))) return cand;
        }
        break;
      }
      case xml::EventType::kText:
        if (capture != nullptr) *capture += ev.text;
        break;
      case xml::EventType::kEof:
        break;
    }
  }
  return std::nullopt;
}

std::optional<TitleCandidate> WikiTitleReader::next_plain() {
  std::string line;
  while (std::getline(file_, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty()) continue;
    if (auto cand = accept(std::move(t))) return cand;
  }
  if (file_.bad()) throw InputError("I/O error reading " + path_);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Category histogram

void CategoryHistogram::add(const Document& doc) {
  ++total_;
  for (const CategoryCode& c : doc.categories) {
    Cell& cell = counts_[c.code];
    ++cell.count;
    cell.known = c.known;
  }
}

std::vector<CategoryCount> CategoryHistogram::finish() const {
  std::vector<CategoryCount> rows;
  rows.reserve(counts_.size());
  for (const auto& [code, cell] : counts_) {
    CategoryCount row;
    row.category = CategoryCode{code, cell.known};
    row.doc_count = cell.count;
    row.percentage =
        total_ == 0 ? 0.0
                    : 100.0 * static_cast<double>(cell.count) /
                          static_cast<double>(total_);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const CategoryCount& a, const CategoryCount& b) {
              if (a.doc_count != b.doc_count) return a.doc_count > b.doc_count;
              return a.category.code < b.category.code;
            });
  return rows;
}

std::vector<CategoryCount> category_histogram(std::span<const Document> docs) {
  CategoryHistogram hist;
  for (const Document& doc : docs) hist.add(doc);
  return hist.finish();
}

}  // namespace ctag::ingest
