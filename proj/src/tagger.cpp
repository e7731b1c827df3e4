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

#include "ctag/tagger.hpp"

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <queue>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "ctag/error.hpp"
#include "ctag/parallel.hpp"
#include "ctag/util.hpp"

namespace ctag::tagger {

namespace {

std::string line_error(const std::filesystem::path& path, std::size_t line,
                       const std::string& what) {
  return path.string() + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

PhraseAutomaton PhraseAutomaton::compile(const dictionary::Dictionary& dict) {
  if (dict.empty()) {
    throw InputError("cannot compile automaton from an empty dictionary");
  }
  PhraseAutomaton a;
  a.source_ = dict.source();
  a.patterns_ = dict.sorted_keys();
  a.nodes_.emplace_back();  // root = 0

  // Trie. Inserting in bytewise pattern order makes node ids (and thus
  // the whole structure) deterministic.
  for (std::size_t pid = 0; pid < a.patterns_.size(); ++pid) {
    std::int32_t state = 0;
    for (const auto& stem : a.patterns_[pid].stems()) {
      auto [sym_it, _] = a.symbols_.try_emplace(
          std::string(stem), static_cast<std::int32_t>(a.symbols_.size()));
      const std::int32_t sym = sym_it->second;
      auto& next = a.nodes_[static_cast<std::size_t>(state)].next;
      auto it = next.find(sym);
      if (it == next.end()) {
        const auto fresh = static_cast<std::int32_t>(a.nodes_.size());
        next.emplace(sym, fresh);
        a.nodes_.emplace_back();
        state = fresh;
      } else {
        state = it->second;
      }
    }
    a.nodes_[static_cast<std::size_t>(state)].pattern =
        static_cast<std::int32_t>(pid);
  }

  // Failure and output links, breadth-first.
  std::queue<std::int32_t> order;
  for (const auto& [sym, child] : a.nodes_[0].next) {
    (void)sym;
    a.nodes_[static_cast<std::size_t>(child)].fail = 0;
    order.push(child);
  }
  while (!order.empty()) {
    const std::int32_t u = order.front();
    order.pop();
    const Node& node_u = a.nodes_[static_cast<std::size_t>(u)];
    const std::int32_t fail_u = node_u.fail;
    for (const auto& [sym, v] : node_u.next) {
      Node& node_v = a.nodes_[static_cast<std::size_t>(v)];
      node_v.fail = a.transition(fail_u, sym);
      const Node& fv = a.nodes_[static_cast<std::size_t>(node_v.fail)];
      node_v.output_link = fv.pattern >= 0 ? node_v.fail : fv.output_link;
      order.push(v);
    }
  }
  return a;
}

std::int32_t PhraseAutomaton::transition(std::int32_t state,
                                         std::int32_t symbol) const {
  for (;;) {
    const auto& next = nodes_[static_cast<std::size_t>(state)].next;
    auto it = next.find(symbol);
    if (it != next.end()) return it->second;
    if (state == 0) return 0;
    state = nodes_[static_cast<std::size_t>(state)].fail;
  }
}

std::vector<textnorm::StemKey> PhraseAutomaton::match(
    std::span<const std::string> stems) const {
  std::vector<std::int32_t> matched;
  std::int32_t state = 0;
  for (const auto& stem : stems) {
    auto sym_it = symbols_.find(stem);
    if (sym_it == symbols_.end()) {
      // No pattern contains this stem, so every partial match dies.
      state = 0;
      continue;
    }
    state = transition(state, sym_it->second);
    const Node* node = &nodes_[static_cast<std::size_t>(state)];
    if (node->pattern >= 0) matched.push_back(node->pattern);
    for (std::int32_t out = node->output_link; out >= 0;
         out = nodes_[static_cast<std::size_t>(out)].output_link) {
      matched.push_back(nodes_[static_cast<std::size_t>(out)].pattern);
    }
  }
  std::sort(matched.begin(), matched.end());
  matched.erase(std::unique(matched.begin(), matched.end()), matched.end());

  std::vector<textnorm::StemKey> keys;
  keys.reserve(matched.size());
  // Pattern ids are assigned in bytewise key order, so ascending ids
  // already give bytewise-sorted keys.
  for (const std::int32_t pid : matched) {
    keys.push_back(patterns_[static_cast<std::size_t>(pid)]);
  }
  return keys;
}

TagAssignment PhraseAutomaton::tag_document(const ingest::Document& doc) const {
  const std::vector<textnorm::Token> tokens =
      textnorm::tokenize(doc.abstract_text);
  std::vector<std::string> stems;
  stems.reserve(tokens.size());
  for (const auto& token : tokens) {
    stems.push_back(textnorm::porter_stem(token.lower));
  }
  return TagAssignment{doc.id, match(stems)};
}

std::vector<TagAssignment> tag_corpus(std::span<const ingest::Document> docs,
                                      const PhraseAutomaton& automaton,
                                      unsigned workers) {
  std::vector<TagAssignment> out(docs.size());
  parallel::for_shards(docs.size(), workers,
                       [&](unsigned, std::size_t begin, std::size_t end) {
                         for (std::size_t i = begin; i < end; ++i) {
                           out[i] = automaton.tag_document(docs[i]);
                         }
                       });
  return out;
}

void write_assignments(const std::filesystem::path& path,
                       std::span<const TagAssignment> assignments,
                       dictionary::Source source) {
  const std::string source_str(dictionary::source_name(source));
  std::ostringstream out;
  out << "#corpus-tagger-assign v1 " << source_str << "\n";
  std::uint64_t rows = 0;
  for (const auto& assignment : assignments) {
    if (!util::tsv_safe(assignment.doc_id) || assignment.doc_id.empty()) {
      throw InputError("document id unsafe for TSV output: \"" +
                       assignment.doc_id + "\"");
    }
    for (const auto& key : assignment.tags) {
      out << assignment.doc_id << '\t' << source_str << '\t' << key.joined()
          << "\n";
      ++rows;
    }
  }
  out << "#count " << rows << "\n";
  util::atomic_write_file(path, out.str());
}

AssignmentFile read_assignments(const std::filesystem::path& path) {
  const std::string body = util::read_file_to_string(path);
  std::istringstream in(body);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw InputError(path.string() + ": empty assignment file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string_view> header = util::split(line, ' ');
  if (header.size() != 3 || header[0] != "#corpus-tagger-assign") {
    throw InputError(line_error(path, line_no, "bad assignment header: \"" +
                                                   line + "\""));
  }
  if (header[1] != "v1") {
    throw InputError(line_error(
        path, line_no, "unsupported assignment version: " + std::string(header[1])));
  }
  AssignmentFile file;
  try {
    file.source = dictionary::parse_source(header[2]);
  } catch (const InputError&) {
    throw InputError(line_error(
        path, line_no, "unknown assignment source: " + std::string(header[2])));
  }
  const std::string source_str(dictionary::source_name(file.source));

  bool saw_count = false;
  std::uint64_t declared_rows = 0;
  std::uint64_t seen_rows = 0;
  std::unordered_set<std::string> closed_docs;  // ids whose row group ended
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#count ", 0) == 0) {
      const std::string_view digits = std::string_view(line).substr(7);
      auto [ptr, ec] = std::from_chars(
          digits.data(), digits.data() + digits.size(), declared_rows);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw InputError(
            line_error(path, line_no, "bad row count: \"" + line + "\""));
      }
      saw_count = true;
      break;
    }
    const std::vector<std::string_view> cols = util::split(line, '\t');
    if (cols.size() != 3) {
      throw InputError(line_error(
          path, line_no,
          "expected 3 tab-separated columns, got " + std::to_string(cols.size())));
    }
    if (cols[0].empty()) {
      throw InputError(line_error(path, line_no, "empty document id"));
    }
    if (cols[1] != source_str) {
      throw InputError(line_error(
          path, line_no, "source column \"" + std::string(cols[1]) +
                             "\" does not match header " + source_str));
    }
    if (cols[2].empty()) {
      throw InputError(line_error(path, line_no, "empty stem key"));
    }
    textnorm::StemKey key =
        textnorm::StemKey::from_joined(std::string(cols[2]));
    for (const auto& stem : key.stems()) {
      if (stem.empty()) {
        throw InputError(line_error(
            path, line_no, "empty stem in key: \"" + std::string(cols[2]) + "\""));
      }
    }
    if (file.assignments.empty() || file.assignments.back().doc_id != cols[0]) {
      if (closed_docs.contains(std::string(cols[0]))) {
        throw InputError(line_error(
            path, line_no,
            "rows for document \"" + std::string(cols[0]) +
                "\" are not contiguous"));
      }
      if (!file.assignments.empty()) {
        closed_docs.insert(file.assignments.back().doc_id);
      }
      file.assignments.push_back(TagAssignment{std::string(cols[0]), {}});
    } else if (!(file.assignments.back().tags.back() < key)) {
      throw InputError(line_error(
          path, line_no,
          "stem keys for document \"" + std::string(cols[0]) +
              "\" are not in strictly increasing order"));
    }
    file.assignments.back().tags.push_back(std::move(key));
    ++seen_rows;
  }
  if (!saw_count) {
    throw InputError(path.string() + ": missing trailing #count line");
  }
  if (declared_rows != seen_rows) {
    throw InputError(path.string() + ": #count declares " +
                     std::to_string(declared_rows) + " rows but file has " +
                     std::to_string(seen_rows));
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      throw InputError(
          line_error(path, line_no, "unexpected content after #count line"));
    }
  }
  return file;
}

}  // namespace ctag::tagger
