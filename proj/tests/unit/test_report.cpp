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

#include <cstdint>
#include <filesystem>
#include <map>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ctag/dictionary.hpp"
#include "ctag/ingest.hpp"
#include "ctag/stats.hpp"
#include "ctag/tagger.hpp"
#include "ctag/util.hpp"
#include "test_support.hpp"

using namespace ctag;
using dictionary::Source;
using ingest::Document;
using stats::AnalyzeInputs;
using stats::MethodData;
using tagger::TagAssignment;
using test_support::TempDir;
using textnorm::StemKey;

namespace {

std::vector<Document> fixture_corpus() {
  return ingest::read_corpus(test_support::fixture("mini_corpus.jsonl"),
                             ingest::CorpusFormat::kJsonl,
                             ingest::CategoryTable::builtin());
}

MethodData golden_method(Source source, std::span<const Document> corpus,
                         bool with_dict) {
  const char* assign_name =
      source == Source::kWiki ? "assign_wiki.tsv" : "assign_np.tsv";
  const char* dict_name =
      source == Source::kWiki ? "wiki_dict.tsv" : "np_dict_chunks.tsv";
  MethodData data;
  data.source = source;
  const auto file =
      tagger::read_assignments(test_support::golden(assign_name));
  data.assignments = stats::align_to_corpus(corpus, file.assignments);
  if (with_dict) {
    data.dict = dictionary::read_dictionary(test_support::golden(dict_name));
  }
  return data;
}

std::vector<std::string> lines_of(const std::filesystem::path& path) {
  std::istringstream in(test_support::slurp(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> cols_of(const std::string& line) {
  std::vector<std::string> out;
  for (auto piece : util::split(line, '\t')) out.emplace_back(piece);
  return out;
}

nlohmann::json expected_counters() {
  return nlohmann::json::parse(
      test_support::slurp(test_support::golden("expected_counters.json")));
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("two-method bundle reproduces every table from the fixture") {
  const auto corpus = fixture_corpus();
  TempDir tmp;
  AnalyzeInputs inputs;
  inputs.corpus = corpus;
  inputs.wiki = golden_method(Source::kWiki, corpus, true);
  inputs.np = golden_method(Source::kNp, corpus, true);
  inputs.config.output_dir = tmp.file("bundle");
  inputs.config.breakpoint = 10;
  inputs.config.top_k = 10;
  stats::write_report(inputs);

  for (const char* name :
       {"summary.json", "category_share.tsv", "rank_freq_wiki.tsv",
        "rank_freq_np.tsv", "top_tags.tsv", "uniqueness.tsv",
        "category_stats.tsv", "tag_count_hist.tsv", "fits.tsv"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(inputs.config.output_dir / name));
  }

  const auto want = expected_counters();

  SUBCASE("summary.json carries the corpus and per-method numbers") {
    const auto summary = nlohmann::json::parse(
        test_support::slurp(inputs.config.output_dir / "summary.json"));
    CHECK(summary["schema_version"] == 1);
    CHECK(summary["n_docs"] == 221);
    CHECK(summary["n_categories"] == 7);
    CHECK(summary["top_k"] == 10);
    CHECK(summary["breakpoint"] == 10);
    CHECK(summary["methods"] == nlohmann::json({"WIKI", "NP"}));
    for (const auto& [method, counters] :
         std::map<std::string, std::string>{{"WIKI", "tags_wiki"},
                                            {"NP", "tags_np"}}) {
      CAPTURE(method);
      const auto& m = summary["per_method"][method];
      const auto& w = want[counters];
      CHECK(m["tagged_docs"] == w["tagged_docs"]);
      CHECK(m["distinct_tags"] == w["distinct_tags"]);
      CHECK(m["total_tag_instances"] == w["total_tags"]);
      CHECK(m["fits"]["zipf"]["status"] == "ok");
      CHECK(m["fits"]["zipf"]["r_max"] == w["distinct_tags"]);
      CHECK(m["fits"]["zipf_piecewise"]["status"] == "ok");
      CHECK(m["fits"]["zipf_piecewise"]["breakpoint"] == 10);
      CHECK(m["fits"]["stretched_exp"]["status"] == "ok");
      CHECK(m["fits"]["stretched_exp"]["M"].get<double>() > 0.0);
      // The designed corpus tags documents too evenly for a negative
      // binomial (variance below mean), so this one degrades to no-fit.
      CHECK(m["fits"]["neg_binom"]["status"] == "no-fit");
      const auto reason = m["fits"]["neg_binom"]["reason"].get<std::string>();
      CHECK(reason.find("overdispersed") != std::string::npos);
    }
    REQUIRE(summary["rho_avg_tags"]["status"] == "ok");
    const auto rows = stats::category_averages(
        inputs.wiki->assignments, inputs.np->assignments, corpus);
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& row : rows) {
      xs.push_back(row.avg_tags_wiki);
      ys.push_back(row.avg_tags_np);
    }
    CHECK(summary["rho_avg_tags"]["value"].get<double>() ==
          doctest::Approx(stats::pearson_correlation(xs, ys))
              .epsilon(1e-12));
  }

  SUBCASE("category_share.tsv is the golden histogram with yes/no flags") {
    std::string expected = "#category\tknown\tdoc_count\tpercentage\n";
    std::istringstream golden(
        test_support::slurp(test_support::golden("category_hist.tsv")));
    std::string line;
    while (std::getline(golden, line)) {
      const auto cols = cols_of(line);
      REQUIRE(cols.size() == 4);
      expected += cols[0] + '\t' + (cols[1] == "1" ? "yes" : "no") + '\t' +
                  cols[2] + '\t' + cols[3] + '\n';
    }
    CHECK(test_support::slurp(inputs.config.output_dir /
                              "category_share.tsv") == expected);
  }

  SUBCASE("rank_freq tables equal the golden rank tables plus displays") {
    for (const auto& [file, golden_name] :
         std::map<std::string, std::string>{
             {"rank_freq_wiki.tsv", "rank_wiki.tsv"},
             {"rank_freq_np.tsv", "rank_np.tsv"}}) {
      CAPTURE(file);
      const auto lines = lines_of(inputs.config.output_dir / file);
      REQUIRE(!lines.empty());
      CHECK(lines[0] == "#rank\tstem_key\tdisplay\tfrequency");
      std::string stripped;
      for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cols = cols_of(lines[i]);
        REQUIRE(cols.size() == 4);
        CHECK(cols[2] != "-");  // dictionaries supply every display here
        stripped += cols[0] + '\t' + cols[1] + '\t' + cols[3] + '\n';
      }
      CHECK(stripped ==
            test_support::slurp(test_support::golden(golden_name)));
    }
    const auto wiki_lines =
        lines_of(inputs.config.output_dir / "rank_freq_wiki.tsv");
    CHECK(wiki_lines[1] == "1\tfield theori\tfield theory\t76");
  }

  SUBCASE("top_tags.tsv emits exactly top_k padded rows per scope") {
    const auto lines = lines_of(inputs.config.output_dir / "top_tags.tsv");
    CHECK(lines[0] == "#scope\trank\twiki\tnp\twiki_only\tnp_only");
    REQUIRE(lines.size() == 1 + 8 * 10);  // pooled + 7 category codes
    CHECK(cols_of(lines[1]) ==
          std::vector<std::string>{"pooled", "1", "field theory",
                                   "phase transitions", "field theory",
                                   "monte carlo simulations"});
    std::map<std::string, int> per_scope;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cols = cols_of(lines[i]);
      REQUIRE(cols.size() == 6);
      ++per_scope[cols[0]];
    }
    CHECK(per_scope.size() == 8);
    CHECK(per_scope.at("pooled") == 10);
    CHECK(per_scope.at("q-alg") == 10);  // short scopes are padded
    // Every scope's only-columns run dry before rank 10 on this corpus.
    CHECK(cols_of(lines.back()) ==
          std::vector<std::string>{"stat", "10", "machine learning",
                                   "low temperature", "-", "-"});
  }

  SUBCASE("uniqueness.tsv samples the curves at log-spaced ranks") {
    const auto lines = lines_of(inputs.config.output_dir / "uniqueness.tsv");
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "#method\trank\tunique_count\tc");
    std::map<std::string, std::vector<std::vector<std::string>>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cols = cols_of(lines[i]);
      REQUIRE(cols.size() == 4);
      rows[cols[0]].push_back(cols);
    }
    REQUIRE(rows.size() == 2);
    const auto wiki_ranks = stats::log_spaced_ranks(
        expected_counters()["tags_wiki"]["distinct_tags"]
            .get<std::uint64_t>());
    REQUIRE(rows.at("WIKI").size() == wiki_ranks.size());
    for (std::size_t i = 0; i < wiki_ranks.size(); ++i) {
      CHECK(rows.at("WIKI")[i][1] == std::to_string(wiki_ranks[i]));
      const auto unique = std::stoull(rows.at("WIKI")[i][2]);
      CHECK(unique <= wiki_ranks[i]);
      const double c = std::stod(rows.at("WIKI")[i][3]);
      CHECK(c == doctest::Approx(static_cast<double>(unique) /
                                 static_cast<double>(wiki_ranks[i])));
    }
    // "equation of state" only exists as a wiki phrase, so the wiki
    // curve starts at its maximum: rank 1 is unique.
    CHECK(rows.at("WIKI")[0] ==
          std::vector<std::string>{"WIKI", "1", "1", "1"});
  }

  SUBCASE("category_stats.tsv has one row per category, sorted by code") {
    const auto lines =
        lines_of(inputs.config.output_dir / "category_stats.tsv");
    CHECK(lines[0] ==
          "#category\tknown\tn_docs\tavg_tags_wiki\tavg_tags_np\tratio");
    REQUIRE(lines.size() == 8);
    const std::vector<std::string> want_codes = {
        "cs",    "math",  "physics-hep-th", "physics-nucl-ex",
        "q-alg", "q-bio", "stat"};
    for (std::size_t i = 0; i < want_codes.size(); ++i) {
      const auto cols = cols_of(lines[i + 1]);
      REQUIRE(cols.size() == 6);
      CHECK(cols[0] == want_codes[i]);
      CHECK(cols[1] == (want_codes[i] == "q-alg" ? "no" : "yes"));
    }
    // Spot value: cs holds 44 documents per the golden histogram.
    CHECK(cols_of(lines[1])[2] == "44");
  }

  SUBCASE("tag_count_hist.tsv pools and splits by category") {
    const auto lines =
        lines_of(inputs.config.output_dir / "tag_count_hist.tsv");
    CHECK(lines[0] == "#scope\tmethod\tk\tdoc_count");
    std::map<std::string, std::uint64_t> docs_per_scope_method;
    std::map<std::string, std::uint64_t> tags_per_scope_method;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cols = cols_of(lines[i]);
      REQUIRE(cols.size() == 4);
      const auto key = cols[0] + "/" + cols[1];
      docs_per_scope_method[key] += std::stoull(cols[3]);
      tags_per_scope_method[key] += std::stoull(cols[2]) *
                                    std::stoull(cols[3]);
    }
    CHECK(docs_per_scope_method.at("pooled/WIKI") == 221);
    CHECK(docs_per_scope_method.at("pooled/NP") == 221);
    CHECK(tags_per_scope_method.at("pooled/WIKI") == 949);
    CHECK(tags_per_scope_method.at("pooled/NP") == 1079);
    CHECK(docs_per_scope_method.at("cs/WIKI") == 44);
    CHECK(docs_per_scope_method.at("q-alg/NP") == 2);
  }

  SUBCASE("fits.tsv carries one row per scope, method and model") {
    const auto lines = lines_of(inputs.config.output_dir / "fits.tsv");
    CHECK(lines[0] == "#scope\tmethod\tmodel\tstatus\tparams");
    // 2 methods x 4 pooled models + 7 categories x 2 methods x 1 model.
    REQUIRE(lines.size() == 1 + 8 + 14);
    int ok_zipf = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cols = cols_of(lines[i]);
      REQUIRE(cols.size() == 5);
      CHECK((cols[3] == "ok" || cols[3] == "no-fit"));
      if (cols[2] == "zipf" && cols[3] == "ok") {
        ++ok_zipf;
        CHECK(cols[4].find("A=") == 0);
        CHECK(cols[4].find(";N=") != std::string::npos);
      }
      if (cols[3] == "no-fit") CHECK(!cols[4].empty());
    }
    CHECK(ok_zipf == 2);
  }
}

TEST_CASE("single-method bundles omit the cross-method outputs") {
  const auto corpus = fixture_corpus();
  TempDir tmp;
  AnalyzeInputs inputs;
  inputs.corpus = corpus;
  inputs.np = golden_method(Source::kNp, corpus, true);
  inputs.config.output_dir = tmp.file("bundle");
  stats::write_report(inputs);

  CHECK(std::filesystem::exists(inputs.config.output_dir / "summary.json"));
  CHECK(std::filesystem::exists(inputs.config.output_dir /
                                "rank_freq_np.tsv"));
  CHECK_FALSE(std::filesystem::exists(inputs.config.output_dir /
                                      "rank_freq_wiki.tsv"));
  CHECK_FALSE(
      std::filesystem::exists(inputs.config.output_dir / "uniqueness.tsv"));
  CHECK_FALSE(std::filesystem::exists(inputs.config.output_dir /
                                      "category_stats.tsv"));

  const auto summary = nlohmann::json::parse(
      test_support::slurp(inputs.config.output_dir / "summary.json"));
  CHECK(summary["methods"] == nlohmann::json({"NP"}));
  CHECK(summary["rho_avg_tags"]["status"] == "no-fit");
  CHECK(summary["rho_avg_tags"]["reason"] ==
        "requires both WIKI and NP assignments");
  CHECK(summary["breakpoint"] == 100);  // the default survives into the file

  const auto top = lines_of(inputs.config.output_dir / "top_tags.tsv");
  CHECK(top[0] == "#scope\trank\tnp");
  CHECK(cols_of(top[1]).size() == 3);
}

TEST_CASE("a corpus with no tags still produces a complete bundle") {
  std::vector<Document> corpus;
  for (int i = 0; i < 3; ++i) {
    Document doc;
    doc.id = "d" + std::to_string(i);
    doc.categories.push_back(ingest::CategoryCode{"cs", true});
    corpus.push_back(std::move(doc));
  }
  MethodData wiki;
  wiki.source = Source::kWiki;
  for (const auto& doc : corpus) {
    wiki.assignments.push_back(TagAssignment{doc.id, {}});
  }
  TempDir tmp;
  AnalyzeInputs inputs;
  inputs.corpus = corpus;
  inputs.wiki = std::move(wiki);
  inputs.config.output_dir = tmp.file("bundle");
  stats::write_report(inputs);

  const auto summary = nlohmann::json::parse(
      test_support::slurp(inputs.config.output_dir / "summary.json"));
  const auto& m = summary["per_method"]["WIKI"];
  CHECK(m["tagged_docs"] == 0);
  CHECK(m["distinct_tags"] == 0);
  CHECK(m["total_tag_instances"] == 0);
  for (const char* model :
       {"zipf", "zipf_piecewise", "stretched_exp", "neg_binom"}) {
    CAPTURE(model);
    CHECK(m["fits"][model]["status"] == "no-fit");
  }
  const auto rank_lines =
      lines_of(inputs.config.output_dir / "rank_freq_wiki.tsv");
  CHECK(rank_lines.size() == 1);  // header only
  const auto top = lines_of(inputs.config.output_dir / "top_tags.tsv");
  REQUIRE(top.size() == 1 + 2 * 10);  // pooled + "cs"
  CHECK(cols_of(top[1]) == std::vector<std::string>{"pooled", "1", "-"});
}

TEST_CASE("an overdispersed corpus earns an ok negative-binomial row") {
  std::vector<Document> corpus;
  MethodData wiki;
  wiki.source = Source::kWiki;
  int next = 0;
  const auto add_docs = [&](int docs, int tags) {
    for (int d = 0; d < docs; ++d) {
      Document doc;
      doc.id = "d" + std::to_string(next++);
      TagAssignment assignment;
      assignment.doc_id = doc.id;
      for (int t = 0; t < tags; ++t) {
        assignment.tags.push_back(
            StemKey::from_joined("tag" + std::to_string(t) + " x"));
      }
      corpus.push_back(std::move(doc));
      wiki.assignments.push_back(std::move(assignment));
    }
  };
  add_docs(30, 0);
  add_docs(30, 1);
  add_docs(20, 2);
  add_docs(10, 5);
  add_docs(5, 15);
  add_docs(5, 25);

  TempDir tmp;
  AnalyzeInputs inputs;
  inputs.corpus = corpus;
  inputs.wiki = std::move(wiki);
  inputs.config.output_dir = tmp.file("bundle");
  stats::write_report(inputs);

  const auto summary = nlohmann::json::parse(
      test_support::slurp(inputs.config.output_dir / "summary.json"));
  const auto& fit = summary["per_method"]["WIKI"]["fits"]["neg_binom"];
  REQUIRE(fit["status"] == "ok");
  CHECK(fit["P"].get<double>() > 0.0);
  CHECK(fit["P"].get<double>() < 1.0);
  CHECK(fit["R"].get<double>() > 0.0);
  CHECK(summary["n_categories"] == 0);

  // Without dictionaries the display column degrades to a dash.
  const auto rank_lines =
      lines_of(inputs.config.output_dir / "rank_freq_wiki.tsv");
  REQUIRE(rank_lines.size() > 1);
  CHECK(cols_of(rank_lines[1])[2] == "-");
}

TEST_CASE("misaligned or missing inputs are rejected") {
  const auto corpus = fixture_corpus();
  TempDir tmp;
  AnalyzeInputs inputs;
  inputs.corpus = corpus;
  inputs.config.output_dir = tmp.file("bundle");
  CHECK_THROWS_AS(stats::write_report(inputs), InputError);

  inputs.wiki = golden_method(Source::kWiki, corpus, false);
  inputs.wiki->assignments.pop_back();
  CHECK_THROWS_AS(stats::write_report(inputs), InputError);
}

}  // TEST_SUITE
