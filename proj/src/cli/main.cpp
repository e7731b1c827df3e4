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
//
// corpus-tagger: build phrase dictionaries, tag documents, analyze tag
// statistics. Progress goes to stderr; stdout carries machine-readable
// key=value lines only. Exit codes: 0 ok, 1 input error, 2 internal.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ctag/default_data.hpp"
#include "ctag/dictionary.hpp"
#include "ctag/error.hpp"
#include "ctag/ingest.hpp"
#include "ctag/parallel.hpp"
#include "ctag/stats.hpp"
#include "ctag/tagger.hpp"
#include "ctag/textnorm.hpp"
#include "ctag/util.hpp"

namespace {

using namespace ctag;

textnorm::StopwordList load_stopwords(const std::string& path) {
  if (path.empty()) {
    return textnorm::StopwordList::parse(data::kDefaultStopwords);
  }
  return textnorm::StopwordList::load(path);
}

ingest::CategoryTable load_categories(const std::string& path) {
  if (path.empty()) return ingest::CategoryTable::builtin();
  return ingest::CategoryTable::load(path);
}

dictionary::PosLexicon load_pos_lexicon(const std::string& path) {
  if (path.empty()) {
    return dictionary::PosLexicon::parse(data::kDefaultPosLexicon,
                                         "<builtin pos lexicon>");
  }
  return dictionary::PosLexicon::load(path);
}

// ---------------------------------------------------------------------------
// build-dict

struct BuildDictOptions {
  std::string source;
  std::string output;
  std::string corpus;
  std::string format = "jsonl";
  std::string wiki_titles;
  std::string stopwords;
  std::uint64_t min_df = 4;
  std::string np_strategy = "stopword-chunks";
  std::string pos_lexicon;
  std::string categories;
  unsigned workers = 0;
};

int run_build_dict(const BuildDictOptions& opt) {
  const dictionary::Source source = dictionary::parse_source(opt.source);
  const textnorm::StopwordList stopwords = load_stopwords(opt.stopwords);
  dictionary::BuildCounters counters;
  std::optional<dictionary::Dictionary> dict;
  std::string stats_lines;

  if (source == dictionary::Source::kWiki) {
    if (opt.wiki_titles.empty()) {
      throw InputError("--wiki-titles is required with --source wiki");
    }
    std::cerr << "[build-dict] reading titles from " << opt.wiki_titles
              << "\n";
    ingest::WikiTitleReader reader(opt.wiki_titles);
    dict = dictionary::build_wiki_dictionary(reader, stopwords, &counters);
    const ingest::WikiCounters& wc = reader.counters();
    stats_lines += "pages=" + std::to_string(wc.pages) + "\n";
    stats_lines += "redirects_skipped=" + std::to_string(wc.redirects_skipped) + "\n";
    stats_lines += "other_namespaces=" + std::to_string(wc.other_namespaces) + "\n";
    stats_lines += "titles_too_short=" + std::to_string(wc.too_short) + "\n";
    stats_lines += "titles=" + std::to_string(wc.emitted) + "\n";
  } else {
    if (opt.corpus.empty()) {
      throw InputError("--corpus is required with --source np");
    }
    const ingest::CategoryTable table = load_categories(opt.categories);
    std::cerr << "[build-dict] reading corpus from " << opt.corpus << "\n";
    ingest::ReadCounters rc;
    const std::vector<ingest::Document> docs = ingest::read_corpus(
        opt.corpus, ingest::parse_format(opt.format), table, &rc);
    dictionary::NpExtractorConfig cfg;
    cfg.strategy = dictionary::parse_np_strategy(opt.np_strategy);
    cfg.min_df = opt.min_df;
    std::optional<dictionary::PosLexicon> lexicon;
    const dictionary::PosLexicon* lexicon_ptr = nullptr;
    if (cfg.strategy == dictionary::NpStrategy::kPosPattern) {
      lexicon = load_pos_lexicon(opt.pos_lexicon);
      lexicon_ptr = &*lexicon;
    }
    const unsigned workers = parallel::effective_workers(opt.workers);
    std::cerr << "[build-dict] extracting noun phrases from " << docs.size()
              << " documents with " << workers << " workers\n";
    dict = dictionary::build_np_dictionary(docs, cfg, stopwords, lexicon_ptr,
                                           workers, &counters);
    stats_lines +=
        "strategy=" + std::string(dictionary::np_strategy_name(cfg.strategy)) +
        "\n";
    stats_lines += "min_df=" + std::to_string(cfg.min_df) + "\n";
    stats_lines += "documents=" + std::to_string(rc.documents) + "\n";
    stats_lines += "skipped_records=" + std::to_string(rc.skipped_records) + "\n";
    stats_lines += "empty_abstracts=" + std::to_string(rc.empty_abstracts) + "\n";
    stats_lines += "unknown_codes=" + std::to_string(rc.unknown_codes) + "\n";
  }

  dictionary::write_dictionary(*dict, opt.output);
  std::cout << "source=" << dictionary::source_name(source) << "\n"
            << stats_lines
            << "candidates=" << counters.candidates << "\n"
            << "rejected_short=" << counters.rejected_short << "\n"
            << "rejected_interior=" << counters.rejected_interior << "\n"
            << "below_min_df=" << counters.below_min_df << "\n"
            << "merged_duplicates=" << counters.merged_duplicates << "\n"
            << "entries=" << dict->size() << "\n"
            << "output=" << opt.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// tag

struct TagOptions {
  std::string corpus;
  std::string format = "jsonl";
  std::string dict;
  std::string output;
  std::string categories;
  unsigned workers = 0;
};

int run_tag(const TagOptions& opt) {
  const ingest::CategoryTable table = load_categories(opt.categories);
  std::cerr << "[tag] reading dictionary " << opt.dict << "\n";
  const dictionary::Dictionary dict = dictionary::read_dictionary(opt.dict);
  std::cerr << "[tag] compiling automaton over " << dict.size()
            << " phrases\n";
  const tagger::PhraseAutomaton automaton =
      tagger::PhraseAutomaton::compile(dict);
  std::cerr << "[tag] reading corpus from " << opt.corpus << "\n";
  ingest::ReadCounters rc;
  const std::vector<ingest::Document> docs = ingest::read_corpus(
      opt.corpus, ingest::parse_format(opt.format), table, &rc);
  const unsigned workers = parallel::effective_workers(opt.workers);
  std::cerr << "[tag] tagging " << docs.size() << " documents with "
            << workers << " workers\n";
  const std::vector<tagger::TagAssignment> assignments =
      tagger::tag_corpus(docs, automaton, workers);
  tagger::write_assignments(opt.output, assignments, dict.source());

  std::uint64_t zero_tag_docs = 0;
  std::uint64_t total_tags = 0;
  std::map<std::string, std::uint64_t> category_tags;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::uint64_t k = assignments[i].tags.size();
    total_tags += k;
    if (k == 0) ++zero_tag_docs;
    for (const ingest::CategoryCode& category : docs[i].categories) {
      category_tags[category.code] += k;
    }
  }
  std::cout << "source=" << dictionary::source_name(dict.source()) << "\n"
            << "documents=" << docs.size() << "\n"
            << "skipped_records=" << rc.skipped_records << "\n"
            << "tagged_docs=" << (docs.size() - zero_tag_docs) << "\n"
            << "zero_tag_docs=" << zero_tag_docs << "\n"
            << "total_tags=" << total_tags << "\n";
  for (const auto& [code, count] : category_tags) {
    std::cout << "category_tags." << code << "=" << count << "\n";
  }
  std::cout << "output=" << opt.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string corpus;
  std::string format = "jsonl";
  std::string wiki_assignments;
  std::string np_assignments;
  std::string wiki_dict;
  std::string np_dict;
  std::string output_dir;
  std::size_t top_k = 10;
  std::uint64_t breakpoint = 100;
  std::string categories;
};

int run_analyze(const AnalyzeOptions& opt) {
  if (opt.wiki_assignments.empty() && opt.np_assignments.empty()) {
    throw InputError(
        "provide --wiki-assignments and/or --np-assignments to analyze");
  }
  if (!opt.wiki_dict.empty() && opt.wiki_assignments.empty()) {
    throw InputError("--wiki-dict requires --wiki-assignments");
  }
  if (!opt.np_dict.empty() && opt.np_assignments.empty()) {
    throw InputError("--np-dict requires --np-assignments");
  }
  const ingest::CategoryTable table = load_categories(opt.categories);
  std::cerr << "[analyze] reading corpus from " << opt.corpus << "\n";
  ingest::ReadCounters rc;
  const std::vector<ingest::Document> docs = ingest::read_corpus(
      opt.corpus, ingest::parse_format(opt.format), table, &rc);

  const auto load_method = [&](const std::string& assign_path,
                               const std::string& dict_path,
                               dictionary::Source expected) {
    std::cerr << "[analyze] reading " << dictionary::source_name(expected)
              << " assignments from " << assign_path << "\n";
    stats::MethodData method;
    method.source = expected;
    const tagger::AssignmentFile file = tagger::read_assignments(assign_path);
    if (file.source != expected) {
      throw InputError(assign_path + ": holds " +
                       std::string(dictionary::source_name(file.source)) +
                       " assignments, expected " +
                       std::string(dictionary::source_name(expected)));
    }
    method.assignments = stats::align_to_corpus(docs, file.assignments);
    if (!dict_path.empty()) {
      dictionary::Dictionary dict = dictionary::read_dictionary(dict_path);
      if (dict.source() != expected) {
        throw InputError(dict_path + ": holds a " +
                         std::string(dictionary::source_name(dict.source())) +
                         " dictionary, expected " +
                         std::string(dictionary::source_name(expected)));
      }
      method.dict = std::move(dict);
    }
    return method;
  };

  stats::AnalyzeInputs inputs;
  inputs.corpus = docs;
  inputs.config.output_dir = opt.output_dir;
  inputs.config.breakpoint = opt.breakpoint;
  inputs.config.top_k = opt.top_k;
  if (!opt.wiki_assignments.empty()) {
    inputs.wiki = load_method(opt.wiki_assignments, opt.wiki_dict,
                              dictionary::Source::kWiki);
  }
  if (!opt.np_assignments.empty()) {
    inputs.np = load_method(opt.np_assignments, opt.np_dict,
                            dictionary::Source::kNp);
  }
  std::cerr << "[analyze] writing bundle to " << opt.output_dir << "\n";
  stats::write_report(inputs);

  std::cout << "n_docs=" << docs.size() << "\n"
            << "methods=";
  if (inputs.wiki) std::cout << "WIKI";
  if (inputs.wiki && inputs.np) std::cout << ",";
  if (inputs.np) std::cout << "NP";
  std::cout << "\n"
            << "breakpoint=" << opt.breakpoint << "\n"
            << "top_k=" << opt.top_k << "\n"
            << "output_dir=" << opt.output_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestOptions {
  std::uint64_t seed = 42;
  double tolerance_scale = 1.0;
};

int run_selftest(const SelftestOptions& opt) {
  const double scale = opt.tolerance_scale;
  bool all_ok = true;
  const auto report = [&](const std::string& name, bool ok,
                          const std::string& detail) {
    all_ok = all_ok && ok;
    std::cout << (ok ? "ok " : "FAIL ") << name << " " << detail << "\n";
  };

  // Rank-frequency power law: exact synthetic data must be recovered to
  // regression round-off.
  {
    std::vector<stats::RankPoint> points;
    for (std::uint64_t r = 1; r <= 1000; ++r) {
      points.push_back({static_cast<double>(r),
                        1000.0 * std::pow(static_cast<double>(r), -0.8)});
    }
    const stats::ZipfFit fit = stats::fit_zipf(points, 1, 1000);
    const double n_err = std::abs(fit.N - 0.8);
    const double a_rel = std::abs(fit.A - 1000.0) / 1000.0;
    report("zipf-recovery", n_err <= 1e-6 * scale && a_rel <= 1e-3 * scale,
           "N_err=" + util::fmt_g12(n_err) + " A_relerr=" + util::fmt_g12(a_rel));
  }

  // Two-regime power law with a breakpoint at rank 100.
  {
    const double tail_a = 1000.0 * std::pow(100.0, 0.9 - 0.5);
    std::vector<stats::RankPoint> points;
    for (std::uint64_t r = 1; r <= 1000; ++r) {
      const auto rd = static_cast<double>(r);
      points.push_back(
          {rd, r <= 100 ? 1000.0 * std::pow(rd, -0.5)
                        : tail_a * std::pow(rd, -0.9)});
    }
    const stats::PiecewiseZipfFit fit = stats::fit_piecewise_zipf(points, 100);
    const double head_err = std::abs(fit.head.N - 0.5);
    const double tail_err = std::abs(fit.tail.N - 0.9);
    report("zipf-piecewise-recovery",
           head_err <= 0.02 * scale && tail_err <= 0.02 * scale,
           "head_N_err=" + util::fmt_g12(head_err) +
               " tail_N_err=" + util::fmt_g12(tail_err));
  }

  // Stretched exponential, plus the model-selection property that it
  // beats a single power law on its own data.
  {
    std::vector<stats::RankPoint> points;
    for (std::uint64_t r = 1; r <= 5000; ++r) {
      const auto rd = static_cast<double>(r);
      points.push_back({rd, 50.0 * std::exp(-0.5 * std::pow(rd, 0.2))});
    }
    const stats::StretchedExpFit fit =
        stats::fit_stretched_exponential(points);
    const double m_err = std::abs(fit.M - 0.2);
    const double d_rel = std::abs(fit.D - 0.5) / 0.5;
    const double c_rel = std::abs(fit.C - 50.0) / 50.0;
    report("stretched-exp-recovery",
           m_err <= 0.01 * scale && d_rel <= 0.05 * scale &&
               c_rel <= 0.05 * scale,
           "M_err=" + util::fmt_g12(m_err) + " D_relerr=" +
               util::fmt_g12(d_rel) + " C_relerr=" + util::fmt_g12(c_rel));
    const stats::ZipfFit zipf = stats::fit_zipf(points, 1, 5000);
    report("stretched-beats-zipf", fit.rss_log < zipf.rss_log,
           "rss_stretched=" + util::fmt_g12(fit.rss_log) +
               " rss_zipf=" + util::fmt_g12(zipf.rss_log));
  }

  // Negative binomial recovery from a Gamma-Poisson sampling oracle.
  {
    constexpr double kP = 0.3;
    constexpr double kR = 2.5;
    std::mt19937_64 rng(opt.seed);
    std::gamma_distribution<double> gamma(kR, (1.0 - kP) / kP);
    stats::Histogram hist;
    for (int i = 0; i < 100000; ++i) {
      std::poisson_distribution<std::uint64_t> poisson(gamma(rng));
      ++hist[poisson(rng)];
    }
    const stats::NegBinomFit fit = stats::fit_negative_binomial(hist);
    const double p_err = std::abs(fit.P - kP);
    const double r_err = std::abs(fit.R - kR);
    report("neg-binom-recovery",
           p_err <= 0.02 * scale && r_err <= 0.1 * scale,
           "P_err=" + util::fmt_g12(p_err) + " R_err=" + util::fmt_g12(r_err));

    // The likelihood search must never end below its moments start.
    std::uint64_t n = 0;
    double mean = 0.0;
    for (const auto& [k, count] : hist) {
      n += count;
      mean += static_cast<double>(k) * static_cast<double>(count);
    }
    mean /= static_cast<double>(n);
    double variance = 0.0;
    for (const auto& [k, count] : hist) {
      const double dk = static_cast<double>(k) - mean;
      variance += static_cast<double>(count) * dk * dk;
    }
    variance /= static_cast<double>(n - 1);
    const double r_mom = mean * mean / (variance - mean);
    const double p_mom = r_mom / (r_mom + mean);
    double ll_mom = 0.0;
    for (const auto& [k, count] : hist) {
      ll_mom += static_cast<double>(count) * stats::nb_log_pmf(k, p_mom, r_mom);
    }
    report("neg-binom-mle-floor", fit.log_likelihood >= ll_mom - 1e-9,
           "ll_mle=" + util::fmt_g12(fit.log_likelihood) +
               " ll_mom=" + util::fmt_g12(ll_mom));

    // Normalization: sum the pmf until a geometric tail bound drops
    // below 1e-10.
    double sum = 0.0;
    double tail_bound = 1.0;
    for (std::uint64_t k = 0; k < 10000000 && tail_bound >= 1e-10; ++k) {
      sum += stats::nb_pmf(k, fit.P, fit.R);
      const double next = stats::nb_pmf(k + 1, fit.P, fit.R);
      const double ratio =
          (fit.R >= 1.0
               ? (static_cast<double>(k) + 1.0 + fit.R) /
                     (static_cast<double>(k) + 2.0)
               : 1.0) *
          (1.0 - fit.P);
      tail_bound = ratio < 1.0 ? next / (1.0 - ratio) : 1.0;
    }
    const double residual = std::abs(1.0 - sum);
    report("neg-binom-normalization", residual <= 1e-9 * scale,
           "residual=" + util::fmt_g12(residual));
  }

  std::cout << "selftest=" << (all_ok ? "pass" : "fail") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{
      "corpus-tagger: phrase-dictionary tagging and rank statistics for "
      "scientific abstracts"};
  app.require_subcommand(1);
  // Parent-level options (--config in particular) may be spelled after the
  // subcommand name; unmatched subcommand tokens climb to the main app.
  app.fallthrough();
  app.set_config("--config", "",
                 "Read options from an INI-style key=value file "
                 "([subcommand] sections hold subcommand options)");

  BuildDictOptions bd_opt;
  CLI::App* bd = app.add_subcommand(
      "build-dict", "Build a phrase dictionary from wiki titles or corpus "
                    "noun phrases");
  // Lets a [build-dict] config section supply option values; command-line
  // flags still win over the file.
  bd->configurable();
  bd->add_option("--source", bd_opt.source, "Dictionary source: wiki | np")
      ->required();
  bd->add_option("--output", bd_opt.output, "Dictionary file to write")
      ->required();
  bd->add_option("--corpus", bd_opt.corpus, "Corpus file (np source)")
      ->check(CLI::ExistingFile);
  bd->add_option("--format", bd_opt.format, "Corpus format: jsonl | oai-xml")
      ->capture_default_str();
  bd->add_option("--wiki-titles", bd_opt.wiki_titles,
                 "MediaWiki XML dump or one-title-per-line list (wiki source)")
      ->check(CLI::ExistingFile);
  bd->add_option("--stopwords", bd_opt.stopwords,
                 "Stopword file (default: compiled-in English list)")
      ->check(CLI::ExistingFile);
  bd->add_option("--min-df", bd_opt.min_df,
                 "Minimum document frequency for NP phrases")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bd->add_option("--np-strategy", bd_opt.np_strategy,
                 "Noun-phrase strategy: stopword-chunks | pos-pattern")
      ->capture_default_str();
  bd->add_option("--pos-lexicon", bd_opt.pos_lexicon,
                 "Part-of-speech lexicon (default: compiled-in list)")
      ->check(CLI::ExistingFile);
  bd->add_option("--categories", bd_opt.categories,
                 "Category table TSV (default: built-in table)")
      ->check(CLI::ExistingFile);
  bd->add_option("--workers", bd_opt.workers,
                 "Worker threads (0 = all available)")
      ->capture_default_str();

  TagOptions tag_opt;
  CLI::App* tg = app.add_subcommand(
      "tag", "Tag corpus documents with dictionary phrases");
  tg->configurable();
  tg->add_option("--corpus", tag_opt.corpus, "Corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  tg->add_option("--format", tag_opt.format, "Corpus format: jsonl | oai-xml")
      ->capture_default_str();
  tg->add_option("--dict", tag_opt.dict, "Dictionary file")
      ->required()
      ->check(CLI::ExistingFile);
  tg->add_option("--output", tag_opt.output, "Assignment file to write")
      ->required();
  tg->add_option("--categories", tag_opt.categories,
                 "Category table TSV (default: built-in table)")
      ->check(CLI::ExistingFile);
  tg->add_option("--workers", tag_opt.workers,
                 "Worker threads (0 = all available)")
      ->capture_default_str();

  AnalyzeOptions an_opt;
  CLI::App* an = app.add_subcommand(
      "analyze", "Compute statistics and fits from tag assignments");
  an->configurable();
  an->add_option("--corpus", an_opt.corpus, "Corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  an->add_option("--format", an_opt.format, "Corpus format: jsonl | oai-xml")
      ->capture_default_str();
  an->add_option("--wiki-assignments", an_opt.wiki_assignments,
                 "WIKI assignment file")
      ->check(CLI::ExistingFile);
  an->add_option("--np-assignments", an_opt.np_assignments,
                 "NP assignment file")
      ->check(CLI::ExistingFile);
  an->add_option("--wiki-dict", an_opt.wiki_dict,
                 "WIKI dictionary (supplies display forms in reports)")
      ->check(CLI::ExistingFile);
  an->add_option("--np-dict", an_opt.np_dict,
                 "NP dictionary (supplies display forms in reports)")
      ->check(CLI::ExistingFile);
  an->add_option("--output-dir", an_opt.output_dir,
                 "Directory for the analysis bundle")
      ->required();
  an->add_option("--top-k", an_opt.top_k, "Rows in top-tag tables")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  an->add_option("--breakpoint", an_opt.breakpoint,
                 "Rank breakpoint for the piecewise power-law fit")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  an->add_option("--categories", an_opt.categories,
                 "Category table TSV (default: built-in table)")
      ->check(CLI::ExistingFile);

  SelftestOptions st_opt;
  CLI::App* st = app.add_subcommand(
      "selftest", "Run synthetic fit-recovery checks");
  st->configurable();
  st->add_option("--seed", st_opt.seed, "Sampling seed")
      ->capture_default_str();
  st->add_option("--tolerance-scale", st_opt.tolerance_scale,
                 "Multiply all recovery tolerances (testing hook)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (bd->parsed()) return run_build_dict(bd_opt);
    if (tg->parsed()) return run_tag(tag_opt);
    if (an->parsed()) return run_analyze(an_opt);
    if (st->parsed()) return run_selftest(st_opt);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
