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
// Analysis bundle emission. Every file is a '#'-headed TSV except
// summary.json; all floats use 12 significant digits and iteration
// orders are fixed, so a given input yields identical bytes.

#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ctag/stats.hpp"
#include "ctag/util.hpp"

namespace ctag::stats {

namespace {

using textnorm::StemKey;

template <typename T>
struct Maybe {
  std::optional<T> value;
  std::string reason;
};

template <typename T, typename F>
Maybe<T> try_fit(F&& fit) {
  Maybe<T> out;
  try {
    out.value = fit();
  } catch (const FitError& e) {
    out.reason = e.what();
  }
  return out;
}

struct MethodReport {
  const MethodData* data = nullptr;
  std::string name;  // "WIKI" | "NP"
  RankFrequencyTable table;
  std::uint64_t tagged_docs = 0;
  std::uint64_t total_instances = 0;
  Histogram hist;
  Maybe<ZipfFit> zipf;
  Maybe<PiecewiseZipfFit> piecewise;
  Maybe<StretchedExpFit> stretched;
  Maybe<NegBinomFit> neg_binom;
};

MethodReport build_method_report(const MethodData& data,
                                 const ReportConfig& config) {
  MethodReport report;
  report.data = &data;
  report.name = std::string(dictionary::source_name(data.source));
  report.table = rank_table(data.assignments);
  for (const auto& assignment : data.assignments) {
    if (!assignment.tags.empty()) ++report.tagged_docs;
  }
  for (const auto& row : report.table) {
    report.total_instances += row.frequency;
  }
  report.hist = tag_count_histogram(data.assignments);
  if (report.table.empty()) {
    report.zipf.reason = "empty rank table";
    report.piecewise.reason = "empty rank table";
    report.stretched.reason = "empty rank table";
  } else {
    const std::uint64_t max_rank = report.table.back().rank;
    report.zipf =
        try_fit<ZipfFit>([&] { return fit_zipf(report.table, 1, max_rank); });
    report.piecewise = try_fit<PiecewiseZipfFit>(
        [&] { return fit_piecewise_zipf(report.table, config.breakpoint); });
    report.stretched = try_fit<StretchedExpFit>(
        [&] { return fit_stretched_exponential(report.table); });
  }
  report.neg_binom =
      try_fit<NegBinomFit>([&] { return fit_negative_binomial(report.hist); });
  return report;
}

// Display form for reports; falls back to the stem key when no
// dictionary (or no entry) is available.
std::string cell_text(const MethodData& data, const StemKey& key) {
  if (data.dict) {
    if (const dictionary::PhraseEntry* entry = data.dict->find(key)) {
      return entry->display;
    }
  }
  return key.joined();
}

std::string display_or_dash(const MethodData& data, const StemKey& key) {
  if (data.dict) {
    if (const dictionary::PhraseEntry* entry = data.dict->find(key)) {
      return entry->display;
    }
  }
  return "-";
}

std::string zipf_params(const ZipfFit& fit, const std::string& prefix = "") {
  return prefix + "A=" + util::fmt_g12(fit.A) + ";" + prefix +
         "N=" + util::fmt_g12(fit.N) + ";" + prefix +
         "r_min=" + std::to_string(fit.r_min) + ";" + prefix +
         "r_max=" + std::to_string(fit.r_max) + ";" + prefix +
         "rss_log=" + util::fmt_g12(fit.rss_log);
}

std::string piecewise_params(const PiecewiseZipfFit& fit) {
  return "breakpoint=" + std::to_string(fit.breakpoint) + ";" +
         zipf_params(fit.head, "head_") + ";" + zipf_params(fit.tail, "tail_");
}

std::string stretched_params(const StretchedExpFit& fit) {
  return "C=" + util::fmt_g12(fit.C) + ";D=" + util::fmt_g12(fit.D) +
         ";M=" + util::fmt_g12(fit.M) +
         ";rss_log=" + util::fmt_g12(fit.rss_log);
}

std::string neg_binom_params(const NegBinomFit& fit) {
  return "P=" + util::fmt_g12(fit.P) + ";R=" + util::fmt_g12(fit.R) +
         ";log_likelihood=" + util::fmt_g12(fit.log_likelihood);
}

void fit_row(std::ostringstream& out, const std::string& scope,
             const std::string& method, const std::string& model,
             const std::string& status, const std::string& params) {
  out << scope << '\t' << method << '\t' << model << '\t' << status << '\t'
      << params << "\n";
}

// ---------------------------------------------------------------------------
// summary.json

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(ch)));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::string json_string(std::string_view s) {
  return "\"" + json_escape(s) + "\"";
}

std::string zipf_json(const ZipfFit& fit) {
  return "{\"status\": \"ok\", \"A\": " + util::fmt_g12(fit.A) +
         ", \"N\": " + util::fmt_g12(fit.N) +
         ", \"r_min\": " + std::to_string(fit.r_min) +
         ", \"r_max\": " + std::to_string(fit.r_max) +
         ", \"rss_log\": " + util::fmt_g12(fit.rss_log) + "}";
}

std::string no_fit_json(const std::string& reason) {
  return "{\"status\": \"no-fit\", \"reason\": " + json_string(reason) + "}";
}

std::string fits_json(const MethodReport& report, const std::string& indent) {
  std::string out = "{\n";
  out += indent + "  \"zipf\": " +
         (report.zipf.value ? zipf_json(*report.zipf.value)
                            : no_fit_json(report.zipf.reason)) +
         ",\n";
  if (report.piecewise.value) {
    const PiecewiseZipfFit& fit = *report.piecewise.value;
    out += indent + "  \"zipf_piecewise\": {\"status\": \"ok\", \"breakpoint\": " +
           std::to_string(fit.breakpoint) +
           ", \"head\": " + zipf_json(fit.head) +
           ", \"tail\": " + zipf_json(fit.tail) + "},\n";
  } else {
    out += indent + "  \"zipf_piecewise\": " +
           no_fit_json(report.piecewise.reason) + ",\n";
  }
  if (report.stretched.value) {
    const StretchedExpFit& fit = *report.stretched.value;
    out += indent + "  \"stretched_exp\": {\"status\": \"ok\", \"C\": " +
           util::fmt_g12(fit.C) + ", \"D\": " + util::fmt_g12(fit.D) +
           ", \"M\": " + util::fmt_g12(fit.M) +
           ", \"rss_log\": " + util::fmt_g12(fit.rss_log) + "},\n";
  } else {
    out += indent + "  \"stretched_exp\": " +
           no_fit_json(report.stretched.reason) + ",\n";
  }
  if (report.neg_binom.value) {
    const NegBinomFit& fit = *report.neg_binom.value;
    out += indent + "  \"neg_binom\": {\"status\": \"ok\", \"P\": " +
           util::fmt_g12(fit.P) + ", \"R\": " + util::fmt_g12(fit.R) +
           ", \"log_likelihood\": " + util::fmt_g12(fit.log_likelihood) +
           "}\n";
  } else {
    out += indent + "  \"neg_binom\": " + no_fit_json(report.neg_binom.reason) +
           "\n";
  }
  out += indent + "}";
  return out;
}

std::string method_json(const MethodReport& report) {
  std::string out = "{\n";
  out += "      \"tagged_docs\": " + std::to_string(report.tagged_docs) + ",\n";
  out += "      \"distinct_tags\": " + std::to_string(report.table.size()) +
         ",\n";
  out += "      \"total_tag_instances\": " +
         std::to_string(report.total_instances) + ",\n";
  out += "      \"fits\": " + fits_json(report, "      ") + "\n";
  out += "    }";
  return out;
}

}  // namespace

void write_report(const AnalyzeInputs& inputs) {
  if (!inputs.wiki && !inputs.np) {
    throw InputError("analysis requires at least one method's assignments");
  }
  for (const auto* method : {&inputs.wiki, &inputs.np}) {
    if (*method && (*method)->assignments.size() != inputs.corpus.size()) {
      throw InputError(
          "assignments are not aligned to the corpus (sizes " +
          std::to_string((*method)->assignments.size()) + " vs " +
          std::to_string(inputs.corpus.size()) + ")");
    }
  }
  const ReportConfig& config = inputs.config;
  std::filesystem::create_directories(config.output_dir);

  std::vector<MethodReport> reports;
  if (inputs.wiki) reports.push_back(build_method_report(*inputs.wiki, config));
  if (inputs.np) reports.push_back(build_method_report(*inputs.np, config));
  const bool two_method = inputs.wiki && inputs.np;

  // Category codes present in the corpus, bytewise order.
  std::map<std::string, bool> codes;  // code -> known
  for (const auto& doc : inputs.corpus) {
    for (const auto& category : doc.categories) {
      codes.emplace(category.code, category.known);
    }
  }

  // --- category_share.tsv ---
  {
    std::ostringstream out;
    out << "#category\tknown\tdoc_count\tpercentage\n";
    for (const auto& row : ingest::category_histogram(inputs.corpus)) {
      out << row.category.code << '\t' << (row.category.known ? "yes" : "no")
          << '\t' << row.doc_count << '\t' << util::fmt_g12(row.percentage)
          << "\n";
    }
    util::atomic_write_file(config.output_dir / "category_share.tsv",
                            out.str());
  }

  // --- rank_freq_<method>.tsv ---
  for (const auto& report : reports) {
    std::ostringstream out;
    out << "#rank\tstem_key\tdisplay\tfrequency\n";
    for (const auto& row : report.table) {
      out << row.rank << '\t' << row.key.joined() << '\t'
          << display_or_dash(*report.data, row.key) << '\t' << row.frequency
          << "\n";
    }
    const std::string name =
        report.data->source == dictionary::Source::kWiki ? "rank_freq_wiki.tsv"
                                                         : "rank_freq_np.tsv";
    util::atomic_write_file(config.output_dir / name, out.str());
  }

  // --- top_tags.tsv ---
  {
    std::ostringstream out;
    out << "#scope\trank";
    for (const auto& report : reports) {
      out << '\t' << (report.data->source == dictionary::Source::kWiki
                          ? "wiki"
                          : "np");
    }
    if (two_method) out << "\twiki_only\tnp_only";
    out << "\n";

    const auto emit_scope = [&](const std::string& scope,
                                const RankFrequencyTable& wiki_table,
                                const RankFrequencyTable& np_table) {
      const auto text_at = [&](const std::vector<RankRow>& rows,
                               const MethodData& data,
                               std::size_t i) -> std::string {
        return i < rows.size() ? cell_text(data, rows[i].key) : "-";
      };
      if (two_method) {
        const TopTagTables tops =
            top_only_tables(wiki_table, np_table, config.top_k);
        for (std::size_t i = 0; i < config.top_k; ++i) {
          out << scope << '\t' << (i + 1) << '\t'
              << text_at(tops.top_wiki, *inputs.wiki, i) << '\t'
              << text_at(tops.top_np, *inputs.np, i) << '\t'
              << text_at(tops.wiki_only, *inputs.wiki, i) << '\t'
              << text_at(tops.np_only, *inputs.np, i) << "\n";
        }
      } else {
        const MethodReport& only = reports.front();
        const RankFrequencyTable& table =
            only.data->source == dictionary::Source::kWiki ? wiki_table
                                                           : np_table;
        for (std::size_t i = 0; i < config.top_k; ++i) {
          out << scope << '\t' << (i + 1) << '\t'
              << (i < table.size() ? cell_text(*only.data, table[i].key) : "-")
              << "\n";
        }
      }
    };

    RankFrequencyTable empty;
    emit_scope("pooled", inputs.wiki ? reports.front().table : empty,
               inputs.np ? reports.back().table : empty);
    for (const auto& [code, known] : codes) {
      (void)known;
      const ingest::CategoryCode filter{code, true};
      RankFrequencyTable wiki_table;
      RankFrequencyTable np_table;
      if (inputs.wiki) {
        wiki_table =
            rank_table(inputs.wiki->assignments, inputs.corpus, filter);
      }
      if (inputs.np) {
        np_table = rank_table(inputs.np->assignments, inputs.corpus, filter);
      }
      emit_scope(code, wiki_table, np_table);
    }
    util::atomic_write_file(config.output_dir / "top_tags.tsv", out.str());
  }

  // --- uniqueness.tsv (two-method only) ---
  if (two_method) {
    const MethodReport& wiki_report = reports.front();
    const MethodReport& np_report = reports.back();
    std::ostringstream out;
    out << "#method\trank\tunique_count\tc\n";
    const auto emit_curve = [&](const MethodReport& self,
                                const MethodReport& other) {
      if (self.table.empty()) return;
      const UniquenessCurve curve = uniqueness_curve(
          self.table, key_set(other.table), self.data->source);
      for (const std::uint64_t rank :
           log_spaced_ranks(curve.points.back().rank)) {
        const UniquenessPoint& point = curve.points[rank - 1];
        out << self.name << '\t' << point.rank << '\t' << point.unique_count
            << '\t' << util::fmt_g12(point.c) << "\n";
      }
    };
    emit_curve(wiki_report, np_report);
    emit_curve(np_report, wiki_report);
    util::atomic_write_file(config.output_dir / "uniqueness.tsv", out.str());
  }

  // --- category_stats.tsv (two-method only) ---
  std::vector<CategoryStats> cat_rows;
  if (two_method) {
    cat_rows = category_averages(inputs.wiki->assignments,
                                 inputs.np->assignments, inputs.corpus);
    std::ostringstream out;
    out << "#category\tknown\tn_docs\tavg_tags_wiki\tavg_tags_np\tratio\n";
    for (const auto& row : cat_rows) {
      out << row.category.code << '\t' << (row.category.known ? "yes" : "no")
          << '\t' << row.n_docs << '\t' << util::fmt_g12(row.avg_tags_wiki)
          << '\t' << util::fmt_g12(row.avg_tags_np) << '\t'
          << (row.ratio ? util::fmt_g12(*row.ratio) : "-") << "\n";
    }
    util::atomic_write_file(config.output_dir / "category_stats.tsv",
                            out.str());
  }

  // --- tag_count_hist.tsv ---
  {
    std::ostringstream out;
    out << "#scope\tmethod\tk\tdoc_count\n";
    for (const auto& report : reports) {
      for (const auto& [k, count] : report.hist) {
        out << "pooled\t" << report.name << '\t' << k << '\t' << count << "\n";
      }
    }
    for (const auto& [code, known] : codes) {
      (void)known;
      const ingest::CategoryCode filter{code, true};
      for (const auto& report : reports) {
        const Histogram hist = tag_count_histogram(report.data->assignments,
                                                   inputs.corpus, filter);
        for (const auto& [k, count] : hist) {
          out << code << '\t' << report.name << '\t' << k << '\t' << count
              << "\n";
        }
      }
    }
    util::atomic_write_file(config.output_dir / "tag_count_hist.tsv",
                            out.str());
  }

  // --- fits.tsv ---
  {
    std::ostringstream out;
    out << "#scope\tmethod\tmodel\tstatus\tparams\n";
    for (const auto& report : reports) {
      if (report.zipf.value) {
        fit_row(out, "pooled", report.name, "zipf", "ok",
                zipf_params(*report.zipf.value));
      } else {
        fit_row(out, "pooled", report.name, "zipf", "no-fit",
                report.zipf.reason);
      }
      if (report.piecewise.value) {
        fit_row(out, "pooled", report.name, "zipf-piecewise", "ok",
                piecewise_params(*report.piecewise.value));
      } else {
        fit_row(out, "pooled", report.name, "zipf-piecewise", "no-fit",
                report.piecewise.reason);
      }
      if (report.stretched.value) {
        fit_row(out, "pooled", report.name, "stretched-exp", "ok",
                stretched_params(*report.stretched.value));
      } else {
        fit_row(out, "pooled", report.name, "stretched-exp", "no-fit",
                report.stretched.reason);
      }
      if (report.neg_binom.value) {
        fit_row(out, "pooled", report.name, "neg-binom", "ok",
                neg_binom_params(*report.neg_binom.value));
      } else {
        fit_row(out, "pooled", report.name, "neg-binom", "no-fit",
                report.neg_binom.reason);
      }
    }
    for (const auto& [code, known] : codes) {
      (void)known;
      const ingest::CategoryCode filter{code, true};
      for (const auto& report : reports) {
        const Histogram hist = tag_count_histogram(report.data->assignments,
                                                   inputs.corpus, filter);
        const Maybe<NegBinomFit> fit = try_fit<NegBinomFit>(
            [&] { return fit_negative_binomial(hist); });
        if (fit.value) {
          fit_row(out, code, report.name, "neg-binom", "ok",
                  neg_binom_params(*fit.value));
        } else {
          fit_row(out, code, report.name, "neg-binom", "no-fit", fit.reason);
        }
      }
    }
    util::atomic_write_file(config.output_dir / "fits.tsv", out.str());
  }

  // --- summary.json ---
  {
    std::string out = "{\n";
    out += "  \"schema_version\": 1,\n";
    out += "  \"n_docs\": " + std::to_string(inputs.corpus.size()) + ",\n";
    out += "  \"n_categories\": " + std::to_string(codes.size()) + ",\n";
    out += "  \"top_k\": " + std::to_string(config.top_k) + ",\n";
    out += "  \"breakpoint\": " + std::to_string(config.breakpoint) + ",\n";
    out += "  \"methods\": [";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      out += (i ? ", " : "") + json_string(reports[i].name);
    }
    out += "],\n";
    out += "  \"per_method\": {\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      out += "    " + json_string(reports[i].name) + ": " +
             method_json(reports[i]) + (i + 1 < reports.size() ? ",\n" : "\n");
    }
    out += "  },\n";
    if (two_method) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& row : cat_rows) {
        xs.push_back(row.avg_tags_wiki);
        ys.push_back(row.avg_tags_np);
      }
      const Maybe<double> rho = try_fit<double>(
          [&] { return pearson_correlation(xs, ys); });
      if (rho.value) {
        out += "  \"rho_avg_tags\": {\"status\": \"ok\", \"value\": " +
               util::fmt_g12(*rho.value) + "}\n";
      } else {
        out += "  \"rho_avg_tags\": " + no_fit_json(rho.reason) + "\n";
      }
    } else {
      out += "  \"rho_avg_tags\": " +
             no_fit_json("requires both WIKI and NP assignments") + "\n";
    }
    out += "}\n";
    util::atomic_write_file(config.output_dir / "summary.json", out);
  }
}

}  // namespace ctag::stats
