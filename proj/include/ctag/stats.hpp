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

#ifndef CTAG_STATS_HPP_
#define CTAG_STATS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "ctag/dictionary.hpp"
#include "ctag/error.hpp"
#include "ctag/ingest.hpp"
#include "ctag/tagger.hpp"
#include "ctag/textnorm.hpp"

namespace ctag::stats {

// A fit could not be produced from the data as given (degenerate,
// underdispersed, too few points). Callers producing reports catch
// this and emit an explicit no-fit row instead of aborting.
class FitError : public InputError {
 public:
  using InputError::InputError;
};

struct RankRow {
  std::uint64_t rank = 0;  // 1-based, consecutive
  textnorm::StemKey key;
  std::uint64_t frequency = 0;  // document frequency

  bool operator==(const RankRow&) const = default;
};

// Rows sorted by descending frequency, ties bytewise on the stem key;
// ranks consecutive from 1.
using RankFrequencyTable = std::vector<RankRow>;

// Fit input: real-valued so synthetic curves can be fitted exactly.
struct RankPoint {
  double rank = 0.0;
  double frequency = 0.0;
};

std::vector<RankPoint> to_points(const RankFrequencyTable& table);

// f(r) = A * r^(-N), least squares in log-log space.
struct ZipfFit {
  double A = 0.0;
  double N = 0.0;
  std::uint64_t r_min = 0;
  std::uint64_t r_max = 0;
  double rss_log = 0.0;
};

struct PiecewiseZipfFit {
  ZipfFit head;  // ranks [1, breakpoint]
  ZipfFit tail;  // ranks (breakpoint, max]
  std::uint64_t breakpoint = 0;
};

// f(r) = C * exp(-D * r^M), least squares on log f; M in (0, 1].
struct StretchedExpFit {
  double C = 0.0;
  double D = 0.0;
  double M = 0.0;
  double rss_log = 0.0;
};

// The 1-D search over M hit its iteration cap. Carries the best fit
// found so far.
class ConvergenceError : public FitError {
 public:
  ConvergenceError(const std::string& message, StretchedExpFit best)
      : FitError(message), best_(best) {}
  const StretchedExpFit& best_fit() const { return best_; }

 private:
  StretchedExpFit best_;
};

// Prob(k) = Gamma(k+R)/(Gamma(R) k!) * P^R * (1-P)^k.
struct NegBinomFit {
  double P = 0.0;
  double R = 0.0;
  double log_likelihood = 0.0;
};

struct UniquenessPoint {
  std::uint64_t rank = 0;
  std::uint64_t unique_count = 0;  // tags in top-rank absent from the other set
  double c = 0.0;                  // unique_count / rank
};

struct UniquenessCurve {
  dictionary::Source method = dictionary::Source::kWiki;
  std::vector<UniquenessPoint> points;  // one per rank, computed exactly
};

struct CategoryStats {
  ingest::CategoryCode category;
  std::uint64_t n_docs = 0;
  double avg_tags_wiki = 0.0;
  double avg_tags_np = 0.0;
  std::optional<double> ratio;  // avg_wiki / avg_np, only when avg_np > 0
};

// k (distinct tags per document) -> document count.
using Histogram = std::map<std::uint64_t, std::uint64_t>;

// ---------------------------------------------------------------------------
// Tables

// Document frequency per tag over all assignments, ranked.
RankFrequencyTable rank_table(std::span<const tagger::TagAssignment> assignments);

// Same, restricted to documents carrying `filter`. Assignment ids must
// exist in the corpus.
RankFrequencyTable rank_table(std::span<const tagger::TagAssignment> assignments,
                              std::span<const ingest::Document> corpus,
                              const ingest::CategoryCode& filter);

struct TopTagTables {
  std::vector<RankRow> top_wiki;
  std::vector<RankRow> top_np;
  std::vector<RankRow> wiki_only;  // top wiki rows absent from the np key set
  std::vector<RankRow> np_only;
  bool wiki_only_short = false;  // fewer than k survivors existed
  bool np_only_short = false;
};

TopTagTables top_only_tables(const RankFrequencyTable& wiki,
                             const RankFrequencyTable& np, std::size_t k);

UniquenessCurve uniqueness_curve(
    const RankFrequencyTable& self,
    const std::unordered_set<textnorm::StemKey>& other_full_keys,
    dictionary::Source method);

std::unordered_set<textnorm::StemKey> key_set(const RankFrequencyTable& table);

// Ranks to emit for curve outputs: every rank up to 10, then
// geometrically spaced (ratio 2^(1/4)), always including the last rank.
std::vector<std::uint64_t> log_spaced_ranks(std::uint64_t max_rank);

// One TagAssignment per corpus document, in corpus order; documents
// absent from `assignments` get an empty tag set. An assignment whose
// id is missing from the corpus is a fatal consistency error.
std::vector<tagger::TagAssignment> align_to_corpus(
    std::span<const ingest::Document> corpus,
    std::span<const tagger::TagAssignment> assignments);

// k = |tags| per document; zero-tag documents count at k = 0.
Histogram tag_count_histogram(std::span<const tagger::TagAssignment> assignments);
Histogram tag_count_histogram(std::span<const tagger::TagAssignment> assignments,
                              std::span<const ingest::Document> corpus,
                              const ingest::CategoryCode& filter);

// Per-category document counts and mean distinct-tag counts. A document
// with several categories contributes to each. Rows sorted by code.
std::vector<CategoryStats> category_averages(
    std::span<const tagger::TagAssignment> assignments_wiki,
    std::span<const tagger::TagAssignment> assignments_np,
    std::span<const ingest::Document> corpus);

// ---------------------------------------------------------------------------
// Fits

// Least squares of log f on log r over ranks in [r_min, r_max].
// Requires r_max > r_min >= 1 and at least 3 points in range.
ZipfFit fit_zipf(std::span<const RankPoint> points, std::uint64_t r_min,
                 std::uint64_t r_max);
ZipfFit fit_zipf(const RankFrequencyTable& table, std::uint64_t r_min,
                 std::uint64_t r_max);

// Independent Zipf fits on [1, breakpoint] and (breakpoint, max]; no
// continuity constraint across the breakpoint.
PiecewiseZipfFit fit_piecewise_zipf(std::span<const RankPoint> points,
                                    std::uint64_t breakpoint);
PiecewiseZipfFit fit_piecewise_zipf(const RankFrequencyTable& table,
                                    std::uint64_t breakpoint);

// Profiled least squares: for fixed M the optimal (log C, D) solve a
// linear regression of log f on r^M; M itself is found by a coarse grid
// scan refined with a golden-section search over (0, 1].
StretchedExpFit fit_stretched_exponential(std::span<const RankPoint> points);
StretchedExpFit fit_stretched_exponential(const RankFrequencyTable& table);

// Maximum likelihood via a 1-D search over R with P(R) = R/(R + mean),
// started from method-of-moments. Requires overdispersion (sample
// variance > mean) and at least two distinct k values.
NegBinomFit fit_negative_binomial(const Histogram& hist);

double nb_log_pmf(std::uint64_t k, double P, double R);
double nb_pmf(std::uint64_t k, double P, double R);

// Standard product-moment coefficient; throws FitError on fewer than
// two points or zero variance.
double pearson_correlation(std::span<const double> xs,
                           std::span<const double> ys);

// ---------------------------------------------------------------------------
// Report bundle

struct MethodData {
  dictionary::Source source = dictionary::Source::kWiki;
  // Aligned to the corpus: one entry per document, empties included.
  std::vector<tagger::TagAssignment> assignments;
  // Optional dictionary supplying display forms for reports.
  std::optional<dictionary::Dictionary> dict;
};

struct ReportConfig {
  std::filesystem::path output_dir;
  std::uint64_t breakpoint = 100;
  std::size_t top_k = 10;
};

struct AnalyzeInputs {
  std::span<const ingest::Document> corpus;
  std::optional<MethodData> wiki;
  std::optional<MethodData> np;
  ReportConfig config;
};

// Writes the full analysis bundle (summary.json plus one TSV per
// table; see README for the layout). Requires at least one method;
// cross-method outputs (uniqueness curves, category ratio table,
// tag-average correlation) appear only when both are present. Fits
// that fail on the given data produce explicit no-fit rows.
void write_report(const AnalyzeInputs& inputs);

}  // namespace ctag::stats

#endif  // CTAG_STATS_HPP_
