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

#include "ctag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <unordered_map>
#include <utility>

namespace ctag::stats {

namespace {

// Simple-precision two-pass ordinary least squares of y on x.
struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
};

Ols least_squares(std::span<const double> xs, std::span<const double> ys) {
  const auto n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (ys[i] - mean_y);
  }
  if (sxx <= 0.0) {
    throw FitError("regression abscissae are all identical");
  }
  Ols fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.rss += resid * resid;
  }
  return fit;
}

// Golden-section minimization of f over [lo, hi] down to interval
// width `tol`. Deterministic; `cap` bounds the iteration count.
template <typename F>
double golden_minimize(F&& f, double lo, double hi, double tol, int cap,
                       bool* converged) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int iterations = 0;
  while (hi - lo > tol && iterations < cap) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
    ++iterations;
  }
  *converged = hi - lo <= tol;
  return 0.5 * (lo + hi);
}

RankFrequencyTable rank_from_counts(
    std::unordered_map<textnorm::StemKey, std::uint64_t> counts) {
  RankFrequencyTable table;
  table.reserve(counts.size());
  for (auto& [key, freq] : counts) {
    table.push_back(RankRow{0, key, freq});
  }
  std::sort(table.begin(), table.end(), [](const RankRow& a, const RankRow& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.key < b.key;
  });
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i].rank = i + 1;
  }
  return table;
}

bool has_category(const ingest::Document& doc,
                  const ingest::CategoryCode& filter) {
  return std::binary_search(doc.categories.begin(), doc.categories.end(),
                            filter);
}

}  // namespace

std::vector<RankPoint> to_points(const RankFrequencyTable& table) {
  std::vector<RankPoint> points;
  points.reserve(table.size());
  for (const auto& row : table) {
    points.push_back(RankPoint{static_cast<double>(row.rank),
                               static_cast<double>(row.frequency)});
  }
  return points;
}

// ---------------------------------------------------------------------------
// Tables

RankFrequencyTable rank_table(
    std::span<const tagger::TagAssignment> assignments) {
  std::unordered_map<textnorm::StemKey, std::uint64_t> counts;
  for (const auto& assignment : assignments) {
    for (const auto& key : assignment.tags) {
      ++counts[key];
    }
  }
  return rank_from_counts(std::move(counts));
}

RankFrequencyTable rank_table(std::span<const tagger::TagAssignment> assignments,
                              std::span<const ingest::Document> corpus,
                              const ingest::CategoryCode& filter) {
  std::unordered_map<std::string_view, const ingest::Document*> by_id;
  by_id.reserve(corpus.size());
  for (const auto& doc : corpus) {
    by_id.emplace(doc.id, &doc);
  }
  std::unordered_map<textnorm::StemKey, std::uint64_t> counts;
  for (const auto& assignment : assignments) {
    auto it = by_id.find(assignment.doc_id);
    if (it == by_id.end()) {
      throw InputError("assignment references document \"" +
                       assignment.doc_id + "\" absent from the corpus");
    }
    if (!has_category(*it->second, filter)) continue;
    for (const auto& key : assignment.tags) {
      ++counts[key];
    }
  }
  return rank_from_counts(std::move(counts));
}

std::unordered_set<textnorm::StemKey> key_set(const RankFrequencyTable& table) {
  std::unordered_set<textnorm::StemKey> keys;
  keys.reserve(table.size());
  for (const auto& row : table) {
    keys.insert(row.key);
  }
  return keys;
}

TopTagTables top_only_tables(const RankFrequencyTable& wiki,
                             const RankFrequencyTable& np, std::size_t k) {
  if (k < 1) {
    throw InputError("top-k must be at least 1");
  }
  TopTagTables out;
  out.top_wiki.assign(wiki.begin(),
                      wiki.begin() + static_cast<std::ptrdiff_t>(
                                         std::min(k, wiki.size())));
  out.top_np.assign(np.begin(), np.begin() + static_cast<std::ptrdiff_t>(
                                                 std::min(k, np.size())));
  const auto np_keys = key_set(np);
  const auto wiki_keys = key_set(wiki);
  for (const auto& row : wiki) {
    if (out.wiki_only.size() == k) break;
    if (!np_keys.contains(row.key)) out.wiki_only.push_back(row);
  }
  for (const auto& row : np) {
    if (out.np_only.size() == k) break;
    if (!wiki_keys.contains(row.key)) out.np_only.push_back(row);
  }
  out.wiki_only_short = out.wiki_only.size() < k;
  out.np_only_short = out.np_only.size() < k;
  return out;
}

UniquenessCurve uniqueness_curve(
    const RankFrequencyTable& self,
    const std::unordered_set<textnorm::StemKey>& other_full_keys,
    dictionary::Source method) {
  if (self.empty()) {
    throw InputError("uniqueness curve requires a non-empty rank table");
  }
  UniquenessCurve curve;
  curve.method = method;
  curve.points.reserve(self.size());
  std::uint64_t unique = 0;
  for (const auto& row : self) {
    if (!other_full_keys.contains(row.key)) ++unique;
    curve.points.push_back(UniquenessPoint{
        row.rank, unique,
        static_cast<double>(unique) / static_cast<double>(row.rank)});
  }
  return curve;
}

std::vector<std::uint64_t> log_spaced_ranks(std::uint64_t max_rank) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 1; r <= std::min<std::uint64_t>(10, max_rank); ++r) {
    out.push_back(r);
  }
  if (max_rank <= 10) return out;
  const double ratio = std::pow(2.0, 0.25);
  double x = 10.0;
  for (;;) {
    x *= ratio;
    const auto r = static_cast<std::uint64_t>(std::llround(x));
    if (r >= max_rank) break;
    if (r > out.back()) out.push_back(r);
  }
  out.push_back(max_rank);
  return out;
}

std::vector<tagger::TagAssignment> align_to_corpus(
    std::span<const ingest::Document> corpus,
    std::span<const tagger::TagAssignment> assignments) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    index.emplace(corpus[i].id, i);
  }
  std::vector<tagger::TagAssignment> out(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out[i].doc_id = corpus[i].id;
  }
  std::vector<bool> filled(corpus.size(), false);
  for (const auto& assignment : assignments) {
    auto it = index.find(assignment.doc_id);
    if (it == index.end()) {
      throw InputError("assignment references document \"" +
                       assignment.doc_id + "\" absent from the corpus");
    }
    if (filled[it->second]) {
      throw InputError("duplicate assignment for document \"" +
                       assignment.doc_id + "\"");
    }
    filled[it->second] = true;
    out[it->second].tags = assignment.tags;
  }
  return out;
}

Histogram tag_count_histogram(
    std::span<const tagger::TagAssignment> assignments) {
  Histogram hist;
  for (const auto& assignment : assignments) {
    ++hist[assignment.tags.size()];
  }
  return hist;
}

Histogram tag_count_histogram(std::span<const tagger::TagAssignment> assignments,
                              std::span<const ingest::Document> corpus,
                              const ingest::CategoryCode& filter) {
  std::unordered_map<std::string_view, std::size_t> counts;
  counts.reserve(assignments.size());
  for (const auto& assignment : assignments) {
    counts.emplace(assignment.doc_id, assignment.tags.size());
  }
  Histogram hist;
  for (const auto& doc : corpus) {
    if (!has_category(doc, filter)) continue;
    auto it = counts.find(doc.id);
    ++hist[it == counts.end() ? 0 : it->second];
  }
  return hist;
}

std::vector<CategoryStats> category_averages(
    std::span<const tagger::TagAssignment> assignments_wiki,
    std::span<const tagger::TagAssignment> assignments_np,
    std::span<const ingest::Document> corpus) {
  std::unordered_map<std::string_view, std::uint64_t> wiki_counts;
  std::unordered_map<std::string_view, std::uint64_t> np_counts;
  std::unordered_set<std::string_view> corpus_ids;
  corpus_ids.reserve(corpus.size());
  for (const auto& doc : corpus) {
    corpus_ids.insert(doc.id);
  }
  const auto collect =
      [&](std::span<const tagger::TagAssignment> assignments,
          std::unordered_map<std::string_view, std::uint64_t>& into) {
        for (const auto& assignment : assignments) {
          if (!corpus_ids.contains(assignment.doc_id)) {
            throw InputError("assignment references document \"" +
                             assignment.doc_id + "\" absent from the corpus");
          }
          into[assignment.doc_id] = assignment.tags.size();
        }
      };
  collect(assignments_wiki, wiki_counts);
  collect(assignments_np, np_counts);

  struct Acc {
    std::uint64_t n_docs = 0;
    std::uint64_t sum_wiki = 0;
    std::uint64_t sum_np = 0;
    bool known = true;
  };
  std::map<std::string, Acc> by_code;  // bytewise row order
  const auto count_of =
      [](const std::unordered_map<std::string_view, std::uint64_t>& counts,
         std::string_view id) -> std::uint64_t {
    auto it = counts.find(id);
    return it == counts.end() ? 0 : it->second;
  };
  for (const auto& doc : corpus) {
    const std::uint64_t wiki_k = count_of(wiki_counts, doc.id);
    const std::uint64_t np_k = count_of(np_counts, doc.id);
    for (const auto& category : doc.categories) {
      Acc& acc = by_code[category.code];
      ++acc.n_docs;
      acc.sum_wiki += wiki_k;
      acc.sum_np += np_k;
      acc.known = category.known;
    }
  }
  std::vector<CategoryStats> rows;
  rows.reserve(by_code.size());
  for (const auto& [code, acc] : by_code) {
    CategoryStats row;
    row.category = ingest::CategoryCode{code, acc.known};
    row.n_docs = acc.n_docs;
    row.avg_tags_wiki =
        static_cast<double>(acc.sum_wiki) / static_cast<double>(acc.n_docs);
    row.avg_tags_np =
        static_cast<double>(acc.sum_np) / static_cast<double>(acc.n_docs);
    if (row.avg_tags_np > 0.0) {
      row.ratio = row.avg_tags_wiki / row.avg_tags_np;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Fits

ZipfFit fit_zipf(std::span<const RankPoint> points, std::uint64_t r_min,
                 std::uint64_t r_max) {
  if (r_min < 1 || r_max <= r_min) {
    throw FitError("degenerate rank range [" + std::to_string(r_min) + ", " +
                   std::to_string(r_max) + "]");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  double used_min = std::numeric_limits<double>::infinity();
  double used_max = 0.0;
  for (const auto& point : points) {
    if (point.rank < static_cast<double>(r_min) ||
        point.rank > static_cast<double>(r_max)) {
      continue;
    }
    if (point.rank <= 0.0 || point.frequency <= 0.0) {
      throw FitError("rank-frequency points must be positive");
    }
    xs.push_back(std::log(point.rank));
    ys.push_back(std::log(point.frequency));
    used_min = std::min(used_min, point.rank);
    used_max = std::max(used_max, point.rank);
  }
  if (xs.size() < 3) {
    throw FitError("need at least 3 points in rank range [" +
                   std::to_string(r_min) + ", " + std::to_string(r_max) +
                   "], got " + std::to_string(xs.size()));
  }
  const Ols ols = least_squares(xs, ys);
  ZipfFit fit;
  fit.A = std::exp(ols.intercept);
  fit.N = -ols.slope;
  fit.r_min = static_cast<std::uint64_t>(std::llround(used_min));
  fit.r_max = static_cast<std::uint64_t>(std::llround(used_max));
  fit.rss_log = ols.rss;
  return fit;
}

ZipfFit fit_zipf(const RankFrequencyTable& table, std::uint64_t r_min,
                 std::uint64_t r_max) {
  const std::vector<RankPoint> points = to_points(table);
  return fit_zipf(points, r_min, r_max);
}

PiecewiseZipfFit fit_piecewise_zipf(std::span<const RankPoint> points,
                                    std::uint64_t breakpoint) {
  if (breakpoint < 1) {
    throw FitError("breakpoint must be at least 1");
  }
  double max_rank = 0.0;
  for (const auto& point : points) {
    max_rank = std::max(max_rank, point.rank);
  }
  const auto max_rank_int = static_cast<std::uint64_t>(std::llround(max_rank));
  if (max_rank_int <= breakpoint) {
    throw FitError("rank table (max rank " + std::to_string(max_rank_int) +
                   ") does not extend past breakpoint " +
                   std::to_string(breakpoint));
  }
  PiecewiseZipfFit fit;
  fit.breakpoint = breakpoint;
  fit.head = fit_zipf(points, 1, breakpoint);
  fit.tail = fit_zipf(points, breakpoint + 1, max_rank_int);
  return fit;
}

PiecewiseZipfFit fit_piecewise_zipf(const RankFrequencyTable& table,
                                    std::uint64_t breakpoint) {
  const std::vector<RankPoint> points = to_points(table);
  return fit_piecewise_zipf(points, breakpoint);
}

StretchedExpFit fit_stretched_exponential(std::span<const RankPoint> points) {
  if (points.size() < 4) {
    throw FitError("stretched-exponential fit needs at least 4 points, got " +
                   std::to_string(points.size()));
  }
  std::vector<double> ranks;
  std::vector<double> ys;
  ranks.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& point : points) {
    if (point.rank <= 0.0 || point.frequency <= 0.0) {
      throw FitError("rank-frequency points must be positive");
    }
    ranks.push_back(point.rank);
    ys.push_back(std::log(point.frequency));
  }

  // Profiled objective: for fixed M the optimal (log C, D) are the
  // least-squares solution of y = a - D * r^M.
  std::vector<double> g(ranks.size());
  const auto profile = [&](double m) -> Ols {
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      g[i] = std::pow(ranks[i], m);
    }
    return least_squares(g, ys);
  };
  const auto rss_at = [&](double m) { return profile(m).rss; };

  constexpr double kGridStep = 0.02;
  // As M -> 0 the model degenerates to a power law: C and D diverge with
  // D*M pinned to the Zipf slope, so no interior optimum exists down there.
  // The search is kept clear of that corner, and a minimizer pressed against
  // it (or a solve that has already overflowed) is reported as
  // non-convergence carrying the boundary fit.
  constexpr double kMinM = kGridStep / 2;
  double best_m = kGridStep;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 50; ++i) {
    const double m = kGridStep * i;
    const double rss = rss_at(m);
    if (rss < best_rss) {
      best_rss = rss;
      best_m = m;
    }
  }
  const double lo = std::max(kMinM, best_m - kGridStep);
  const double hi = std::min(1.0, best_m + kGridStep);
  bool converged = false;
  const double refined =
      golden_minimize(rss_at, lo, hi, 1e-4, 200, &converged);

  const Ols ols = profile(refined);
  StretchedExpFit fit;
  fit.C = std::exp(ols.intercept);
  fit.D = -ols.slope;
  fit.M = refined;
  fit.rss_log = ols.rss;
  if (refined <= kMinM + 1e-3 || !std::isfinite(fit.C) ||
      !std::isfinite(fit.D)) {
    throw ConvergenceError(
        "stretched-exponential fit degenerates toward a power law (M -> 0)",
        fit);
  }
  if (!converged) {
    throw ConvergenceError("stretched-exponential search hit iteration cap",
                           fit);
  }
  if (fit.D <= 0.0) {
    throw FitError("stretched-exponential fit does not decay (D <= 0)");
  }
  return fit;
}

StretchedExpFit fit_stretched_exponential(const RankFrequencyTable& table) {
  const std::vector<RankPoint> points = to_points(table);
  return fit_stretched_exponential(points);
}

double nb_log_pmf(std::uint64_t k, double P, double R) {
  const auto kd = static_cast<double>(k);
  return std::lgamma(kd + R) - std::lgamma(R) - std::lgamma(kd + 1.0) +
         R * std::log(P) + kd * std::log1p(-P);
}

double nb_pmf(std::uint64_t k, double P, double R) {
  return std::exp(nb_log_pmf(k, P, R));
}

NegBinomFit fit_negative_binomial(const Histogram& hist) {
  std::uint64_t n = 0;
  std::size_t distinct = 0;
  for (const auto& [k, count] : hist) {
    (void)k;
    if (count == 0) continue;
    ++distinct;
    n += count;
  }
  if (distinct < 2) {
    throw FitError("negative-binomial fit needs at least 2 distinct tag "
                   "counts, got " +
                   std::to_string(distinct));
  }
  double mean = 0.0;
  for (const auto& [k, count] : hist) {
    mean += static_cast<double>(k) * static_cast<double>(count);
  }
  mean /= static_cast<double>(n);
  double variance = 0.0;  // unbiased
  for (const auto& [k, count] : hist) {
    const double dk = static_cast<double>(k) - mean;
    variance += static_cast<double>(count) * dk * dk;
  }
  variance /= static_cast<double>(n - 1);
  if (variance <= mean) {
    throw FitError("tag counts are not overdispersed (variance " +
                   std::to_string(variance) + " <= mean " +
                   std::to_string(mean) + "); no negative-binomial fit");
  }

  const double r_mom = mean * mean / (variance - mean);
  const auto log_likelihood = [&](double r) {
    const double p = r / (r + mean);
    double ll = 0.0;
    for (const auto& [k, count] : hist) {
      if (count == 0) continue;
      ll += static_cast<double>(count) * nb_log_pmf(k, p, r);
    }
    return ll;
  };

  // Grid over log R around the moment estimate, then golden-section.
  const double center = std::log(r_mom);
  double best_lr = center;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = -30; i <= 30; ++i) {
    const double lr = center + 0.1 * i;
    const double ll = log_likelihood(std::exp(lr));
    if (ll > best_ll) {
      best_ll = ll;
      best_lr = lr;
    }
  }
  bool converged = false;
  const double refined_lr = golden_minimize(
      [&](double lr) { return -log_likelihood(std::exp(lr)); }, best_lr - 0.1,
      best_lr + 0.1, 1e-6, 300, &converged);

  // Keep whichever candidate scores best; the moment estimate is a
  // floor, so the reported likelihood never falls below it.
  double r_hat = std::exp(refined_lr);
  double ll_hat = log_likelihood(r_hat);
  if (log_likelihood(r_mom) > ll_hat) {
    r_hat = r_mom;
    ll_hat = log_likelihood(r_mom);
  }
  NegBinomFit fit;
  fit.R = r_hat;
  fit.P = r_hat / (r_hat + mean);
  fit.log_likelihood = ll_hat;
  return fit;
}

double pearson_correlation(std::span<const double> xs,
                           std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw FitError("correlation inputs differ in length");
  }
  if (xs.size() < 2) {
    throw FitError("correlation needs at least 2 points, got " +
                   std::to_string(xs.size()));
  }
  const auto n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw FitError("correlation undefined: an input has zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace ctag::stats
