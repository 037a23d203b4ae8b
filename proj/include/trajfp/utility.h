// Copyright 2026 The trajfp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Utility of a transformed dataset relative to the original: count-query
// errors, popularity ranking, trip/diameter distributions, and DTW.

#ifndef TRAJFP_UTILITY_H_
#define TRAJFP_UTILITY_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajfp/error.h"
#include "trajfp/geo.h"
#include "trajfp/rng.h"

namespace trajfp {

struct RegionQuery {
  Cell center;
  double radius = 1.0;  // cell units

  bool contains(Cell c) const { return cell_distance(c, center) <= radius; }
};

using Pattern = std::pair<Cell, Cell>;

struct UtilityReport {
  double qa_points_avre = 0.0;
  double qa_patterns_avre = 0.0;
  double popularity_kt = 1.0;
  double trip_error_jsd = 0.0;
  double diameter_error_jsd = 0.0;
  double dtw_mean = 0.0;
};

namespace detail {

inline double relative_error(double truth, double released, double floor) {
  return std::abs(truth - released) / std::max(truth, floor);
}

inline double query_floor(const Dataset& d) {
  return 0.01 * static_cast<double>(d.trajectories.size());
}

inline std::size_t region_count(const Dataset& d, const RegionQuery& q) {
  std::size_t n = 0;
  for (const Trajectory& t : d.trajectories) {
    if (std::any_of(t.cells.begin(), t.cells.end(),
                    [&](Cell c) { return q.contains(c); })) {
      ++n;
    }
  }
  return n;
}

inline std::map<Pattern, std::size_t> pattern_counts(const Dataset& d) {
  std::map<Pattern, std::size_t> counts;
  for (const Trajectory& t : d.trajectories) {
    for (std::size_t j = 1; j < t.cells.size(); ++j) ++counts[{t.cells[j - 1], t.cells[j]}];
  }
  return counts;
}

// Histogram over [0, L/10), ..., [9L/10, L), [L, inf).
inline std::vector<double> eleven_bins(std::span<const double> values, double L) {
  std::vector<double> h(11, 0.0);
  for (double v : values) {
    std::size_t bin = 10;
    if (L > 0.0 && v < L) {
      bin = std::min<std::size_t>(9, static_cast<std::size_t>(std::floor(v / (L / 10.0))));
    }
    h[bin] += 1.0;
  }
  return h;
}

inline std::vector<double> trip_lengths(const Dataset& d) {
  std::vector<double> out;
  for (const Trajectory& t : d.trajectories) {
    double len = 0.0;
    for (std::size_t j = 1; j < t.cells.size(); ++j) len += cell_distance(t.cells[j - 1], t.cells[j]);
    out.push_back(len);
  }
  return out;
}

inline std::vector<double> step_lengths(const Dataset& d) {
  std::vector<double> out;
  for (const Trajectory& t : d.trajectories) {
    for (std::size_t j = 1; j < t.cells.size(); ++j) {
      out.push_back(cell_distance(t.cells[j - 1], t.cells[j]));
    }
  }
  return out;
}

}  // namespace detail

// Jensen-Shannon divergence (log base 2) between two unnormalized histograms.
inline double jensen_shannon(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch, "histogram sizes differ");
  double sa = 0.0, sb = 0.0;
  for (double v : a) sa += v;
  for (double v : b) sb += v;
  require(sa > 0.0 && sb > 0.0, ErrorCode::kEmptyDataset, "empty histogram");
  double jsd = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = a[i] / sa;
    const double q = b[i] / sb;
    const double m = 0.5 * (p + q);
    if (p > 0.0) jsd += 0.5 * p * std::log2(p / m);
    if (q > 0.0) jsd += 0.5 * q * std::log2(q / m);
  }
  return std::clamp(jsd, 0.0, 1.0);
}

inline double qa_points(const Dataset& d, const Dataset& d_prime,
                        std::span<const RegionQuery> queries) {
  require(!queries.empty(), ErrorCode::kEmptyQuerySet, "no region queries");
  const double b = detail::query_floor(d);
  double sum = 0.0;
  for (const RegionQuery& q : queries) {
    sum += detail::relative_error(static_cast<double>(detail::region_count(d, q)),
                                  static_cast<double>(detail::region_count(d_prime, q)), b);
  }
  return sum / static_cast<double>(queries.size());
}

inline double qa_patterns(const Dataset& d, const Dataset& d_prime,
                          std::span<const Pattern> patterns) {
  require(!patterns.empty(), ErrorCode::kEmptyQuerySet, "no patterns");
  const double b = detail::query_floor(d);
  const auto cd = detail::pattern_counts(d);
  const auto cp = detail::pattern_counts(d_prime);
  auto count = [](const std::map<Pattern, std::size_t>& m, const Pattern& p) {
    const auto it = m.find(p);
    return it == m.end() ? 0.0 : static_cast<double>(it->second);
  };
  double sum = 0.0;
  for (const Pattern& p : patterns) sum += detail::relative_error(count(cd, p), count(cp, p), b);
  return sum / static_cast<double>(patterns.size());
}

// Kendall tau-a between per-cell point counts, over cells visited in d.
inline double popularity_kendall(const Dataset& d, const Dataset& d_prime) {
  require(d.grid == d_prime.grid, ErrorCode::kInvalidArgument, "datasets use different grids");
  std::vector<double> cd(d.grid.cell_count(), 0.0), cp(d.grid.cell_count(), 0.0);
  for (const Trajectory& t : d.trajectories) {
    for (Cell c : t.cells) cd[d.grid.index(c)] += 1.0;
  }
  for (const Trajectory& t : d_prime.trajectories) {
    for (Cell c : t.cells) cp[d.grid.index(c)] += 1.0;
  }
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < cd.size(); ++i) {
    if (cd[i] > 0.0) cells.push_back(i);
  }
  if (cells.size() < 2) return 1.0;
  long long net = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t k = i + 1; k < cells.size(); ++k) {
      const double a = cd[cells[i]] - cd[cells[k]];
      const double b = cp[cells[i]] - cp[cells[k]];
      if (a * b > 0.0) ++net;
      if (a * b < 0.0) --net;
    }
  }
  const double pairs = 0.5 * static_cast<double>(cells.size()) * (cells.size() - 1);
  return static_cast<double>(net) / pairs;
}

inline double trip_error(const Dataset& d, const Dataset& d_prime) {
  require(!d.trajectories.empty() && !d_prime.trajectories.empty(),
          ErrorCode::kEmptyDataset, "empty dataset");
  const auto a = detail::trip_lengths(d);
  const auto b = detail::trip_lengths(d_prime);
  const double L = *std::max_element(a.begin(), a.end());
  return jensen_shannon(detail::eleven_bins(a, L), detail::eleven_bins(b, L));
}

inline double diameter_error(const Dataset& d, const Dataset& d_prime) {
  const auto a = detail::step_lengths(d);
  const auto b = detail::step_lengths(d_prime);
  require(!a.empty() && !b.empty(), ErrorCode::kEmptyDataset,
          "no consecutive point pairs");
  const double L = *std::max_element(a.begin(), a.end());
  return jensen_shannon(detail::eleven_bins(a, L), detail::eleven_bins(b, L));
}

// Full-alignment DTW with Euclidean cell distance as local cost.
inline double dtw(std::span<const Cell> a, std::span<const Cell> b) {
  require(!a.empty() && !b.empty(), ErrorCode::kInvalidArgument, "empty sequence");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(b.size() + 1, inf), cur(b.size() + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = inf;
    for (std::size_t k = 1; k <= b.size(); ++k) {
      cur[k] = cell_distance(a[i - 1], b[k - 1]) +
               std::min({prev[k], cur[k - 1], prev[k - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline double dtw_mean(const Dataset& d, const Dataset& d_prime) {
  require(!d.trajectories.empty(), ErrorCode::kEmptyDataset, "empty dataset");
  std::map<std::string, const Trajectory*> other;
  for (const Trajectory& t : d_prime.trajectories) other[t.id] = &t;
  double sum = 0.0;
  for (const Trajectory& t : d.trajectories) {
    const auto it = other.find(t.id);
    if (it == other.end()) {
      throw Error(ErrorCode::kUnknownTrajectory, "no trajectory '" + t.id + "' to compare");
    }
    sum += dtw(t.cells, it->second->cells);
  }
  return sum / static_cast<double>(d.trajectories.size());
}

// Seeded circular queries, radius uniform in [1, N/10] cells.
inline std::vector<RegionQuery> random_queries(const Grid& g, std::size_t count, Rng& rng) {
  const double r_max = std::max(1.0, g.n() / 10.0);
  std::vector<RegionQuery> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Cell c = g.cell(uniform_index(rng, g.cell_count()));
    out.push_back({c, uniform(rng, 1.0, r_max)});
  }
  return out;
}

// The `count` most frequent 2-grams of d; ties by pattern order.
inline std::vector<Pattern> top_patterns(const Dataset& d, std::size_t count) {
  const auto counts = detail::pattern_counts(d);
  std::vector<std::pair<Pattern, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<Pattern> out;
  for (std::size_t i = 0; i < ranked.size() && i < count; ++i) out.push_back(ranked[i].first);
  return out;
}

struct Workload {
  std::vector<RegionQuery> queries;
  std::vector<Pattern> patterns;
};

inline Workload default_workload(const Dataset& d, Rng& rng, std::size_t queries = 200,
                                 std::size_t patterns = 200) {
  return {random_queries(d.grid, queries, rng), top_patterns(d, patterns)};
}

inline UtilityReport evaluate_utility(const Dataset& d, const Dataset& d_prime,
                                      const Workload& w) {
  UtilityReport r;
  r.qa_points_avre = qa_points(d, d_prime, w.queries);
  r.qa_patterns_avre = qa_patterns(d, d_prime, w.patterns);
  r.popularity_kt = popularity_kendall(d, d_prime);
  r.trip_error_jsd = trip_error(d, d_prime);
  r.diameter_error_jsd = diameter_error(d, d_prime);
  r.dtw_mean = dtw_mean(d, d_prime);
  return r;
}

}  // namespace trajfp

#endif  // TRAJFP_UTILITY_H_
