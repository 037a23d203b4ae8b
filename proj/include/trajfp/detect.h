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

// Attributing a leaked trajectory (or dataset) to an analyzer.
//
// Ties resolve to the lowest analyzer id and are always flagged.

#ifndef TRAJFP_DETECT_H_
#define TRAJFP_DETECT_H_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trajfp/codes.h"
#include "trajfp/distribute.h"
#include "trajfp/error.h"
#include "trajfp/geo.h"

namespace trajfp {

struct DetectionReport {
  // Distance-based: fraction of positions where the analyzer's copy is among
  // the nearest to the leak. Boneh-Shaw: one-hot. Tardos: raw code scores.
  std::vector<double> scores;
  int accused = 0;
  bool tie = false;
};

struct AggregateReport {
  std::vector<DetectionReport> per_trajectory;
  std::vector<int> vote_counts;
  int final_accused = 0;
  bool tie = false;
};

namespace detail {

inline void fill_argmax(DetectionReport& r) {
  r.accused = 0;
  for (std::size_t a = 1; a < r.scores.size(); ++a) {
    if (r.scores[a] > r.scores[r.accused]) r.accused = static_cast<int>(a);
  }
  r.tie = false;
  for (std::size_t a = 0; a < r.scores.size(); ++a) {
    if (static_cast<int>(a) != r.accused && r.scores[a] == r.scores[r.accused]) r.tie = true;
  }
}

}  // namespace detail

inline DetectionReport detect_trajectory(const LeakedTrajectory& leaked,
                                         std::span<const FingerprintedTrajectory> copies) {
  require(!copies.empty(), ErrorCode::kInvalidArgument, "no copies to compare against");
  for (const auto& c : copies) {
    require(c.size() == leaked.size(), ErrorCode::kLengthMismatch,
            "copy and leak differ in length");
  }
  const double credit = 1.0 / static_cast<double>(leaked.size());
  DetectionReport r;
  r.scores.assign(copies.size(), 0.0);
  std::vector<long long> dist(copies.size());
  for (std::size_t j = 0; j < leaked.size(); ++j) {
    long long d_min = std::numeric_limits<long long>::max();
    for (std::size_t a = 0; a < copies.size(); ++a) {
      dist[a] = cell_distance_sq(copies[a][j], leaked[j]);
      d_min = std::min(d_min, dist[a]);
    }
    for (std::size_t a = 0; a < copies.size(); ++a) {
      if (dist[a] == d_min) r.scores[a] += credit;
    }
  }
  detail::fill_argmax(r);
  return r;
}

// Decodes the codeword carried by a leak and accuses through the code's own
// tracing rule.
inline DetectionReport detect_code_trajectory(const LeakedTrajectory& leaked,
                                              const PostProcessedTrajectory& source,
                                              const MarkMap& marks,
                                              const BinaryCodebook& book) {
  const Bits y = read_bits(leaked.cells(), source.cells(), marks, book.length());
  DetectionReport r;
  if (book.kind == CodeKind::kBonehShaw) {
    r.scores.assign(book.users(), 0.0);
    r.accused = bs_detect(y, book);
    r.scores[static_cast<std::size_t>(r.accused)] = 1.0;
    return r;
  }
  TardosAccusation acc = tardos_score(y, book);
  r.scores = std::move(acc.scores);
  r.accused = acc.accused;
  r.tie = acc.tie;
  return r;
}

// Plurality vote over per-trajectory accusations.
inline AggregateReport aggregate(std::vector<DetectionReport> reports, int n_analyzers) {
  require(!reports.empty(), ErrorCode::kEmptyDataset, "no leaked trajectories");
  AggregateReport out;
  out.vote_counts.assign(static_cast<std::size_t>(n_analyzers), 0);
  for (const auto& r : reports) ++out.vote_counts.at(static_cast<std::size_t>(r.accused));
  out.per_trajectory = std::move(reports);
  for (int a = 1; a < n_analyzers; ++a) {
    if (out.vote_counts[a] > out.vote_counts[out.final_accused]) out.final_accused = a;
  }
  for (int a = 0; a < n_analyzers; ++a) {
    if (a != out.final_accused && out.vote_counts[a] == out.vote_counts[out.final_accused]) {
      out.tie = true;
    }
  }
  return out;
}

namespace detail {

inline std::map<std::string, std::size_t> index_by_id(const Dataset& d) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < d.trajectories.size(); ++i) idx[d.trajectories[i].id] = i;
  return idx;
}

inline std::size_t resolve(const std::map<std::string, std::size_t>& idx,
                           const std::string& id) {
  const auto it = idx.find(id);
  if (it == idx.end()) {
    throw Error(ErrorCode::kUnknownTrajectory, "unknown trajectory '" + id + "'");
  }
  return it->second;
}

}  // namespace detail

inline AggregateReport detect_dataset(const Dataset& leaked,
                                      std::span<const CopyRecord> records) {
  require(!records.empty(), ErrorCode::kInvalidArgument, "no copy records");
  const auto leaks = typed<Role::kLeaked>(leaked);
  std::vector<std::map<std::string, std::size_t>> indices;
  for (const auto& rec : records) indices.push_back(detail::index_by_id(rec.copies));
  std::vector<DetectionReport> reports;
  for (const auto& leak : leaks) {
    std::vector<FingerprintedTrajectory> copies;
    for (std::size_t a = 0; a < records.size(); ++a) {
      const std::size_t t = detail::resolve(indices[a], leak.id());
      copies.push_back(FingerprintedTrajectory::from(records[a].copies.trajectories[t]));
    }
    reports.push_back(detect_trajectory(leak, copies));
  }
  return aggregate(std::move(reports), static_cast<int>(records.size()));
}

inline AggregateReport detect_dataset_codes(const Dataset& leaked, const Dataset& source,
                                            const CodeMaterial& code) {
  const auto idx = detail::index_by_id(source);
  std::vector<DetectionReport> reports;
  for (const auto& leak : typed<Role::kLeaked>(leaked)) {
    const std::size_t t = detail::resolve(idx, leak.id());
    const auto x = PostProcessedTrajectory::from(source.trajectories[t]);
    reports.push_back(detect_code_trajectory(leak, x, code.marks.at(t), code.codebook));
  }
  return aggregate(std::move(reports), static_cast<int>(code.codebook.users()));
}

}  // namespace trajfp

#endif  // TRAJFP_DETECT_H_
