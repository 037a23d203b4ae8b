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

// The public 2-gram correlation model and the threshold sets derived from it.

#ifndef TRAJFP_MARKOV_H_
#define TRAJFP_MARKOV_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajfp/error.h"
#include "trajfp/geo.h"

namespace trajfp {

struct Transition {
  std::uint32_t to = 0;  // dense cell index
  double prob = 0.0;
};

// Row-stochastic transition matrix stored sparsely by row, plus per-cell
// visit counts for emission probabilities. Immutable once constructed.
class MarkovModel {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  // `rows[i]` lists the outgoing transitions of cell index i. Entries are
  // sorted and zero-probability entries dropped; every row must sum to one.
  MarkovModel(Grid grid, std::vector<std::vector<Transition>> rows,
              std::vector<double> visits)
      : grid_(std::move(grid)), rows_(std::move(rows)), visits_(std::move(visits)) {
    require(rows_.size() == grid_.cell_count() &&
                visits_.size() == grid_.cell_count(),
            ErrorCode::kInvalidArgument, "model size does not match grid");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto& row = rows_[i];
      std::erase_if(row, [](const Transition& t) { return t.prob == 0.0; });
      std::sort(row.begin(), row.end(),
                [](const Transition& a, const Transition& b) { return a.to < b.to; });
      double sum = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        require(row[k].to < grid_.cell_count(), ErrorCode::kInvalidArgument,
                "transition target off the grid");
        require(row[k].prob > 0.0 && std::isfinite(row[k].prob),
                ErrorCode::kInvalidArgument, "transition probability must be >= 0");
        require(k == 0 || row[k].to != row[k - 1].to, ErrorCode::kInvalidArgument,
                "duplicate transition in row");
        sum += row[k].prob;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw Error(ErrorCode::kInvalidArgument,
                    "row " + std::to_string(i) + " sums to " + std::to_string(sum));
      }
      require(visits_[i] >= 0.0 && std::isfinite(visits_[i]),
              ErrorCode::kInvalidArgument, "visit counts must be >= 0");
    }
  }

  const Grid& grid() const { return grid_; }

  std::span<const Transition> row(Cell from) const {
    return rows_[grid_.index(from)];
  }
  std::span<const Transition> row(std::size_t from_index) const {
    return rows_[from_index];
  }

  double transition(Cell from, Cell to) const {
    if (!grid_.contains(from) || !grid_.contains(to)) return 0.0;
    const auto r = row(from);
    const auto target = static_cast<std::uint32_t>(grid_.index(to));
    auto it = std::lower_bound(
        r.begin(), r.end(), target,
        [](const Transition& t, std::uint32_t v) { return t.to < v; });
    return (it != r.end() && it->to == target) ? it->prob : 0.0;
  }

  double visits(Cell c) const { return visits_[grid_.index(c)]; }
  std::span<const double> visits() const { return visits_; }

 private:
  Grid grid_;
  std::vector<std::vector<Transition>> rows_;
  std::vector<double> visits_;
};

// Empirical 2-gram frequencies. Cells with no outgoing pairs get the uniform
// distribution over their Moore neighborhood (self excluded); observed rows
// are not smoothed.
inline MarkovModel build_model(const Dataset& corpus) {
  corpus.validate();
  std::size_t points = 0;
  for (const Trajectory& t : corpus.trajectories) points += t.cells.size();
  require(points > 0, ErrorCode::kEmptyCorpus, "cannot build a model from an empty corpus");

  const Grid& g = corpus.grid;
  std::vector<std::map<std::uint32_t, std::uint64_t>> counts(g.cell_count());
  std::vector<double> visits(g.cell_count(), 0.0);
  for (const Trajectory& t : corpus.trajectories) {
    for (std::size_t j = 0; j < t.cells.size(); ++j) {
      visits[g.index(t.cells[j])] += 1.0;
      if (j > 0) {
        ++counts[g.index(t.cells[j - 1])]
                [static_cast<std::uint32_t>(g.index(t.cells[j]))];
      }
    }
  }

  std::vector<std::vector<Transition>> rows(g.cell_count());
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    std::uint64_t total = 0;
    for (const auto& [to, n] : counts[i]) total += n;
    if (total == 0) {
      const auto fallback = neighbors(g.cell(i), g, /*include_self=*/false);
      for (Cell c : fallback) {
        rows[i].push_back({static_cast<std::uint32_t>(g.index(c)),
                           1.0 / static_cast<double>(fallback.size())});
      }
      continue;
    }
    for (const auto& [to, n] : counts[i]) {
      rows[i].push_back({to, static_cast<double>(n) / static_cast<double>(total)});
    }
  }
  return MarkovModel(g, std::move(rows), std::move(visits));
}

struct TauSet {
  Cell anchor;
  double tau = 0.0;
  std::vector<Cell> members;  // ascending Cell order

  bool contains(Cell c) const {
    return std::binary_search(members.begin(), members.end(), c);
  }
  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

// Cells reachable from `anchor` with transition probability >= tau.
inline TauSet tau_probable_set(const MarkovModel& m, Cell anchor, double tau) {
  require(tau >= 0.0, ErrorCode::kInvalidArgument, "tau must be >= 0");
  TauSet s{anchor, tau, {}};
  for (const Transition& t : m.row(anchor)) {
    if (t.prob >= tau) s.members.push_back(m.grid().cell(t.to));
  }
  return s;
}

// Members of the tau-probable set of `prev_released` that are no farther
// from `target` than `prev_released` is.
inline TauSet tau_closer_set(const MarkovModel& m, Cell prev_released,
                             Cell target, double tau) {
  TauSet probable = tau_probable_set(m, prev_released, tau);
  const long long bound = cell_distance_sq(prev_released, target);
  std::erase_if(probable.members,
                [&](Cell g) { return cell_distance_sq(g, target) > bound; });
  return probable;
}

// Emission probabilities over the Moore neighborhood of g (self included),
// normalized visit counts; uniform if the whole neighborhood is unvisited.
inline std::vector<std::pair<Cell, double>> emission_distribution(
    const MarkovModel& m, Cell g) {
  const auto hood = neighbors(g, m.grid(), /*include_self=*/true);
  double total = 0.0;
  for (Cell c : hood) total += m.visits(c);
  std::vector<std::pair<Cell, double>> out;
  out.reserve(hood.size());
  for (Cell c : hood) {
    out.emplace_back(c, total > 0.0 ? m.visits(c) / total
                                    : 1.0 / static_cast<double>(hood.size()));
  }
  return out;
}

}  // namespace trajfp

#endif  // TRAJFP_MARKOV_H_
