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

// Planar coordinates, the uniform N x N grid, and trajectory types.
//
// Trajectories carry their pipeline stage in the type: a RawTrajectory can
// only become a NoisyTrajectory through a privacy mechanism, and everything
// downstream of that boundary (post-processing, fingerprinting, attacks)
// accepts released stages only.

#ifndef TRAJFP_GEO_H_
#define TRAJFP_GEO_H_

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trajfp/error.h"

namespace trajfp {

struct GeoPoint {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> t;  // seconds
};

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return std::hypot(a.x, a.y); }

// A grid cell. Ordering is lexicographic on (ix, iy); every deterministic
// tie-break in the library uses it.
struct Cell {
  int ix = 0;
  int iy = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Cell centers in cell units; the geometry of the privacy mechanism and all
// distances work in this space.
inline Vec2 cell_point(Cell c) {
  return {static_cast<double>(c.ix), static_cast<double>(c.iy)};
}

class Grid {
 public:
  Grid(int n, BoundingBox bbox) : n_(n), bbox_(bbox) {
    require(n >= 2, ErrorCode::kInvalidArgument, "grid needs n >= 2");
    require(std::isfinite(bbox.x_min) && std::isfinite(bbox.x_max) &&
                std::isfinite(bbox.y_min) && std::isfinite(bbox.y_max),
            ErrorCode::kInvalidArgument, "grid bbox must be finite");
    require(bbox.x_min < bbox.x_max && bbox.y_min < bbox.y_max,
            ErrorCode::kInvalidArgument, "grid bbox must have positive extent");
  }

  // Unit-square grid for purely cell-level work.
  explicit Grid(int n) : Grid(n, BoundingBox{0.0, 0.0, 1.0 * n, 1.0 * n}) {}

  int n() const { return n_; }
  const BoundingBox& bbox() const { return bbox_; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  }

  bool contains(Cell c) const {
    return c.ix >= 0 && c.ix < n_ && c.iy >= 0 && c.iy < n_;
  }

  // Dense index; increasing index order equals Cell ordering.
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.ix) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(c.iy);
  }
  Cell cell(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(n_)),
            static_cast<int>(index % static_cast<std::size_t>(n_))};
  }

  double cell_width() const { return (bbox_.x_max - bbox_.x_min) / n_; }
  double cell_height() const { return (bbox_.y_max - bbox_.y_min) / n_; }

  // Nearest cell to a point in cell units, clamped onto the grid.
  Cell snap(Vec2 p) const {
    auto clamp_axis = [this](double v) {
      const double r = std::round(v);
      if (!(r >= 0.0)) return 0;  // also catches NaN
      if (r > n_ - 1) return n_ - 1;
      return static_cast<int>(r);
    };
    return {clamp_axis(p.x), clamp_axis(p.y)};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.bbox_.x_min == b.bbox_.x_min &&
           a.bbox_.y_min == b.bbox_.y_min && a.bbox_.x_max == b.bbox_.x_max &&
           a.bbox_.y_max == b.bbox_.y_max;
  }

 private:
  int n_;
  BoundingBox bbox_;
};

// Points exactly on the max edge clamp into the last row/column.
inline Cell discretize(const GeoPoint& p, const Grid& g) {
  const BoundingBox& b = g.bbox();
  if (!b.contains(p.x, p.y)) {
    throw Error(ErrorCode::kOutOfBounds,
                "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                    ") outside grid bbox");
  }
  auto axis = [n = g.n()](double v, double lo, double hi) {
    const int i = static_cast<int>(std::floor((v - lo) / (hi - lo) * n));
    return std::clamp(i, 0, n - 1);
  };
  return {axis(p.x, b.x_min, b.x_max), axis(p.y, b.y_min, b.y_max)};
}

inline GeoPoint cell_center(Cell c, const Grid& g) {
  const BoundingBox& b = g.bbox();
  return {b.x_min + (c.ix + 0.5) * g.cell_width(),
          b.y_min + (c.iy + 0.5) * g.cell_height(), std::nullopt};
}

inline double cell_distance(Cell a, Cell b) {
  return std::hypot(static_cast<double>(a.ix - b.ix),
                    static_cast<double>(a.iy - b.iy));
}

// Squared distance; exact in integers, used for tie-sensitive comparisons.
inline long long cell_distance_sq(Cell a, Cell b) {
  const long long dx = a.ix - b.ix;
  const long long dy = a.iy - b.iy;
  return dx * dx + dy * dy;
}

// Moore neighborhood clipped at the grid border, in Cell order.
inline std::vector<Cell> neighbors(Cell c, const Grid& g, bool include_self) {
  std::vector<Cell> out;
  out.reserve(9);
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      if (dx == 0 && dy == 0 && !include_self) continue;
      const Cell n{c.ix + dx, c.iy + dy};
      if (g.contains(n)) out.push_back(n);
    }
  }
  return out;
}

// Linear interpolation at t0, t0 + interval, ... up to the last timestamp.
inline std::vector<GeoPoint> resample_uniform(std::span<const GeoPoint> points,
                                              double interval) {
  require(interval > 0.0, ErrorCode::kInvalidArgument,
          "resample interval must be positive");
  require(points.size() >= 2, ErrorCode::kDegenerateInput,
          "resampling needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].t.has_value(), ErrorCode::kDegenerateInput,
            "resampling needs timestamps");
    if (i > 0) {
      require(*points[i].t > *points[i - 1].t, ErrorCode::kDegenerateInput,
              "timestamps must be strictly increasing");
    }
  }
  const double t0 = *points.front().t;
  const double t_end = *points.back().t;
  const auto steps =
      static_cast<std::size_t>(std::floor((t_end - t0) / interval + 1e-9));
  std::vector<GeoPoint> out;
  out.reserve(steps + 1);
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = t0 + static_cast<double>(k) * interval;
    while (seg + 2 < points.size() && *points[seg + 1].t < t) ++seg;
    const GeoPoint& a = points[seg];
    const GeoPoint& b = points[seg + 1];
    const double w = std::clamp((t - *a.t) / (*b.t - *a.t), 0.0, 1.0);
    out.push_back({a.x + w * (b.x - a.x), a.y + w * (b.y - a.y), t});
  }
  return out;
}

// Maximal in-bbox runs of at least `min_length` points.
inline std::vector<std::vector<GeoPoint>> clip_to_area(
    std::span<const GeoPoint> trajectory, const BoundingBox& bbox,
    std::size_t min_length = 2) {
  std::vector<std::vector<GeoPoint>> fragments;
  std::vector<GeoPoint> run;
  auto flush = [&] {
    if (run.size() >= min_length && !run.empty()) {
      fragments.push_back(std::move(run));
    }
    run.clear();
  };
  for (const GeoPoint& p : trajectory) {
    if (bbox.contains(p.x, p.y)) {
      run.push_back(p);
    } else {
      flush();
    }
  }
  flush();
  return fragments;
}

enum class Role { kRaw, kNoisy, kPostProcessed, kFingerprinted, kLeaked };

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::kRaw: return "raw";
    case Role::kNoisy: return "noisy";
    case Role::kPostProcessed: return "postprocessed";
    case Role::kFingerprinted: return "fingerprinted";
    case Role::kLeaked: return "leaked";
  }
  return "unknown";
}

inline Role parse_role(std::string_view name) {
  for (Role r : {Role::kRaw, Role::kNoisy, Role::kPostProcessed,
                 Role::kFingerprinted, Role::kLeaked}) {
    if (role_name(r) == name) return r;
  }
  throw Error(ErrorCode::kParseError, "unknown role '" + std::string(name) + "'");
}

// Untyped trajectory record, as stored in datasets and files.
struct Trajectory {
  std::string id;
  Role role = Role::kRaw;
  std::vector<Cell> cells;
};

// A trajectory whose pipeline stage is part of its type.
template <Role R>
class TypedTrajectory {
 public:
  static constexpr Role kRole = R;

  TypedTrajectory(std::string id, std::vector<Cell> cells)
      : id_(std::move(id)), cells_(std::move(cells)) {
    if (cells_.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "trajectory '" + id_ + "' is empty");
    }
  }

  // Adopts a loaded record; its role tag must match R.
  static TypedTrajectory from(const Trajectory& t) {
    if (t.role != R) {
      throw Error(ErrorCode::kRoleMismatch,
                  "trajectory '" + t.id + "' has role " +
                      std::string(role_name(t.role)) + ", expected " +
                      std::string(role_name(R)));
    }
    return TypedTrajectory(t.id, t.cells);
  }

  const std::string& id() const { return id_; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  Cell operator[](std::size_t j) const { return cells_[j]; }

  Trajectory erased() const { return {id_, R, cells_}; }

  friend bool operator==(const TypedTrajectory&, const TypedTrajectory&) =
      default;

 private:
  std::string id_;
  std::vector<Cell> cells_;
};

using RawTrajectory = TypedTrajectory<Role::kRaw>;
using NoisyTrajectory = TypedTrajectory<Role::kNoisy>;
using PostProcessedTrajectory = TypedTrajectory<Role::kPostProcessed>;
using FingerprintedTrajectory = TypedTrajectory<Role::kFingerprinted>;
using LeakedTrajectory = TypedTrajectory<Role::kLeaked>;

// Shares a trajectory without a privacy mechanism. This is the single,
// explicit crossing from Raw to a shareable stage; it exists for experiments
// on non-private data and is easy to audit for.
inline PostProcessedTrajectory share_without_privacy(const RawTrajectory& raw) {
  return PostProcessedTrajectory(raw.id(), raw.cells());
}

struct Dataset {
  Grid grid;
  std::vector<Trajectory> trajectories;

  // Throws OutOfBounds if any cell lies off the grid.
  void validate() const {
    for (const Trajectory& t : trajectories) {
      for (Cell c : t.cells) {
        if (!grid.contains(c)) {
          throw Error(ErrorCode::kOutOfBounds,
                      "trajectory '" + t.id + "' has a cell off the grid");
        }
      }
    }
  }
};

template <Role R>
std::vector<TypedTrajectory<R>> typed(const Dataset& d) {
  std::vector<TypedTrajectory<R>> out;
  out.reserve(d.trajectories.size());
  for (const Trajectory& t : d.trajectories) {
    out.push_back(TypedTrajectory<R>::from(t));
  }
  return out;
}

template <Role R>
Dataset make_dataset(const Grid& grid,
                     const std::vector<TypedTrajectory<R>>& trajectories) {
  Dataset d{grid, {}};
  d.trajectories.reserve(trajectories.size());
  for (const auto& t : trajectories) d.trajectories.push_back(t.erased());
  return d;
}

}  // namespace trajfp

#endif  // TRAJFP_GEO_H_
