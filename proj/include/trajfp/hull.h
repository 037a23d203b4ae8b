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

// Planar convex geometry: hulls, sensitivity hulls, Minkowski norms, and
// uniform sampling inside a convex polygon.

#ifndef TRAJFP_HULL_H_
#define TRAJFP_HULL_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "trajfp/error.h"
#include "trajfp/geo.h"
#include "trajfp/rng.h"

namespace trajfp {

// Half side of the square used to pad degenerate (point or collinear) inputs,
// i.e. a square of half-cell side.
inline constexpr double kHullPadHalfSide = 0.25;

// Area below which a padded hull is still considered degenerate.
inline constexpr double kMinHullArea = 1e-12;

struct Mat2 {
  double a = 1.0, b = 0.0;  // row 0
  double c = 0.0, d = 1.0;  // row 1

  Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  double det() const { return a * d - b * c; }
  Mat2 inverse() const {
    const double k = det();
    require(k != 0.0 && std::isfinite(k), ErrorCode::kDegenerateHull,
            "singular transform");
    return {d / k, -b / k, -c / k, a / k};
  }
};

// Counter-clockwise, strictly convex polygon.
class ConvexHull {
 public:
  ConvexHull() = default;
  explicit ConvexHull(std::vector<Vec2> ccw_vertices)
      : vertices_(std::move(ccw_vertices)) {}

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  double area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      twice += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    }
    return 0.5 * twice;
  }

  bool contains(Vec2 p, double eps = 1e-12) const {
    if (vertices_.size() < 3) return false;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Vec2 a = vertices_[i];
      const Vec2 b = vertices_[(i + 1) % vertices_.size()];
      if (cross(b - a, p - a) < -eps) return false;
    }
    return true;
  }

  // Gauge function min{ l >= 0 : p in l*K }. Requires the origin strictly
  // inside the hull, which holds for every sensitivity hull.
  double minkowski_norm(Vec2 p) const {
    double best = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Vec2 a = vertices_[i];
      const Vec2 b = vertices_[(i + 1) % vertices_.size()];
      const Vec2 normal{b.y - a.y, a.x - b.x};  // outward for CCW order
      const double offset = dot(normal, a);
      require(offset > 0.0, ErrorCode::kDegenerateHull,
              "origin is not inside the hull");
      best = std::max(best, dot(normal, p) / offset);
    }
    return best;
  }

  ConvexHull transformed(const Mat2& t) const {
    std::vector<Vec2> out;
    out.reserve(vertices_.size());
    for (Vec2 v : vertices_) out.push_back(t * v);
    if (t.det() < 0.0) std::reverse(out.begin(), out.end());
    return ConvexHull(std::move(out));
  }

  void bounding_box(Vec2& lo, Vec2& hi) const {
    lo = {std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
    hi = {-lo.x, -lo.y};
    for (Vec2 v : vertices_) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
  }

 private:
  std::vector<Vec2> vertices_;
};

namespace detail {

// Andrew's monotone chain; drops collinear points.
inline std::vector<Vec2> monotone_chain(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline double polygon_area(const std::vector<Vec2>& v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

}  // namespace detail

// Convex hull of a point set. A single point or a collinear set is padded by
// a square of half-cell side so the result always has positive area.
inline ConvexHull convex_hull(std::span<const Vec2> points) {
  require(!points.empty(), ErrorCode::kInvalidArgument, "convex hull of no points");
  std::vector<Vec2> hull = detail::monotone_chain({points.begin(), points.end()});
  if (hull.size() >= 3 && detail::polygon_area(hull) > kMinHullArea) {
    return ConvexHull(std::move(hull));
  }
  std::vector<Vec2> padded;
  padded.reserve(4 * hull.size());
  const double h = kHullPadHalfSide;
  for (Vec2 p : hull) {
    padded.push_back({p.x - h, p.y - h});
    padded.push_back({p.x + h, p.y - h});
    padded.push_back({p.x + h, p.y + h});
    padded.push_back({p.x - h, p.y + h});
  }
  return ConvexHull(detail::monotone_chain(std::move(padded)));
}

// Hull of all pairwise vertex differences; origin-symmetric by construction.
inline ConvexHull sensitivity_hull(const ConvexHull& k_prime) {
  const auto& v = k_prime.vertices();
  std::vector<Vec2> diffs;
  diffs.reserve(v.size() * v.size());
  for (Vec2 a : v) {
    for (Vec2 b : v) diffs.push_back(a - b);
  }
  return convex_hull(diffs);
}

// Uniform point inside the hull by rejection from its bounding box.
inline Vec2 sample_uniform_in(const ConvexHull& k, Rng& rng) {
  Vec2 lo, hi;
  k.bounding_box(lo, hi);
  for (;;) {
    const Vec2 p{uniform(rng, lo.x, hi.x), uniform(rng, lo.y, hi.y)};
    if (k.contains(p, 0.0)) return p;
  }
}

}  // namespace trajfp

#endif  // TRAJFP_HULL_H_
