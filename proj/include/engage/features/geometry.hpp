#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <vector>

#include "engage/error.hpp"

namespace engage::features {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Convex face outline in scene-camera pixels. Vertices are counter-clockwise,
/// strictly convex, and start at the lowest-x (then lowest-y) point.
struct Hull {
  std::vector<Point> vertices;
  double bbox_width = 0.0;
  friend bool operator==(const Hull&, const Hull&) = default;
};

namespace detail {

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double segment_distance_sq(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len_sq = dx * dx + dy * dy;
  double t = len_sq > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x;
  const double ey = a.y + t * dy - p.y;
  return ex * ex + ey * ey;
}

}  // namespace detail

/// Andrew's monotone chain. Collinear boundary points are dropped.
inline Hull convex_hull(std::span<const Point> points) {
  if (points.size() < 3) throw DegenerateInput("convex hull needs at least 3 points");
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && detail::cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && detail::cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k > 0 ? k - 1 : 0);
  if (h.size() < 3) throw DegenerateInput("all points are collinear");

  Hull hull;
  hull.vertices = std::move(h);
  auto [lo, hi] = std::minmax_element(hull.vertices.begin(), hull.vertices.end(),
                                      [](const Point& a, const Point& b) { return a.x < b.x; });
  hull.bbox_width = hi->x - lo->x;
  return hull;
}

/// Boundary-inclusive point-in-hull test.
inline bool contains(const Hull& hull, const Point& p) {
  const auto& v = hull.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (detail::cross(v[i], v[(i + 1) % v.size()], p) < 0.0) return false;
  }
  return true;
}

/// Euclidean distance from p to the hull boundary; zero for points inside.
inline double distance_outside(const Hull& hull, const Point& p) {
  if (contains(hull, p)) return 0.0;
  const auto& v = hull.vertices;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, detail::segment_distance_sq(p, v[i], v[(i + 1) % v.size()]));
  }
  return std::sqrt(best);
}

inline double area(const Hull& hull) {
  const auto& v = hull.vertices;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

/// A gaze point counts as on the face when it lies inside the hull, on its
/// boundary, or within margin_ratio * bbox_width of the boundary.
inline bool gaze_on_face(const Point& g, const Hull& hull, double margin_ratio = 0.3) {
  if (contains(hull, g)) return true;
  const double reach = margin_ratio * hull.bbox_width;
  const double reach_sq = reach * reach;
  const auto& v = hull.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (detail::segment_distance_sq(g, v[i], v[(i + 1) % v.size()]) <= reach_sq) return true;
  }
  return false;
}

}  // namespace engage::features
