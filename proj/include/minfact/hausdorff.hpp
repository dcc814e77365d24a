#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "minfact/lamination.hpp"

namespace minfact {

using Point2 = std::array<double, 2>;

namespace hd_detail {

inline void sample_segment(Point2 a, Point2 b, double step, std::vector<Point2>& out) {
  const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
  }
}

inline void sample_circle(double step, std::vector<Point2>& out) {
  const int n = std::max(8, static_cast<int>(std::ceil(2.0 * M_PI / step)));
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * i / n;
    out.push_back({std::cos(th), std::sin(th)});
  }
}

// Interior of the triangle (a,b,c) on a barycentric grid of pitch <= step.
inline void sample_triangle(Point2 a, Point2 b, Point2 c, double step, std::vector<Point2>& out) {
  const double e1 = std::hypot(b[0] - a[0], b[1] - a[1]);
  const double e2 = std::hypot(c[0] - a[0], c[1] - a[1]);
  const int n = std::max(1, static_cast<int>(std::ceil(std::max(e1, e2) / step)));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const double u = static_cast<double>(i) / n, v = static_cast<double>(j) / n;
      out.push_back({a[0] + u * (b[0] - a[0]) + v * (c[0] - a[0]),
                     a[1] + u * (b[1] - a[1]) + v * (c[1] - a[1])});
    }
}

// One-sided sup distance between finite clouds with a uniform grid index.
class CloudIndex {
 public:
  explicit CloudIndex(const std::vector<Point2>& pts, double cell) : cell_(cell), pts_(pts) {
    if (pts.empty()) throw std::invalid_argument("CloudIndex: empty cloud");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      keys_.push_back({key(pts[i]), static_cast<int>(i)});
    }
    std::sort(keys_.begin(), keys_.end());
  }

  double distance(Point2 p) const {
    // Expanding ring search: any point in a cell at Chebyshev ring r+1 is
    // at Euclidean distance >= r * cell, so the scan may stop once the
    // best found distance drops under ring * cell.
    const long long cx = coord(p[0]), cy = coord(p[1]);
    const int max_ring = static_cast<int>(std::ceil(2.5 / cell_)) + 2;  // unit-disk diameter
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (long long dx = -ring; dx <= ring; ++dx)
        for (long long dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::llabs(dx), std::llabs(dy)) != ring) continue;
          auto range = cells(cx + dx, cy + dy);
          for (auto it = range.first; it != range.second; ++it) {
            const Point2& q = pts_[static_cast<std::size_t>(it->second)];
            best = std::min(best, std::hypot(p[0] - q[0], p[1] - q[1]));
          }
        }
      if (best <= static_cast<double>(ring) * cell_) return best;
    }
    return best;
  }

 private:
  long long coord(double x) const { return static_cast<long long>(std::floor(x / cell_)); }
  long long key(Point2 p) const { return coord(p[0]) * 1000003LL + coord(p[1]); }
  std::pair<std::vector<std::pair<long long, int>>::const_iterator,
            std::vector<std::pair<long long, int>>::const_iterator>
  cells(long long cx, long long cy) const {
    const long long k = cx * 1000003LL + cy;
    auto lo = std::lower_bound(keys_.begin(), keys_.end(), std::make_pair(k, -1));
    auto hi = std::upper_bound(keys_.begin(), keys_.end(),
                               std::make_pair(k, std::numeric_limits<int>::max()));
    return {lo, hi};
  }

  double cell_;
  std::vector<Point2> pts_;
  std::vector<std::pair<long long, int>> keys_;
};

inline double one_sided(const std::vector<Point2>& from, const CloudIndex& to) {
  double worst = 0;
  for (const Point2& p : from) worst = std::max(worst, to.distance(p));
  return worst;
}

}  // namespace hd_detail

inline Point2 angle_point(const UnitAngle& a) { return {a.x(), a.y()}; }

// Point cloud of the red part: the circle plus every chord.
inline std::vector<Point2> red_cloud(const ColoredLamination& L, double step) {
  std::vector<Point2> out;
  hd_detail::sample_circle(step, out);
  for (const Chord& c : L.chords)
    hd_detail::sample_segment(angle_point(c.a), angle_point(c.b), step, out);
  for (const BlackFace& f : L.faces) {
    const std::size_t l = f.corners.size();
    for (std::size_t j = 0; j + 1 < l; ++j)
      hd_detail::sample_segment(angle_point(f.corners[j]), angle_point(f.corners[j + 1]), step,
                                out);
    if (l > 2)
      hd_detail::sample_segment(angle_point(f.corners[0]), angle_point(f.corners[l - 1]), step,
                                out);
  }
  return out;
}

// Point cloud of the colored part: the red part plus black face interiors,
// fan-triangulated from the least corner (faces are convex hulls of circle
// points, so the fan is exact).
inline std::vector<Point2> colored_cloud(const ColoredLamination& L, double step) {
  std::vector<Point2> out = red_cloud(L, step);
  for (const BlackFace& f : L.faces) {
    for (std::size_t j = 1; j + 1 < f.corners.size(); ++j)
      hd_detail::sample_triangle(angle_point(f.corners[0]), angle_point(f.corners[j]),
                                 angle_point(f.corners[j + 1]), step, out);
  }
  return out;
}

inline double hausdorff_clouds(const std::vector<Point2>& A, const std::vector<Point2>& B,
                               double step) {
  const double cell = std::max(step, 0.05);  // coarser index cells keep ring scans short
  hd_detail::CloudIndex ia(A, cell), ib(B, cell);
  return std::max(hd_detail::one_sided(A, ib), hd_detail::one_sided(B, ia));
}

// Sum of the Hausdorff distances between the red parts and between the
// colored parts, both approximated by point clouds of pitch <= resolution;
// the result is within 2 * resolution of the true metric.
inline double hausdorff_colored(const ColoredLamination& A, const ColoredLamination& B,
                                double resolution) {
  if (resolution <= 0) throw std::invalid_argument("hausdorff_colored: resolution must be > 0");
  const double red = hausdorff_clouds(red_cloud(A, resolution), red_cloud(B, resolution),
                                      resolution);
  const double col = hausdorff_clouds(colored_cloud(A, resolution), colored_cloud(B, resolution),
                                      resolution);
  return red + col;
}

// --------------------------------------------------------------------------
// Exact distance between convex faces
// --------------------------------------------------------------------------

namespace hd_detail {

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const double vx = b[0] - a[0], vy = b[1] - a[1];
  const double wx = p[0] - a[0], wy = p[1] - a[1];
  const double vv = vx * vx + vy * vy;
  double t = vv > 0 ? (wx * vx + wy * vy) / vv : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - (a[0] + t * vx), p[1] - (a[1] + t * vy));
}

// Distance from p to the filled convex polygon with vertices in clockwise
// circular order (0 when inside).
inline double point_convex_distance(Point2 p, const std::vector<Point2>& poly) {
  const std::size_t m = poly.size();
  if (m == 1) return std::hypot(p[0] - poly[0][0], p[1] - poly[0][1]);
  if (m == 2) return point_segment_distance(p, poly[0], poly[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % m];
    const double cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if (cross > 1e-15) inside = false;  // clockwise order: interior has cross <= 0
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

}  // namespace hd_detail

// Exact Hausdorff distance between two filled convex faces: the supremum
// of a convex distance function over a convex set sits at a vertex.
inline double face_hausdorff(const BlackFace& A, const BlackFace& B) {
  std::vector<Point2> pa, pb;
  for (const UnitAngle& a : A.corners) pa.push_back(angle_point(a));
  for (const UnitAngle& b : B.corners) pb.push_back(angle_point(b));
  double worst = 0;
  for (const Point2& p : pa) worst = std::max(worst, hd_detail::point_convex_distance(p, pb));
  for (const Point2& p : pb) worst = std::max(worst, hd_detail::point_convex_distance(p, pa));
  return worst;
}

}  // namespace minfact
