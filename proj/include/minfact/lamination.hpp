#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "minfact/perm.hpp"

namespace minfact {

// Angle value in [0,1) as a reduced exact rational; the represented point
// of the unit circle is e^{-2 i pi value}. All crossing and nesting tests
// reduce to integer arithmetic on a common grid.
struct UnitAngle {
  long long num = 0;
  long long den = 1;

  UnitAngle() = default;
  UnitAngle(long long n_, long long d_) {
    if (d_ <= 0) throw std::invalid_argument("UnitAngle: denominator must be positive");
    n_ %= d_;
    if (n_ < 0) n_ += d_;
    long long g = std::gcd(n_, d_);
    if (g == 0) g = 1;
    num = n_ / g;
    den = d_ / g;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  double x() const { return std::cos(-2.0 * M_PI * value()); }
  double y() const { return std::sin(-2.0 * M_PI * value()); }

  bool operator==(const UnitAngle& o) const { return num == o.num && den == o.den; }
  bool operator<(const UnitAngle& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
  }
};

struct Chord {
  UnitAngle a, b;
  bool degenerate() const { return a == b; }
};

// A black face: corners in increasing angle order. Faces with two corners
// are single chords that count as black faces.
struct BlackFace {
  std::vector<UnitAngle> corners;
  int label = 0;
};

// Red noncrossing chords (the circle is always implicitly part of the red
// set) plus black faces. Face boundary edges are kept in `chords` too.
struct ColoredLamination {
  std::vector<Chord> chords;
  std::vector<BlackFace> faces;

  static ColoredLamination circle_only() { return {}; }
};

inline void append_face_edges(const BlackFace& f, std::vector<Chord>& chords) {
  const std::size_t l = f.corners.size();
  for (std::size_t j = 0; j + 1 < l; ++j) chords.push_back({f.corners[j], f.corners[j + 1]});
  if (l > 2) chords.push_back({f.corners[0], f.corners[l - 1]});
}

// The face S(tau) of an increasing cycle: corners at e_j/n, closing chord
// from the last corner back to the first.
inline BlackFace face_of_cycle(const Cycle& tau, int n) {
  BlackFace f;
  f.corners.reserve(tau.support.size());
  for (int e : tau.support) f.corners.emplace_back(e, n);
  std::sort(f.corners.begin(), f.corners.end());
  return f;
}

// S_c(f): the circle plus the faces of the first floor(c) /\ k cycles.
inline ColoredLamination lamination_prefix(const Factorization& f, double c) {
  ColoredLamination L;
  std::size_t take;
  if (std::isinf(c) || c >= static_cast<double>(f.cycles.size()))
    take = f.cycles.size();
  else if (c <= 0)
    take = 0;
  else
    take = static_cast<std::size_t>(std::floor(c));
  take = std::min(take, f.cycles.size());
  for (std::size_t i = 0; i < take; ++i) {
    BlackFace face = face_of_cycle(f.cycles[i], f.n);
    face.label = static_cast<int>(i) + 1;
    append_face_edges(face, L.chords);
    L.faces.push_back(std::move(face));
  }
  return L;
}

inline ColoredLamination full_lamination(const Factorization& f) {
  return lamination_prefix(f, std::numeric_limits<double>::infinity());
}

// --------------------------------------------------------------------------
// Exact combinatorial validation on the n-point grid
// --------------------------------------------------------------------------

struct PropertyReport {
  bool face_counts = false;            // k black faces, n white faces
  bool no_shared_chord = false;        // no chord on two black faces
  bool noncrossing_tree = false;       // noncrossing + tree-like incidence
  bool increasing_around_points = false;
  bool decreasing_around_white = false;
  std::string witness;

  bool all() const {
    return face_counts && no_shared_chord && noncrossing_tree && increasing_around_points &&
           decreasing_around_white;
  }
};

namespace lam_detail {

// Circle position of an angle on the 1..n grid (value j/n -> j, value 0 -> n).
inline int grid_position(const UnitAngle& a, int n) {
  if (n % a.den != 0) throw std::invalid_argument("angle is not on the n-point grid");
  long long p = a.num * (n / a.den);
  return p == 0 ? n : static_cast<int>(p);
}

// Cyclic arc interval (u -> v]: arcs {u+1, ..., v} walking clockwise.
// Arc p is the boundary piece between points p-1 and p (point 0 == n).
struct ArcInterval {
  int start = 0;  // point u
  int len = 0;    // number of arcs
};

inline bool contains_arc(const ArcInterval& I, int arc, int n) {
  int off = arc - I.start;
  if (off <= 0) off += n;
  return off <= I.len;  // off in 1..n
}

inline bool subset(const ArcInterval& A, const ArcInterval& B, int n) {
  if (A.len > B.len) return false;
  int off = A.start - B.start;
  if (off < 0) off += n;
  return off + A.len <= B.len;
}

struct SegChord {
  int u, v;    // endpoints, 1 <= u < v <= n
  int face;    // owning face index, -1 for free chords
};

inline bool strictly_cross(const SegChord& a, const SegChord& b) {
  return (a.u < b.u && b.u < a.v && a.v < b.v) || (b.u < a.u && a.u < b.v && b.v < a.v);
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(static_cast<std::size_t>(n)) {
    std::iota(p.begin(), p.end(), 0);
  }
  int find(int x) {
    while (p[static_cast<std::size_t>(x)] != x) {
      p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
      x = p[static_cast<std::size_t>(x)];
    }
    return x;
  }
  // Returns false when x and y were already connected.
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    p[static_cast<std::size_t>(x)] = y;
    return true;
  }
};

}  // namespace lam_detail

// Validates a labelled colored lamination against the structure shared by
// all laminations of minimal factorizations: face counts, chord ownership,
// the noncrossing tree of chords, and the two label orderings (increasing
// clockwise around boundary points, decreasing clockwise around white
// faces starting from their boundary arc).
inline PropertyReport validate_properties(const ColoredLamination& L, int n, int k) {
  using namespace lam_detail;
  PropertyReport rep;

  // Collect face corner positions.
  std::vector<std::vector<int>> faces;
  std::vector<int> labels;
  try {
    for (const BlackFace& f : L.faces) {
      std::vector<int> pos;
      for (const UnitAngle& a : f.corners) pos.push_back(grid_position(a, n));
      std::sort(pos.begin(), pos.end());
      if (pos.size() < 2 || std::adjacent_find(pos.begin(), pos.end()) != pos.end()) {
        rep.witness = "face with fewer than two distinct corners";
        return rep;
      }
      faces.push_back(std::move(pos));
      labels.push_back(f.label);
    }
  } catch (const std::exception& e) {
    rep.witness = e.what();
    return rep;
  }

  // Labels must be exactly 1..k.
  {
    std::vector<int> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
      if (sorted[static_cast<std::size_t>(i)] != i + 1) {
        rep.witness = "face labels are not exactly 1..k";
        return rep;
      }
    }
  }

  // Face edges as segments.
  std::vector<SegChord> segs;
  for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
    const auto& c = faces[static_cast<std::size_t>(fi)];
    const int l = static_cast<int>(c.size());
    for (int j = 0; j + 1 < l; ++j)
      segs.push_back({c[static_cast<std::size_t>(j)], c[static_cast<std::size_t>(j + 1)], fi});
    if (l > 2) segs.push_back({c[0], c[static_cast<std::size_t>(l - 1)], fi});
  }
  for (const Chord& ch : L.chords) {
    // Free chords participate in the geometry checks but belong to no face;
    // in a factorization lamination all of them duplicate face edges.
    int u = grid_position(ch.a, n), v = grid_position(ch.b, n);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    bool dup = false;
    for (const SegChord& s : segs)
      if (s.u == u && s.v == v) {
        dup = true;
        break;
      }
    if (!dup) segs.push_back({u, v, -1});
  }

  // No chord shared between two black faces (a 2-corner face occupies its
  // chord entirely).
  rep.no_shared_chord = true;
  for (std::size_t i = 0; i < segs.size() && rep.no_shared_chord; ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (segs[i].u == segs[j].u && segs[i].v == segs[j].v && segs[i].face >= 0 &&
          segs[j].face >= 0 && segs[i].face != segs[j].face) {
        rep.no_shared_chord = false;
        rep.witness = "chord (" + std::to_string(segs[i].u) + "," + std::to_string(segs[i].v) +
                      ") shared by two faces";
        break;
      }

  // Noncrossing + tree-like structure: chords meet only at endpoints and
  // the point/face incidence graph is a tree spanning all n points.
  rep.noncrossing_tree = true;
  for (std::size_t i = 0; i < segs.size() && rep.noncrossing_tree; ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (strictly_cross(segs[i], segs[j])) {
        rep.noncrossing_tree = false;
        rep.witness = "crossing chords";
        break;
      }
  if (rep.noncrossing_tree) {
    // Point/face incidence graph must be a tree spanning all n points.
    Dsu dsu(n + static_cast<int>(faces.size()));
    bool acyclic = true;
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
      for (int p : faces[static_cast<std::size_t>(fi)])
        if (!dsu.unite(p - 1, n + fi)) acyclic = false;
    int comps = 0;
    for (int v = 0; v < n + static_cast<int>(faces.size()); ++v)
      if (dsu.find(v) == v) ++comps;
    rep.noncrossing_tree = acyclic && comps == 1;
    if (!rep.noncrossing_tree && rep.witness.empty())
      rep.witness = acyclic ? "incidence graph disconnected" : "cycle through distinct faces";
  }

  // Face counts: k black faces and n white regions, each with one arc.
  {
    rep.face_counts = static_cast<int>(faces.size()) == k;
    if (!rep.face_counts && rep.witness.empty()) rep.witness = "black face count differs from k";
    if (rep.face_counts) {
      // Partition arcs by iterated refinement against every chord.
      std::vector<int> group(static_cast<std::size_t>(n), 0);
      for (const SegChord& s : segs) {
        std::vector<int> next(group.size());
        // Map (group, side) pairs to fresh ids.
        std::vector<int> remap(2 * group.size(), -1);
        int fresh = 0;
        for (int arc = 1; arc <= n; ++arc) {
          const bool inside = s.u < arc && arc <= s.v;
          const int key = 2 * group[static_cast<std::size_t>(arc - 1)] + (inside ? 1 : 0);
          if (remap[static_cast<std::size_t>(key)] < 0)
            remap[static_cast<std::size_t>(key)] = fresh++;
          next[static_cast<std::size_t>(arc - 1)] = remap[static_cast<std::size_t>(key)];
        }
        group.swap(next);
      }
      int regions = 0;
      {
        std::vector<char> seen(group.size() + 1, 0);
        for (int g : group)
          if (!seen[static_cast<std::size_t>(g)]) {
            seen[static_cast<std::size_t>(g)] = 1;
            ++regions;
          }
      }
      if (regions != n) {
        rep.face_counts = false;
        rep.witness = "white region count " + std::to_string(regions) + " differs from n";
      }
    }
  }

  // Around each grid point, incident faces must be labelled in increasing
  // clockwise order. Clockwise order from point p is ascending (q - p) mod n
  // over the faces' corner offsets.
  rep.increasing_around_points = true;
  for (int p = 1; p <= n && rep.increasing_around_points; ++p) {
    std::vector<std::pair<int, int>> around;  // (min offset, label)
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
      const auto& c = faces[static_cast<std::size_t>(fi)];
      if (!std::binary_search(c.begin(), c.end(), p)) continue;
      int best = n;
      for (int q : c) {
        if (q == p) continue;
        int off = q - p;
        if (off < 0) off += n;
        best = std::min(best, off);
      }
      around.emplace_back(best, labels[static_cast<std::size_t>(fi)]);
    }
    std::sort(around.begin(), around.end());
    for (std::size_t i = 0; i + 1 < around.size(); ++i)
      if (around[i].second >= around[i + 1].second) {
        rep.increasing_around_points = false;
        rep.witness = "labels around point " + std::to_string(p) + " not increasing clockwise";
        break;
      }
  }

  // Around each white region, neighbouring face labels must decrease
  // clockwise starting from the region's boundary arc. The chords bounding
  // the region of arc p are those whose p-side is inclusion-minimal.
  rep.decreasing_around_white = true;
  for (int arc = 1; arc <= n && rep.decreasing_around_white; ++arc) {
    std::vector<ArcInterval> sides(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
      ArcInterval inside{segs[i].u, segs[i].v - segs[i].u};
      ArcInterval outside{segs[i].v, n - (segs[i].v - segs[i].u)};
      sides[i] = contains_arc(inside, arc, n) ? inside : outside;
    }
    std::vector<std::pair<int, int>> boundary;  // (clockwise start offset, label)
    for (std::size_t i = 0; i < segs.size(); ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < segs.size() && minimal; ++j) {
        if (j == i) continue;
        if (sides[j].len < sides[i].len && subset(sides[j], sides[i], n)) minimal = false;
      }
      if (!minimal || segs[i].face < 0) continue;
      // Hidden side of the chord seen from this region.
      const ArcInterval hidden{sides[i].start == segs[i].u ? segs[i].v : segs[i].u,
                               n - sides[i].len};
      int off = (hidden.start + 1) - arc;  // first hidden arc, clockwise from our arc
      while (off <= 0) off += n;
      boundary.emplace_back(off, labels[static_cast<std::size_t>(segs[i].face)]);
    }
    std::sort(boundary.begin(), boundary.end());
    for (std::size_t i = 0; i + 1 < boundary.size(); ++i)
      if (boundary[i].second <= boundary[i + 1].second) {
        rep.decreasing_around_white = false;
        rep.witness = "labels around the white region of arc " + std::to_string(arc) +
                      " not decreasing clockwise";
        break;
      }
  }

  return rep;
}

}  // namespace minfact
