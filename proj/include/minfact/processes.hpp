#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "minfact/lamination.hpp"
#include "minfact/perm.hpp"
#include "minfact/rng.hpp"
#include "minfact/sampling.hpp"
#include "minfact/tree.hpp"
#include "minfact/weights.hpp"

namespace minfact {

// --------------------------------------------------------------------------
// Chords and faces of tree vertices
// --------------------------------------------------------------------------

// First and last visit times of every vertex under the contour walk.
inline void contour_visit_spans(const PlaneTree& t, std::vector<std::int64_t>& first,
                                std::vector<std::int64_t>& last) {
  const std::int32_t n = t.size();
  first.assign(static_cast<std::size_t>(n), 0);
  last.assign(static_cast<std::size_t>(n), 0);
  struct Frame {
    std::int32_t v;
    std::int32_t next_child;
    std::int32_t children_left;
  };
  std::vector<Frame> stack;
  std::int64_t time = 0;
  stack.push_back({0, 1, t.degree(0)});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.children_left > 0) {
      const std::int32_t ch = f.next_child;
      f.next_child += t.subtree_size(ch);
      --f.children_left;
      ++time;
      first[static_cast<std::size_t>(ch)] = time;
      last[static_cast<std::size_t>(ch)] = time;
      stack.push_back({ch, ch + 1, t.degree(ch)});
    } else {
      stack.pop_back();
      if (!stack.empty()) {
        ++time;
        last[static_cast<std::size_t>(stack.back().v)] = time;
      }
    }
  }
}

// Chord of a vertex: endpoints at the first and last contour visit over
// denominator 2|T|. Leaves yield degenerate point chords.
inline Chord chord_of_vertex(const PlaneTree& t, std::int32_t x) {
  std::vector<std::int64_t> first, last;
  contour_visit_spans(t, first, last);
  const long long D = 2LL * t.size();
  return Chord{UnitAngle(first[static_cast<std::size_t>(x)], D),
               UnitAngle(last[static_cast<std::size_t>(x)], D)};
}

// Face of a vertex: corners at all its contour visit times (degree + 1 of
// them) over denominator 2|T|.
inline BlackFace face_of_vertex(const PlaneTree& t, std::int32_t x) {
  // Visit times of x: first visit, then the return after each child.
  const long long D = 2LL * t.size();
  BlackFace f;
  std::vector<std::int64_t> first, last;
  contour_visit_spans(t, first, last);
  std::int64_t time = first[static_cast<std::size_t>(x)];
  f.corners.emplace_back(time, D);
  std::int32_t c = x + 1;
  for (std::int32_t i = 0; i < t.degree(x); ++i) {
    time += 2 * t.subtree_size(c);  // full excursion through the child subtree
    f.corners.emplace_back(time, D);
    c += t.subtree_size(c);
  }
  std::sort(f.corners.begin(), f.corners.end());
  return f;
}

// --------------------------------------------------------------------------
// Lamination-valued processes
// --------------------------------------------------------------------------

struct ProcessEvent {
  std::int64_t time = 0;
  bool is_face = false;
  Chord chord;       // when !is_face
  BlackFace face;    // when is_face
};

// Time-ordered chord/face insertions; the lamination at time u is the
// circle plus all events with time <= u.
struct LaminationProcess {
  std::vector<ProcessEvent> events;
  double scale_B_tilde = 0;   // display clock scale
  double one_minus_nu0 = 1;   // display clock factor

  ColoredLamination at(double u) const {
    ColoredLamination L;
    for (const ProcessEvent& e : events) {
      if (static_cast<double>(e.time) > u) break;
      if (e.is_face) {
        append_face_edges(e.face, L.chords);
        L.faces.push_back(e.face);
      } else {
        L.chords.push_back(e.chord);
      }
    }
    return L;
  }
};

// The face process of a factorization: event i inserts the face of the
// i-th cycle at time i.
inline LaminationProcess face_process(const Factorization& f) {
  LaminationProcess p;
  p.events.reserve(f.cycles.size());
  for (int i = 0; i < f.k(); ++i) {
    ProcessEvent e;
    e.time = i + 1;
    e.is_face = true;
    e.face = face_of_cycle(f.cycles[static_cast<std::size_t>(i)], f.n);
    e.face.label = i + 1;
    p.events.push_back(std::move(e));
  }
  return p;
}

// Black process of a labelled bi-type tree: event i inserts the face of
// the black vertex labelled i, over denominator 2|T|.
inline LaminationProcess black_process(const LabelledBiTypeTree& t) {
  std::vector<std::int64_t> first, last;
  contour_visit_spans(t.tree, first, last);
  const long long D = 2LL * t.tree.size();

  const std::int32_t nb = t.n_black();
  std::vector<std::int32_t> vertex_of_label(static_cast<std::size_t>(nb) + 1, -1);
  for (std::int32_t v = 0; v < t.tree.size(); ++v)
    if (t.is_black(v)) vertex_of_label[static_cast<std::size_t>(t.black_label[static_cast<std::size_t>(v)])] = v;

  LaminationProcess p;
  p.events.reserve(static_cast<std::size_t>(nb));
  for (std::int32_t lab = 1; lab <= nb; ++lab) {
    const std::int32_t v = vertex_of_label[static_cast<std::size_t>(lab)];
    if (v < 0) throw std::invalid_argument("black_process: missing label");
    ProcessEvent e;
    e.time = lab;
    e.is_face = true;
    e.face.label = lab;
    std::int64_t time = first[static_cast<std::size_t>(v)];
    e.face.corners.emplace_back(time, D);
    std::int32_t c = v + 1;
    for (std::int32_t i = 0; i < t.tree.degree(v); ++i) {
      time += 2 * t.tree.subtree_size(c);
      e.face.corners.emplace_back(time, D);
      c += t.tree.subtree_size(c);
    }
    std::sort(e.face.corners.begin(), e.face.corners.end());
    p.events.push_back(std::move(e));
  }
  return p;
}

// White process: chords of the white reduced tree, the root first, the
// remaining vertices in uniform random order.
inline LaminationProcess white_process(const LabelledBiTypeTree& t, Rng& rng) {
  std::vector<std::int32_t> white_of_reduced;
  PlaneTree reduced = white_reduced(t, &white_of_reduced);
  std::vector<std::int64_t> first, last;
  contour_visit_spans(reduced, first, last);
  const long long D = 2LL * reduced.size();

  std::vector<std::int32_t> order;
  order.reserve(static_cast<std::size_t>(reduced.size()) - 1);
  for (std::int32_t v = 1; v < reduced.size(); ++v) order.push_back(v);
  rng.shuffle(order);
  order.insert(order.begin(), 0);

  LaminationProcess p;
  p.events.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    ProcessEvent e;
    e.time = static_cast<std::int64_t>(i) + 1;
    e.is_face = false;
    e.chord = Chord{UnitAngle(first[static_cast<std::size_t>(order[i])], D),
                    UnitAngle(last[static_cast<std::size_t>(order[i])], D)};
    p.events.push_back(std::move(e));
  }
  return p;
}

// Coupled black/white processes: each black vertex u is tied to the white
// child k(u) whose reduced subtree is largest (ties uniform); black labels
// are the ranks of the white labels of the k(u). Event i then carries both
// the face of u_i and the chord of k(u_i), enabling per-time distance
// diagnostics between the two processes.
struct CoupledProcesses {
  LaminationProcess black;
  LaminationProcess white_partner;  // chord c_{k(u_i)} at event time i
};

inline CoupledProcesses coupled_processes(const LabelledBiTypeTree& t, Rng& rng) {
  std::vector<std::int32_t> white_of_reduced;
  PlaneTree reduced = white_reduced(t, &white_of_reduced);
  std::vector<std::int32_t> reduced_of_white(static_cast<std::size_t>(t.tree.size()), -1);
  for (std::int32_t i = 0; i < reduced.size(); ++i)
    reduced_of_white[static_cast<std::size_t>(white_of_reduced[static_cast<std::size_t>(i)])] = i;

  // Uniform white labels, root first.
  std::vector<std::int32_t> white_label(static_cast<std::size_t>(reduced.size()), 0);
  {
    std::vector<std::int32_t> order;
    for (std::int32_t v = 1; v < reduced.size(); ++v) order.push_back(v);
    rng.shuffle(order);
    white_label[0] = 1;
    for (std::size_t i = 0; i < order.size(); ++i)
      white_label[static_cast<std::size_t>(order[i])] = static_cast<std::int32_t>(i) + 2;
  }

  // k(u): white child with the largest reduced subtree (uniform ties).
  std::vector<std::pair<std::int32_t, std::int32_t>> anchor;  // (white label of k(u), black vertex)
  for (std::int32_t v = 0; v < t.tree.size(); ++v) {
    if (!t.is_black(v)) continue;
    std::vector<std::int32_t> best;
    std::int32_t best_size = -1;
    std::int32_t c = v + 1;
    for (std::int32_t i = 0; i < t.tree.degree(v); ++i) {
      const std::int32_t rv = reduced_of_white[static_cast<std::size_t>(c)];
      const std::int32_t sz = reduced.subtree_size(rv);
      if (sz > best_size) {
        best_size = sz;
        best.clear();
      }
      if (sz == best_size) best.push_back(rv);
      c += t.tree.subtree_size(c);
    }
    const std::int32_t pick =
        best[static_cast<std::size_t>(rng.below(best.size()))];
    anchor.emplace_back(white_label[static_cast<std::size_t>(pick)], v);
  }
  std::sort(anchor.begin(), anchor.end());

  // Relabel blacks by anchor rank; the induced labelling is uniform.
  LabelledBiTypeTree relabelled = t;
  for (std::size_t i = 0; i < anchor.size(); ++i)
    relabelled.black_label[static_cast<std::size_t>(anchor[i].second)] =
        static_cast<std::int32_t>(i) + 1;

  CoupledProcesses out;
  out.black = black_process(relabelled);

  std::vector<std::int64_t> rfirst, rlast;
  contour_visit_spans(reduced, rfirst, rlast);
  const long long D = 2LL * reduced.size();
  // Partner chords, ordered by black label = anchor rank. anchor[i].first
  // is the white label of k(u); recover its reduced vertex.
  std::vector<std::int32_t> vertex_of_white_label(static_cast<std::size_t>(reduced.size()) + 1, -1);
  for (std::int32_t v = 0; v < reduced.size(); ++v)
    vertex_of_white_label[static_cast<std::size_t>(white_label[static_cast<std::size_t>(v)])] = v;
  for (std::size_t i = 0; i < anchor.size(); ++i) {
    const std::int32_t rv = vertex_of_white_label[static_cast<std::size_t>(anchor[i].first)];
    ProcessEvent e;
    e.time = static_cast<std::int64_t>(i) + 1;
    e.is_face = false;
    e.chord = Chord{UnitAngle(rfirst[static_cast<std::size_t>(rv)], D),
                    UnitAngle(rlast[static_cast<std::size_t>(rv)], D)};
    out.white_partner.events.push_back(std::move(e));
  }
  return out;
}

// --------------------------------------------------------------------------
// Excursions and the Poisson chord process
// --------------------------------------------------------------------------

// Continuous piecewise-linear function on [0,1] with F(0) = F(1) = 0,
// F >= 0, given by breakpoints.
struct Excursion {
  std::vector<double> xs;
  std::vector<double> ys;

  void validate() const {
    if (xs.size() != ys.size() || xs.size() < 2)
      throw std::invalid_argument("Excursion: need matching breakpoint arrays");
    if (xs.front() != 0.0 || xs.back() != 1.0)
      throw std::invalid_argument("Excursion: domain must be [0,1]");
    if (ys.front() != 0.0 || ys.back() != 0.0)
      throw std::invalid_argument("Excursion: endpoints must vanish");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if (xs[i + 1] <= xs[i]) throw std::invalid_argument("Excursion: x not increasing");
    for (double y : ys)
      if (y < 0) throw std::invalid_argument("Excursion: negative value");
  }

  double max() const {
    double m = 0;
    for (double y : ys) m = std::max(m, y);
    return m;
  }
};

struct TimedChord {
  double g = 0, d = 0;  // chord endpoints as circle fractions
  double r = 0;         // time mark
};

namespace excursion_detail {

// Cell decomposition of the epigraph: between consecutive breakpoint
// levels the excursion intervals above a level keep their identity and
// their endpoints g(t), d(t) are affine in the level t. The fn callback
// receives one cell per (interval, band) with the t-range where the width
// d - g stays >= eps, plus the affine endpoint coefficients.
template <class Fn>
void for_each_cell(const Excursion& F, double eps, Fn&& fn) {
  struct Crossing {
    double s0, slope_inv;
    bool up;
  };
  std::vector<double> levels = F.ys;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t m = F.xs.size();

  std::vector<Crossing> cr;
  for (std::size_t b = 0; b + 1 < levels.size(); ++b) {
    const double lo = levels[b], hi = levels[b + 1];
    cr.clear();
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double y0 = F.ys[i], y1 = F.ys[i + 1];
      if (y0 == y1) continue;
      if (std::min(y0, y1) <= lo && std::max(y0, y1) >= hi) {
        const double inv = (F.xs[i + 1] - F.xs[i]) / (y1 - y0);
        cr.push_back({F.xs[i] - y0 * inv, inv, y1 > y0});
      }
    }
    const double tmid = 0.5 * (lo + hi);
    std::sort(cr.begin(), cr.end(), [&](const Crossing& a, const Crossing& b2) {
      return a.s0 + a.slope_inv * tmid < b2.s0 + b2.slope_inv * tmid;
    });
    bool has_open = false;
    Crossing open{0, 0, true};
    for (const Crossing& x : cr) {
      if (x.up) {
        open = x;
        has_open = true;
        continue;
      }
      if (!has_open) continue;
      has_open = false;
      const double w_lo = (x.s0 - open.s0) + (x.slope_inv - open.slope_inv) * lo;
      const double w_hi = (x.s0 - open.s0) + (x.slope_inv - open.slope_inv) * hi;
      double t0 = lo, t1 = hi;
      if (w_lo < eps && w_hi < eps) continue;
      if (w_lo < eps || w_hi < eps) {
        const double tcross = lo + (eps - w_lo) * (hi - lo) / (w_hi - w_lo);
        if (w_lo < eps)
          t0 = tcross;
        else
          t1 = tcross;
      }
      if (t1 > t0) fn(t0, t1, open.s0, open.slope_inv, x.s0, x.slope_inv);
    }
  }
}

}  // namespace excursion_detail

// Chords of the Poisson process on the epigraph of F with intensity
// 2 ds dt / (d - g) dr, restricted to excursion intervals of width >= eps
// and time marks in [0, c]. Integrating the intensity over s collapses
// each cell to total mass 2 dt dr, so each cell is sampled by a Poisson
// count with uniform level and time marks.
inline std::vector<TimedChord> sample_chord_process(const Excursion& F, double c, double eps,
                                                    Rng& rng) {
  F.validate();
  if (eps <= 0) throw std::invalid_argument("sample_chord_process: eps must be positive");
  if (c < 0) throw std::invalid_argument("sample_chord_process: c must be >= 0");
  std::vector<TimedChord> out;
  if (c == 0) return out;
  excursion_detail::for_each_cell(
      F, eps, [&](double t0, double t1, double g0, double ginv, double d0, double dinv) {
        const std::int64_t count = rng.poisson(2.0 * (t1 - t0) * c);
        for (std::int64_t i = 0; i < count; ++i) {
          const double t = rng.uniform(t0, t1);
          out.push_back({g0 + ginv * t, d0 + dinv * t, rng.uniform(0.0, c)});
        }
      });
  std::sort(out.begin(), out.end(),
            [](const TimedChord& a, const TimedChord& b) { return a.r < b.r; });
  return out;
}

// Total intensity mass per unit time of the restricted process; the
// expected chord count at horizon c is c times this value.
inline double chord_process_mass(const Excursion& F, double eps) {
  F.validate();
  double total = 0;
  excursion_detail::for_each_cell(
      F, eps, [&](double t0, double t1, double, double, double, double) {
        total += 2.0 * (t1 - t0);
      });
  return total;
}

// Contour of a tree rescaled to an excursion on [0,1]: values C_{2nt} * B/n.
inline Excursion excursion_from_tree(const PlaneTree& t, double B_over_n) {
  const std::vector<std::int32_t> c = t.contour();
  Excursion F;
  const std::size_t len = c.size();
  F.xs.resize(len);
  F.ys.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    F.xs[i] = static_cast<double>(i) / static_cast<double>(len - 1);
    F.ys[i] = static_cast<double>(c[i]) * B_over_n;
  }
  return F;
}

// Discrete stand-in for the limit height excursion: the rescaled contour
// of a size-m conditioned tree. alpha = 2 uses the critical geometric law,
// alpha < 2 the critical power-law tail. Meant for m >= 1e4.
inline Excursion stable_excursion_approx(double alpha, int m, Rng& rng) {
  if (m < 2) throw std::invalid_argument("stable_excursion_approx: m too small");
  std::vector<double> nu;
  double B = 0;
  if (alpha >= 2.0) {
    // Geometric(1/2) on {0,1,2,...}: critical, variance 2 -> B_m = sqrt(m).
    nu.resize(64);
    double p = 0.5;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      nu[i] = p;
      p *= 0.5;
    }
    B = std::sqrt(static_cast<double>(m));
  } else {
    WeightSequence w = WeightSequence::power_law(alpha);
    CriticalEquivalent ce = critical_equivalent(w);
    nu = ce.nu_table(m);
    B = scaling_constants(ce, static_cast<double>(m)).B;
  }
  PlaneTree t = sample_gw_conditioned(nu, m, rng);
  return excursion_from_tree(t, B / static_cast<double>(m));
}

}  // namespace minfact
