#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "minfact/lamination.hpp"
#include "minfact/perm.hpp"
#include "minfact/tree.hpp"

namespace minfact {

// The labelled colored lamination of a minimal factorization: black face i
// is the face of the i-th cycle.
inline ColoredLamination phi(const Factorization& f) { return full_lamination(f); }

// Inverse of phi: reads each face's corners in increasing order, cycle i
// from the face labelled i. Validates membership first.
inline Factorization phi_inverse(const ColoredLamination& L, int n) {
  const int k = static_cast<int>(L.faces.size());
  PropertyReport rep = validate_properties(L, n, k);
  // Membership needs the counts, unshared chords, the noncrossing tree and
  // increasing labels; decreasing labels around white faces then follow.
  if (!(rep.face_counts && rep.no_shared_chord && rep.noncrossing_tree &&
        rep.increasing_around_points))
    throw std::invalid_argument("phi_inverse: not a factorization lamination: " + rep.witness);

  std::vector<const BlackFace*> by_label(static_cast<std::size_t>(k), nullptr);
  for (const BlackFace& f : L.faces)
    by_label[static_cast<std::size_t>(f.label - 1)] = &f;
  Factorization out;
  out.n = n;
  for (int i = 0; i < k; ++i) {
    std::vector<int> sup;
    for (const UnitAngle& a : by_label[static_cast<std::size_t>(i)]->corners)
      sup.push_back(lam_detail::grid_position(a, n));
    std::sort(sup.begin(), sup.end());
    out.cycles.emplace_back(std::move(sup), n);
  }
  MinimalityCheck chk = check_minimal_factorization(out.cycles, n);
  if (!chk.ok)
    throw std::invalid_argument("phi_inverse: extracted tuple not minimal: " + chk.reason);
  return out;
}

// --------------------------------------------------------------------------
// The dual tree
// --------------------------------------------------------------------------

// Builds the dual tree of the factorization's lamination without any
// geometry. White faces are identified with boundary arcs: the face
// visited x-th by the exploration owns the arc (x-1, x]. A cycle
// (e_1 < ... < e_l) governs the contiguous arc range [e_1+1, e_l], split
// by its corners into the slots (e_j, e_{j+1}], one per white child. These
// ranges are laminar across the cycles of a minimal factorization, which
// yields the tree directly: left-to-right order is ascending range order,
// and each slot keeps exactly one arc uncovered (its white vertex).
inline LabelledBiTypeTree psi(const Factorization& f) {
  const int n = f.n;
  const int k = f.k();

  auto lo_of = [&](int i) { return f.cycles[static_cast<std::size_t>(i)].support.front() + 1; };
  auto hi_of = [&](int i) { return f.cycles[static_cast<std::size_t>(i)].support.back(); };

  std::vector<int> order(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (lo_of(a) != lo_of(b)) return lo_of(a) < lo_of(b);
    return hi_of(a) > hi_of(b);  // wider first, so parents precede children
  });

  // Laminar sweep: children grouped per (parent cycle, slot); slot -1 keys
  // the root's children.
  std::vector<std::vector<std::vector<int>>> slot_children(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    slot_children[static_cast<std::size_t>(i)].resize(
        f.cycles[static_cast<std::size_t>(i)].support.size() - 1);
  std::vector<int> top_level;

  std::vector<int> stack;  // open cycles, innermost last
  for (int ci : order) {
    const int lo = lo_of(ci), hi = hi_of(ci);
    while (!stack.empty() && hi_of(stack.back()) < lo) stack.pop_back();
    if (stack.empty()) {
      top_level.push_back(ci);
    } else {
      const int pa = stack.back();
      const auto& sup = f.cycles[static_cast<std::size_t>(pa)].support;
      if (hi > hi_of(pa))
        throw std::invalid_argument("psi: cycle ranges not laminar (input not minimal?)");
      // Slot j covers (sup[j], sup[j+1]]: largest corner strictly below lo.
      const auto it = std::upper_bound(sup.begin(), sup.end(), lo - 1);
      const int j = static_cast<int>(it - sup.begin()) - 1;
      if (j < 0 || j + 1 >= static_cast<int>(sup.size()) ||
          hi > sup[static_cast<std::size_t>(j + 1)])
        throw std::invalid_argument("psi: cycle crosses a corner of an enclosing cycle");
      slot_children[static_cast<std::size_t>(pa)][static_cast<std::size_t>(j)].push_back(ci);
    }
    stack.push_back(ci);
  }

  // Assemble the preorder degree and label sequences. Frames alternate
  // white (a list of child cycles) and black (a cycle index).
  std::vector<std::int32_t> deg, labels;
  deg.reserve(static_cast<std::size_t>(n + k));
  labels.reserve(static_cast<std::size_t>(n + k));

  struct Frame {
    bool black;
    int cycle;                      // black frames
    const std::vector<int>* kids;   // white frames
  };
  std::vector<Frame> dfs;
  dfs.push_back({false, -1, &top_level});
  while (!dfs.empty()) {
    Frame fr = dfs.back();
    dfs.pop_back();
    if (!fr.black) {
      deg.push_back(static_cast<std::int32_t>(fr.kids->size()));
      labels.push_back(0);
      for (auto it = fr.kids->rbegin(); it != fr.kids->rend(); ++it)
        dfs.push_back({true, *it, nullptr});
    } else {
      const auto& slots = slot_children[static_cast<std::size_t>(fr.cycle)];
      deg.push_back(static_cast<std::int32_t>(slots.size()));
      labels.push_back(fr.cycle + 1);
      for (auto it = slots.rbegin(); it != slots.rend(); ++it)
        dfs.push_back({false, -1, &*it});
    }
  }

  LabelledBiTypeTree out(PlaneTree(std::move(deg)), std::move(labels));
  if (out.tree.size() != n + k) throw std::logic_error("psi: dual tree has wrong size");
  return out;
}

// Visit order of white vertices under the constrained exploration: the
// root is visited first; a subtree rooted at a white vertex whose black
// parent has label a explores black children with labels below a, then the
// vertex itself, then black children with labels above a, left to right in
// each group. Returns the 1..n label per vertex (0 on blacks).
inline std::vector<std::int32_t> white_exploration_labels(const LabelledBiTypeTree& t) {
  const std::int32_t sz = t.tree.size();
  std::vector<std::int32_t> lab(static_cast<std::size_t>(sz), 0);
  std::int32_t next = 1;

  struct Action {
    std::int32_t v;
    std::int32_t parent_label;
    bool visit;
  };
  std::vector<Action> stack;
  stack.push_back({0, 0, false});
  while (!stack.empty()) {
    Action a = stack.back();
    stack.pop_back();
    if (a.visit) {
      lab[static_cast<std::size_t>(a.v)] = next++;
      continue;
    }
    if (t.is_black(a.v)) {
      auto kids = t.tree.children(a.v);
      const std::int32_t l = t.black_label[static_cast<std::size_t>(a.v)];
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, l, false});
      continue;
    }
    auto kids = t.tree.children(a.v);
    std::vector<std::int32_t> low, high;
    for (std::int32_t c : kids) {
      if (t.black_label[static_cast<std::size_t>(c)] < a.parent_label)
        low.push_back(c);
      else
        high.push_back(c);
    }
    for (auto it = high.rbegin(); it != high.rend(); ++it) stack.push_back({*it, 0, false});
    stack.push_back({a.v, 0, true});
    for (auto it = low.rbegin(); it != low.rend(); ++it) stack.push_back({*it, 0, false});
  }
  return lab;
}

// Inverse of psi. The cycle of the black vertex labelled i reads
// (m, r_1, ..., r_j) where m+1 is the least white exploration label in its
// subtree and r_p the largest label in the subtree of its p-th child. The
// extraction formula is derived rather than primitive, so the minimality
// of the result is re-checked unless the caller opts out.
inline Factorization psi_inverse(const LabelledBiTypeTree& t, bool verify = true) {
  UnValidation v = validate_U_n(t);
  if (!v.ok)
    throw std::invalid_argument("psi_inverse: input not a valid labelled tree: " + v.witness);

  const std::vector<std::int32_t> lab = white_exploration_labels(t);
  const std::int32_t sz = t.tree.size();

  std::vector<std::int32_t> mn(static_cast<std::size_t>(sz)), mx(static_cast<std::size_t>(sz));
  for (std::int32_t u = sz - 1; u >= 0; --u) {
    std::int32_t lo = t.is_black(u) ? std::numeric_limits<std::int32_t>::max()
                                    : lab[static_cast<std::size_t>(u)];
    std::int32_t hi = t.is_black(u) ? 0 : lab[static_cast<std::size_t>(u)];
    std::int32_t c = u + 1;
    for (std::int32_t i = 0; i < t.tree.degree(u); ++i) {
      lo = std::min(lo, mn[static_cast<std::size_t>(c)]);
      hi = std::max(hi, mx[static_cast<std::size_t>(c)]);
      c += t.tree.subtree_size(c);
    }
    mn[static_cast<std::size_t>(u)] = lo;
    mx[static_cast<std::size_t>(u)] = hi;
  }

  const int n = t.n_white();
  const int k = t.n_black();
  std::vector<Cycle> cycles(static_cast<std::size_t>(k));
  for (std::int32_t u = 0; u < sz; ++u) {
    if (!t.is_black(u)) continue;
    std::vector<int> sup;
    sup.reserve(static_cast<std::size_t>(t.tree.degree(u)) + 1);
    sup.push_back(mn[static_cast<std::size_t>(u)] - 1);
    std::int32_t c = u + 1;
    for (std::int32_t i = 0; i < t.tree.degree(u); ++i) {
      sup.push_back(mx[static_cast<std::size_t>(c)]);
      c += t.tree.subtree_size(c);
    }
    for (std::size_t i = 0; i + 1 < sup.size(); ++i)
      if (sup[i] >= sup[i + 1])
        throw std::logic_error("psi_inverse: extracted support not increasing (corrupted tree)");
    cycles[static_cast<std::size_t>(t.black_label[static_cast<std::size_t>(u)] - 1)] =
        Cycle(std::move(sup), n);
  }

  Factorization f;
  f.n = n;
  f.cycles = std::move(cycles);
  if (verify) {
    MinimalityCheck chk = check_minimal_factorization(f.cycles, n);
    if (!chk.ok)
      throw std::logic_error("psi_inverse: product check failed (corrupted tree): " + chk.reason);
  }
  return f;
}

// Second route from tree to lamination: faces are drawn from the white
// exploration order using subtree white counts instead of label maxima
// (labels inside any subtree form one contiguous block, which this routine
// asserts). Tests compare phi_inverse of this lamination with psi_inverse.
inline ColoredLamination lamination_of_tree(const LabelledBiTypeTree& t) {
  const std::vector<std::int32_t> lab = white_exploration_labels(t);
  const std::int32_t sz = t.tree.size();
  const int n = t.n_white();

  // White counts and label minima per subtree.
  std::vector<std::int32_t> whites(static_cast<std::size_t>(sz), 0);
  std::vector<std::int32_t> mn(static_cast<std::size_t>(sz));
  for (std::int32_t u = sz - 1; u >= 0; --u) {
    std::int32_t w = t.is_black(u) ? 0 : 1;
    std::int32_t lo = t.is_black(u) ? std::numeric_limits<std::int32_t>::max()
                                    : lab[static_cast<std::size_t>(u)];
    std::int32_t c = u + 1;
    for (std::int32_t i = 0; i < t.tree.degree(u); ++i) {
      w += whites[static_cast<std::size_t>(c)];
      lo = std::min(lo, mn[static_cast<std::size_t>(c)]);
      c += t.tree.subtree_size(c);
    }
    whites[static_cast<std::size_t>(u)] = w;
    mn[static_cast<std::size_t>(u)] = lo;
  }

  ColoredLamination L;
  for (std::int32_t u = 0; u < sz; ++u) {
    if (!t.is_black(u)) continue;
    BlackFace face;
    face.label = t.black_label[static_cast<std::size_t>(u)];
    face.corners.emplace_back(mn[static_cast<std::size_t>(u)] - 1, n);
    std::int32_t c = u + 1;
    for (std::int32_t i = 0; i < t.tree.degree(u); ++i) {
      // Contiguity: the subtree's labels are exactly [mn, mn + whites).
      face.corners.emplace_back(mn[static_cast<std::size_t>(c)] +
                                    whites[static_cast<std::size_t>(c)] - 1,
                                n);
      c += t.tree.subtree_size(c);
    }
    std::sort(face.corners.begin(), face.corners.end());
    append_face_edges(face, L.chords);
    L.faces.push_back(std::move(face));
  }
  return L;
}

}  // namespace minfact
