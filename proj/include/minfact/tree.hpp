#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minfact/rng.hpp"

namespace minfact {

// A finite plane tree stored as its preorder outdegree sequence. Preorder
// position doubles as the lexicographic (Neveu word) rank, so vertex ids,
// subtree slices and first-visit order all coincide:
//   - the subtree rooted at v occupies ids [v, v + subtree_size(v)),
//   - the i-th child of v is found by skipping earlier child subtrees.
// Subtree sizes, parents and heights are computed once at construction.
class PlaneTree {
 public:
  PlaneTree() : PlaneTree(std::vector<std::int32_t>{0}) {}

  explicit PlaneTree(std::vector<std::int32_t> degrees) : deg_(std::move(degrees)) {
    const std::size_t n = deg_.size();
    if (n == 0) throw std::invalid_argument("PlaneTree: empty degree sequence");
    // Lukasiewicz validity: prefix sums of (deg - 1) stay >= 0, end at -1.
    long long walk = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (deg_[i] < 0) throw std::invalid_argument("PlaneTree: negative degree");
      walk += deg_[i] - 1;
      if (walk < 0 && i + 1 < n)
        throw std::invalid_argument("PlaneTree: degree sequence underflows before the end");
    }
    if (walk != -1) throw std::invalid_argument("PlaneTree: degree sequence does not sum to n-1");

    size_.assign(n, 1);
    parent_.assign(n, -1);
    height_.assign(n, 0);
    std::vector<std::int32_t> stack;  // open ancestors, children still pending
    std::vector<std::int32_t> pending;
    stack.reserve(64);
    pending.reserve(64);
    for (std::size_t v = 0; v < n; ++v) {
      if (!stack.empty()) {
        parent_[v] = stack.back();
        height_[v] = height_[static_cast<std::size_t>(stack.back())] + 1;
      }
      if (deg_[v] > 0) {
        stack.push_back(static_cast<std::int32_t>(v));
        pending.push_back(deg_[v]);
      } else {
        std::int32_t u = static_cast<std::int32_t>(v);
        while (!stack.empty()) {
          std::int32_t p = stack.back();
          size_[static_cast<std::size_t>(p)] += size_[static_cast<std::size_t>(u)];
          if (--pending.back() > 0) break;
          stack.pop_back();
          pending.pop_back();
          u = p;
        }
      }
    }
  }

  std::int32_t size() const { return static_cast<std::int32_t>(deg_.size()); }
  std::int32_t degree(std::int32_t v) const { return deg_[static_cast<std::size_t>(v)]; }
  std::int32_t subtree_size(std::int32_t v) const { return size_[static_cast<std::size_t>(v)]; }
  std::int32_t parent(std::int32_t v) const { return parent_[static_cast<std::size_t>(v)]; }
  std::int32_t height(std::int32_t v) const { return height_[static_cast<std::size_t>(v)]; }
  const std::vector<std::int32_t>& degrees() const { return deg_; }

  std::vector<std::int32_t> children(std::int32_t v) const {
    std::vector<std::int32_t> out;
    out.reserve(static_cast<std::size_t>(degree(v)));
    std::int32_t c = v + 1;
    for (std::int32_t i = 0; i < degree(v); ++i) {
      out.push_back(c);
      c += subtree_size(c);
    }
    return out;
  }

  std::int32_t tree_height() const {
    std::int32_t h = 0;
    for (std::int32_t x : height_) h = std::max(h, x);
    return h;
  }

  // Contour samples at integer times 0..2n; zero on [2n-2, 2n].
  std::vector<std::int32_t> contour() const {
    const std::int32_t n = size();
    std::vector<std::int32_t> c;
    c.reserve(static_cast<std::size_t>(2 * n + 1));
    c.push_back(0);
    struct Frame {
      std::int32_t v;
      std::int32_t next_child;
      std::int32_t children_left;
    };
    std::vector<Frame> stack;
    stack.push_back({0, 1, degree(0)});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.children_left > 0) {
        const std::int32_t ch = f.next_child;
        f.next_child += subtree_size(ch);
        --f.children_left;
        stack.push_back({ch, ch + 1, degree(ch)});
        c.push_back(height(ch));
      } else {
        stack.pop_back();
        if (!stack.empty()) c.push_back(height(stack.back().v));
      }
    }
    while (c.size() < static_cast<std::size_t>(2 * n + 1)) c.push_back(0);
    return c;
  }

  // Lukasiewicz walk W_0..W_n over preorder; W_n = -1.
  std::vector<std::int32_t> lukasiewicz() const {
    std::vector<std::int32_t> w;
    w.reserve(deg_.size() + 1);
    w.push_back(0);
    std::int32_t cur = 0;
    for (std::int32_t d : deg_) {
      cur += d - 1;
      w.push_back(cur);
    }
    return w;
  }

  static PlaneTree from_lukasiewicz(const std::vector<std::int32_t>& w) {
    if (w.size() < 2 || w.front() != 0)
      throw std::invalid_argument("from_lukasiewicz: walk must start at 0");
    std::vector<std::int32_t> deg;
    deg.reserve(w.size() - 1);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) deg.push_back(w[i + 1] - w[i] + 1);
    return PlaneTree(std::move(deg));
  }

  static PlaneTree from_contour(const std::vector<std::int32_t>& c) {
    // Accepts 2n+1 samples (possibly padded with zeros past 2n-2).
    if (c.empty() || c.front() != 0)
      throw std::invalid_argument("from_contour: walk must start at 0");
    std::size_t end = c.size();
    while (end > 1 && c[end - 1] == 0 && c[end - 2] == 0) --end;
    std::vector<std::int32_t> deg;
    std::vector<std::size_t> stack;  // indices into deg of open vertices
    deg.push_back(0);
    stack.push_back(0);
    for (std::size_t t = 1; t < end; ++t) {
      std::int32_t step = c[t] - c[t - 1];
      if (step == 1) {
        if (stack.empty()) throw std::invalid_argument("from_contour: walk restarts");
        ++deg[stack.back()];
        deg.push_back(0);
        stack.push_back(deg.size() - 1);
      } else if (step == -1) {
        if (stack.empty()) throw std::invalid_argument("from_contour: walk underflows");
        stack.pop_back();
      } else {
        throw std::invalid_argument("from_contour: steps must be +-1");
      }
    }
    if (stack.size() != 1 || stack.front() != 0)
      throw std::invalid_argument("from_contour: walk does not close the tree");
    return PlaneTree(std::move(deg));
  }

  bool operator==(const PlaneTree& o) const { return deg_ == o.deg_; }

 private:
  std::vector<std::int32_t> deg_;
  std::vector<std::int32_t> size_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> height_;
};

// --------------------------------------------------------------------------
// a-nodes and related splits
// --------------------------------------------------------------------------

// u is an a-node when its children split into two consecutive groups whose
// subtree sizes both reach a. Thresholds compare with >=.
inline bool is_a_node(const PlaneTree& t, std::int32_t u, std::int64_t a) {
  if (a <= 0) return true;
  const std::int32_t k = t.degree(u);
  if (k < 2) return false;
  std::int64_t total = 0;
  std::vector<std::int64_t> prefix;
  prefix.reserve(static_cast<std::size_t>(k));
  std::int32_t c = u + 1;
  for (std::int32_t i = 0; i < k; ++i) {
    total += t.subtree_size(c);
    prefix.push_back(total);
    c += t.subtree_size(c);
  }
  for (std::int32_t r = 1; r < k; ++r)
    if (prefix[static_cast<std::size_t>(r - 1)] >= a &&
        total - prefix[static_cast<std::size_t>(r - 1)] >= a)
      return true;
  return false;
}

inline bool is_branching_point(const PlaneTree& t, std::int32_t u, std::int64_t a) {
  const std::int32_t k = t.degree(u);
  int big = 0;
  std::int32_t c = u + 1;
  for (std::int32_t i = 0; i < k; ++i) {
    if (t.subtree_size(c) >= a) ++big;
    c += t.subtree_size(c);
  }
  return big >= 2;
}

inline std::vector<std::int32_t> a_nodes(const PlaneTree& t, std::int64_t a) {
  std::vector<std::int32_t> out;
  for (std::int32_t v = 0; v < t.size(); ++v)
    if (is_a_node(t, v, a)) out.push_back(v);
  return out;
}

// Contour regions relative to u: vertices first visited before u, the
// subtree of u, and vertices first visited after the last visit of u.
struct RegionSizes {
  std::int64_t before = 0;
  std::int64_t subtree = 0;
  std::int64_t after = 0;
};

inline RegionSizes region_partition(const PlaneTree& t, std::int32_t u) {
  RegionSizes r;
  r.before = u;  // first-visit order equals preorder rank
  r.subtree = t.subtree_size(u);
  r.after = static_cast<std::int64_t>(t.size()) - r.before - r.subtree;
  return r;
}

// --------------------------------------------------------------------------
// Labelled bi-type trees
// --------------------------------------------------------------------------

// Vertices at even height are white, odd height black; every leaf must be
// white. Black vertices carry labels 1..N°; black_label[v] == 0 for whites.
struct LabelledBiTypeTree {
  PlaneTree tree;
  std::vector<std::int32_t> black_label;

  LabelledBiTypeTree() : tree(), black_label{0} {}
  LabelledBiTypeTree(PlaneTree t, std::vector<std::int32_t> labels)
      : tree(std::move(t)), black_label(std::move(labels)) {
    if (black_label.size() != static_cast<std::size_t>(tree.size()))
      throw std::invalid_argument("LabelledBiTypeTree: label vector size mismatch");
  }

  bool is_black(std::int32_t v) const { return tree.height(v) % 2 == 1; }

  std::int32_t n_black() const {
    std::int32_t c = 0;
    for (std::int32_t v = 0; v < tree.size(); ++v) c += is_black(v);
    return c;
  }
  std::int32_t n_white() const { return tree.size() - n_black(); }

  // Every black vertex must have at least one child and a label in 1..N°,
  // labels pairwise distinct; whites must carry label 0.
  bool structure_ok(std::string* why = nullptr) const {
    const std::int32_t nb = n_black();
    std::vector<char> seen(static_cast<std::size_t>(nb) + 1, 0);
    for (std::int32_t v = 0; v < tree.size(); ++v) {
      if (is_black(v)) {
        if (tree.degree(v) == 0) {
          if (why) *why = "black leaf at vertex " + std::to_string(v);
          return false;
        }
        std::int32_t l = black_label[static_cast<std::size_t>(v)];
        if (l < 1 || l > nb || seen[static_cast<std::size_t>(l)]) {
          if (why) *why = "bad black label at vertex " + std::to_string(v);
          return false;
        }
        seen[static_cast<std::size_t>(l)] = 1;
      } else if (black_label[static_cast<std::size_t>(v)] != 0) {
        if (why) *why = "white vertex " + std::to_string(v) + " carries a label";
        return false;
      }
    }
    return true;
  }

  bool operator==(const LabelledBiTypeTree& o) const {
    return tree == o.tree && black_label == o.black_label;
  }
};

// The monotype tree on white vertices: x is a child of y iff x is a
// grandchild of y. Child order is inherited, so the preorder of the
// reduced tree is the restriction of the original preorder to whites.
// white_of_reduced, when given, receives the original id of each reduced
// vertex.
inline PlaneTree white_reduced(const LabelledBiTypeTree& t,
                               std::vector<std::int32_t>* white_of_reduced = nullptr) {
  std::vector<std::int32_t> deg;
  if (white_of_reduced) white_of_reduced->clear();
  for (std::int32_t v = 0; v < t.tree.size(); ++v) {
    if (t.is_black(v)) continue;
    std::int32_t grandchildren = 0;
    std::int32_t c = v + 1;
    for (std::int32_t i = 0; i < t.tree.degree(v); ++i) {
      grandchildren += t.tree.degree(c);
      c += t.tree.subtree_size(c);
    }
    deg.push_back(grandchildren);
    if (white_of_reduced) white_of_reduced->push_back(v);
  }
  return PlaneTree(std::move(deg));
}

struct UnValidation {
  bool ok = true;
  std::string witness;
};

// Membership test for the constrained label set: bi-type with white
// leaves, the root's child labels decreasing left to right, and for every
// other white vertex the cyclic word (parent label, child labels left to
// right) decreasing when started from its maximum.
inline UnValidation validate_U_n(const LabelledBiTypeTree& t) {
  std::string why;
  if (!t.structure_ok(&why)) return {false, why};

  auto cyclic_decreasing = [](const std::vector<std::int32_t>& word) {
    const std::size_t m = word.size();
    if (m <= 1) return true;
    std::size_t top = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (word[i] > word[top]) top = i;
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (word[(top + i) % m] <= word[(top + i + 1) % m]) return false;
    return true;
  };

  for (std::int32_t v = 0; v < t.tree.size(); ++v) {
    if (t.is_black(v)) continue;
    std::vector<std::int32_t> word;
    if (v != 0) word.push_back(t.black_label[static_cast<std::size_t>(t.tree.parent(v))]);
    std::int32_t c = v + 1;
    for (std::int32_t i = 0; i < t.tree.degree(v); ++i) {
      word.push_back(t.black_label[static_cast<std::size_t>(c)]);
      c += t.tree.subtree_size(c);
    }
    if (v == 0) {
      for (std::size_t i = 0; i + 1 < word.size(); ++i)
        if (word[i] <= word[i + 1])
          return {false, "root child labels not decreasing"};
    } else if (!cyclic_decreasing(word)) {
      return {false, "labels around white vertex " + std::to_string(v) +
                         " not cyclically decreasing"};
    }
  }
  return {true, ""};
}

// Permutes the black children of every white vertex (subtrees carried
// along) into the unique left-to-right order accepted by validate_U_n:
// at the root, descending labels; elsewhere, labels below the parent label
// descending, then labels above it descending. Label assignment unchanged.
inline LabelledBiTypeTree canonical_reorder(const LabelledBiTypeTree& t) {
  const std::int32_t n = t.tree.size();
  std::vector<std::int32_t> new_deg, new_label;
  new_deg.reserve(static_cast<std::size_t>(n));
  new_label.reserve(static_cast<std::size_t>(n));

  struct Frame {
    std::int32_t v;
    std::int32_t parent_label;  // 0 at the root
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    new_deg.push_back(t.tree.degree(f.v));
    new_label.push_back(t.black_label[static_cast<std::size_t>(f.v)]);
    auto kids = t.tree.children(f.v);
    if (t.is_black(f.v)) {
      // Black vertices keep their child order.
      for (auto it = kids.rbegin(); it != kids.rend(); ++it)
        stack.push_back({*it, t.black_label[static_cast<std::size_t>(f.v)]});
    } else {
      std::vector<std::int32_t> order(kids.begin(), kids.end());
      auto label = [&](std::int32_t c) { return t.black_label[static_cast<std::size_t>(c)]; };
      std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        const std::int32_t la = label(a), lb = label(b);
        const bool low_a = la < f.parent_label, low_b = lb < f.parent_label;
        if (f.v != 0 && low_a != low_b) return low_a;
        return la > lb;
      });
      for (auto it = order.rbegin(); it != order.rend(); ++it)
        stack.push_back({*it, 0});
    }
  }
  return LabelledBiTypeTree(PlaneTree(std::move(new_deg)), std::move(new_label));
}

// Reassigns labels (black vertices fixed, subtrees fixed) into the unique
// valid order: top-down, each white vertex's child labels are sorted into
// the arrangement accepted by validate_U_n for the parent label already
// assigned above. Starting from a uniform assignment this yields a uniform
// valid labelling: the label sets per sibling group are preserved and each
// valid labelling has exactly prod_w (child count)! preimages.
inline LabelledBiTypeTree canonical_relabel(const LabelledBiTypeTree& t) {
  std::vector<std::int32_t> label = t.black_label;

  struct Frame {
    std::int32_t white;
    std::int32_t parent_label;  // 0 at the root
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    auto kids = t.tree.children(f.white);
    std::vector<std::int32_t> labs;
    labs.reserve(kids.size());
    for (std::int32_t c : kids) labs.push_back(label[static_cast<std::size_t>(c)]);
    std::sort(labs.begin(), labs.end(), [&](std::int32_t a, std::int32_t b) {
      const bool low_a = a < f.parent_label, low_b = b < f.parent_label;
      if (f.white != 0 && low_a != low_b) return low_a;
      return a > b;
    });
    for (std::size_t i = 0; i < kids.size(); ++i) {
      label[static_cast<std::size_t>(kids[i])] = labs[i];
      // Grandchildren see the freshly assigned parent label.
      auto grandkids = t.tree.children(kids[static_cast<std::int32_t>(i)]);
      for (std::int32_t g : grandkids) stack.push_back({g, labs[i]});
    }
  }
  return LabelledBiTypeTree(t.tree, std::move(label));
}

// --------------------------------------------------------------------------
// Exhaustive enumeration of small bi-type trees (test/oracle support)
// --------------------------------------------------------------------------

// All bi-type trees with n white vertices and white leaves, as degree
// sequences (labels not assigned). Deterministic order. Works by
// continuation passing over a shared preorder degree buffer: each helper
// appends its part, runs the continuation, and restores the buffer.
inline void enumerate_bitype_trees(int n, const std::function<void(const PlaneTree&)>& emit) {
  if (n < 1) return;
  std::vector<std::int32_t> deg;

  // attach_blacks(w, white_pos, k): append black children of the white
  // vertex at white_pos consuming exactly w further white vertices.
  std::function<void(int, std::size_t, const std::function<void()>&)> attach_blacks;
  // attach_whites(w, black_pos, k): append >= 1 white subtrees of the black
  // vertex at black_pos consuming exactly w white vertices.
  std::function<void(int, std::size_t, const std::function<void()>&)> attach_whites;
  // white_subtree(w, k): append one white-rooted subtree with w whites.
  std::function<void(int, const std::function<void()>&)> white_subtree;

  white_subtree = [&](int w, const std::function<void()>& k) {
    const std::size_t my = deg.size();
    deg.push_back(0);
    attach_blacks(w - 1, my, k);
    deg.resize(my);
  };

  attach_blacks = [&](int w, std::size_t white_pos, const std::function<void()>& k) {
    if (w == 0) {
      k();
      return;
    }
    for (int take = 1; take <= w; ++take) {
      ++deg[white_pos];
      const std::size_t black_pos = deg.size();
      deg.push_back(0);
      attach_whites(take, black_pos,
                    [&, take, white_pos]() { attach_blacks(w - take, white_pos, k); });
      deg.resize(black_pos);
      --deg[white_pos];
    }
  };

  attach_whites = [&](int w, std::size_t black_pos, const std::function<void()>& k) {
    for (int take = 1; take <= w; ++take) {
      ++deg[black_pos];
      if (take == w) {
        white_subtree(take, k);
      } else {
        white_subtree(take, [&, take, black_pos]() { attach_whites(w - take, black_pos, k); });
      }
      --deg[black_pos];
    }
  };

  const std::function<void()> sink = [&]() { emit(PlaneTree(deg)); };
  deg.push_back(0);
  attach_blacks(n - 1, 0, sink);
}

// All elements of the constrained labelled set with n white vertices:
// every bi-type shape with every valid labelling.
inline void enumerate_U_n(int n, const std::function<void(const LabelledBiTypeTree&)>& emit) {
  enumerate_bitype_trees(n, [&](const PlaneTree& shape) {
    std::vector<std::int32_t> blacks;
    for (std::int32_t v = 0; v < shape.size(); ++v)
      if (shape.height(v) % 2 == 1) blacks.push_back(v);
    std::vector<std::int32_t> perm(blacks.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::int32_t>(i + 1);
    std::sort(perm.begin(), perm.end());
    do {
      std::vector<std::int32_t> labels(static_cast<std::size_t>(shape.size()), 0);
      for (std::size_t i = 0; i < blacks.size(); ++i)
        labels[static_cast<std::size_t>(blacks[i])] = perm[i];
      LabelledBiTypeTree t(shape, std::move(labels));
      if (validate_U_n(t).ok) emit(t);
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
}

}  // namespace minfact
