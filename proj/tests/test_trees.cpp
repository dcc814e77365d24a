#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <set>

#include "minfact/rng.hpp"
#include "minfact/tree.hpp"

using namespace minfact;

namespace {

// The 7-vertex tree whose contour and Lukasiewicz walks are fixed below.
const std::vector<std::int32_t> kSevenDegrees = {2, 2, 0, 1, 0, 1, 0};

// An 18-vertex labelled bi-type tree with 11 whites and 7 blacks; the
// fixture for the reduced tree and process tests.
LabelledBiTypeTree fixture18() {
  PlaneTree t(std::vector<std::int32_t>{3, 2, 1, 2, 0, 0, 1, 1, 0, 1, 0, 2, 2, 1, 0, 1, 0, 0});
  std::vector<std::int32_t> labels(18, 0);
  labels[1] = 6;
  labels[3] = 3;
  labels[7] = 7;
  labels[9] = 4;
  labels[11] = 2;
  labels[13] = 1;
  labels[15] = 5;
  return LabelledBiTypeTree(std::move(t), std::move(labels));
}

std::vector<PlaneTree> all_plane_trees(int n) {
  // All preorder degree sequences of plane trees with n vertices.
  std::vector<PlaneTree> out;
  std::vector<std::int32_t> deg;
  std::function<void(int, int)> rec = [&](int placed, int open) {
    // open = 1 + sum(deg - 1) so far; each new vertex consumes one slot.
    if (placed == n) {
      if (open == 0) out.emplace_back(deg);
      return;
    }
    for (int d = 0; d <= n - placed; ++d) {
      const int next_open = open - 1 + d;
      if (next_open > n - placed - 1) continue;       // too many open slots left
      if (next_open == 0 && placed + 1 < n) continue;  // closed before placing all
      deg.push_back(d);
      rec(placed + 1, next_open);
      deg.pop_back();
    }
  };
  rec(0, 1);
  return out;
}

}  // namespace

TEST_CASE("degree sequence validation") {
  CHECK_THROWS_AS(PlaneTree(std::vector<std::int32_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(PlaneTree(std::vector<std::int32_t>{1}), std::invalid_argument);
  CHECK_THROWS_AS(PlaneTree(std::vector<std::int32_t>{0, 0}), std::invalid_argument);
  CHECK_NOTHROW(PlaneTree(std::vector<std::int32_t>{0}));
}

TEST_CASE("structure queries on the seven-vertex fixture") {
  PlaneTree t(kSevenDegrees);
  CHECK(t.size() == 7);
  CHECK(t.subtree_size(0) == 7);
  CHECK(t.subtree_size(1) == 4);
  CHECK(t.subtree_size(3) == 2);
  CHECK(t.parent(1) == 0);
  CHECK(t.parent(5) == 0);
  CHECK(t.parent(6) == 5);
  CHECK(t.height(4) == 3);
  CHECK(t.children(0) == std::vector<std::int32_t>{1, 5});
  CHECK(t.children(1) == std::vector<std::int32_t>{2, 3});
  CHECK(t.tree_height() == 3);
}

TEST_CASE("contour of the seven-vertex fixture") {
  PlaneTree t(kSevenDegrees);
  CHECK(t.contour() ==
        std::vector<std::int32_t>{0, 1, 2, 1, 2, 3, 2, 1, 0, 1, 2, 1, 0, 0, 0});
}

TEST_CASE("contour edge cases") {
  CHECK(PlaneTree(std::vector<std::int32_t>{0}).contour() == std::vector<std::int32_t>{0, 0, 0});
  CHECK(PlaneTree(std::vector<std::int32_t>{1, 1, 0}).contour() ==
        std::vector<std::int32_t>{0, 1, 2, 1, 0, 0, 0});
}

TEST_CASE("Lukasiewicz walks") {
  CHECK(PlaneTree(kSevenDegrees).lukasiewicz() ==
        std::vector<std::int32_t>{0, 1, 2, 1, 1, 0, 0, -1});
  CHECK(PlaneTree(std::vector<std::int32_t>{0}).lukasiewicz() == std::vector<std::int32_t>{0, -1});
  // Star with three leaves.
  CHECK(PlaneTree(std::vector<std::int32_t>{3, 0, 0, 0}).lukasiewicz() ==
        std::vector<std::int32_t>{0, 2, 1, 0, -1});
}

TEST_CASE("walk codings are bijective, exhaustively to size 12") {
  for (int n = 1; n <= 12; ++n) {
    long long count = 0;
    long long failures = 0;
    for (const PlaneTree& t : all_plane_trees(n)) {
      ++count;
      if (!(PlaneTree::from_contour(t.contour()) == t)) ++failures;
      if (!(PlaneTree::from_lukasiewicz(t.lukasiewicz()) == t)) ++failures;
    }
    CHECK(failures == 0);
    // Catalan(n-1) trees of each size.
    if (n == 12) CHECK(count == 58786);
  }
}

TEST_CASE("walk codings are bijective on random larger trees") {
  Rng rng(20260810);
  for (int trial = 0; trial < 40; ++trial) {
    // Random degree sequence via uniform rotation of random increments.
    const int n = 50 + static_cast<int>(rng.below(200));
    std::vector<std::int32_t> deg(static_cast<std::size_t>(n), 0);
    int placed = n - 1;
    for (std::size_t i = 0; i < deg.size() && placed > 0; ++i) {
      deg[i] = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(placed) + 1));
      placed -= deg[i];
    }
    deg.back() += placed;
    long long walk = 0, best = 0;
    std::size_t cut = 0;
    for (std::size_t i = 0; i < deg.size(); ++i) {
      walk += deg[i] - 1;
      if (walk < best) {
        best = walk;
        cut = i + 1;
      }
    }
    if (cut != 0 && cut != deg.size())
      std::rotate(deg.begin(), deg.begin() + static_cast<std::ptrdiff_t>(cut), deg.end());
    PlaneTree t(deg);
    CHECK(PlaneTree::from_contour(t.contour()) == t);
    CHECK(PlaneTree::from_lukasiewicz(t.lukasiewicz()) == t);
  }
}

TEST_CASE("a-nodes and branching points") {
  // Balanced binary tree of depth 3: the root splits into two subtrees of
  // size 7 each.
  std::vector<std::int32_t> deg = {2, 2, 2, 0, 0, 2, 0, 0, 2, 2, 0, 0, 2, 0, 0};
  PlaneTree t(deg);
  CHECK(is_branching_point(t, 0, 7));
  CHECK(is_a_node(t, 0, 7));
  CHECK_FALSE(is_a_node(t, 0, 8));
  CHECK(is_a_node(t, 0, 0));

  // Path graph: no a-node for a >= 1.
  PlaneTree path(std::vector<std::int32_t>{1, 1, 1, 0});
  for (std::int32_t v = 0; v < path.size(); ++v) CHECK_FALSE(is_a_node(path, v, 1));

  // Every a-branching point is an a-node (exhaustive check).
  for (const PlaneTree& tt : all_plane_trees(7))
    for (std::int32_t v = 0; v < tt.size(); ++v)
      for (std::int64_t a = 1; a <= 4; ++a)
        if (is_branching_point(tt, v, a)) CHECK(is_a_node(tt, v, a));
}

TEST_CASE("a-node detection agrees with brute force over split points") {
  for (const PlaneTree& t : all_plane_trees(8)) {
    for (std::int32_t v = 0; v < t.size(); ++v) {
      auto kids = t.children(v);
      for (std::int64_t a = 1; a <= 5; ++a) {
        bool brute = false;
        for (std::size_t r = 1; r < kids.size(); ++r) {
          std::int64_t left = 0, right = 0;
          for (std::size_t i = 0; i < kids.size(); ++i)
            (i < r ? left : right) += t.subtree_size(kids[i]);
          brute = brute || (left >= a && right >= a);
        }
        CHECK(is_a_node(t, v, a) == brute);
      }
    }
  }
}

TEST_CASE("region partition against contour simulation") {
  // Replay the contour walk itself: vertices are discovered on +1 steps,
  // first/last visit times tracked with a stack. Regions then count first
  // visits before u, inside u's span, and after u's last visit.
  for (const PlaneTree& t : all_plane_trees(6)) {
    const auto c = t.contour();
    const std::int32_t sz = t.size();
    std::vector<std::int64_t> first(static_cast<std::size_t>(sz), -1),
        last(static_cast<std::size_t>(sz), -1);
    std::vector<std::int32_t> stack{0};
    first[0] = last[0] = 0;
    std::int32_t discovered = 1;
    for (std::size_t time = 1; time < static_cast<std::size_t>(2 * sz - 1); ++time) {
      if (c[time] > c[time - 1]) {
        stack.push_back(discovered);
        first[static_cast<std::size_t>(discovered)] = static_cast<std::int64_t>(time);
        last[static_cast<std::size_t>(discovered)] = static_cast<std::int64_t>(time);
        ++discovered;
      } else {
        stack.pop_back();
        last[static_cast<std::size_t>(stack.back())] = static_cast<std::int64_t>(time);
      }
    }
    for (std::int32_t u = 0; u < sz; ++u) {
      RegionSizes r = region_partition(t, u);
      std::int64_t before = 0, inside = 0, after = 0;
      for (std::int32_t v = 0; v < sz; ++v) {
        if (first[static_cast<std::size_t>(v)] < first[static_cast<std::size_t>(u)])
          ++before;
        else if (first[static_cast<std::size_t>(v)] <= last[static_cast<std::size_t>(u)])
          ++inside;
        else
          ++after;
      }
      CHECK(r.before == before);
      CHECK(r.subtree == inside);
      CHECK(r.after == after);
    }
  }
  // Root and last-leaf edge cases.
  PlaneTree t(kSevenDegrees);
  CHECK(region_partition(t, 0).before == 0);
  CHECK(region_partition(t, 0).subtree == t.size());
  CHECK(region_partition(t, t.size() - 1).after == 0);
}

TEST_CASE("white reduced tree of the 18-vertex fixture") {
  LabelledBiTypeTree t = fixture18();
  CHECK(t.n_white() == 11);
  CHECK(t.n_black() == 7);
  std::vector<std::int32_t> map;
  PlaneTree reduced = white_reduced(t, &map);
  CHECK(reduced.size() == 11);
  // Root of the reduced tree has the root's 5 grandchildren.
  CHECK(reduced.degree(0) == 5);
  CHECK(map[0] == 0);
  // Grandchild order is inherited from the original preorder.
  CHECK(map[1] == 2);

  // Single white root reduces to a single vertex.
  LabelledBiTypeTree lone;
  CHECK(white_reduced(lone).size() == 1);
}

TEST_CASE("validate_U_n accepts the fixture and rejects perturbations") {
  LabelledBiTypeTree t = fixture18();
  CHECK(validate_U_n(t).ok);

  // Swap two root child labels: no longer decreasing.
  LabelledBiTypeTree bad = t;
  std::swap(bad.black_label[1], bad.black_label[9]);
  CHECK_FALSE(validate_U_n(bad).ok);

  // Black leaf is rejected.
  PlaneTree t2(std::vector<std::int32_t>{1, 0});
  std::vector<std::int32_t> l2 = {0, 1};
  CHECK_FALSE(validate_U_n(LabelledBiTypeTree(t2, l2)).ok);
}

TEST_CASE("canonical_reorder fixes label orders and is idempotent") {
  LabelledBiTypeTree t = fixture18();
  // Scramble children of the root (move subtrees around) by relabelling:
  // swapping the labels of the root's children breaks validity; reorder
  // restores it by permuting the subtrees.
  LabelledBiTypeTree scrambled = t;
  std::swap(scrambled.black_label[1], scrambled.black_label[9]);
  LabelledBiTypeTree fixed = canonical_reorder(scrambled);
  CHECK(validate_U_n(fixed).ok);
  CHECK(canonical_reorder(fixed) == fixed);
  // Vertex count and label multiset preserved.
  CHECK(fixed.tree.size() == t.tree.size());

  // Already-valid trees are fixed points.
  CHECK(canonical_reorder(t) == t);
}

TEST_CASE("reduced tree preserves contour-region white counts exactly") {
  // For every bi-type tree with <= 8 whites and every white vertex u, the
  // region sizes in the reduced tree equal the white counts of the
  // original regions.
  for (int n = 1; n <= 8; n += 7) {
    enumerate_bitype_trees(n, [&](const PlaneTree& shape) {
      std::vector<std::int32_t> labels(static_cast<std::size_t>(shape.size()), 0);
      std::int32_t next = 1;
      for (std::int32_t v = 0; v < shape.size(); ++v)
        if (shape.height(v) % 2 == 1) labels[static_cast<std::size_t>(v)] = next++;
      LabelledBiTypeTree t(shape, labels);
      std::vector<std::int32_t> map;
      PlaneTree reduced = white_reduced(t, &map);
      for (std::int32_t rv = 0; rv < reduced.size(); ++rv) {
        const std::int32_t u = map[static_cast<std::size_t>(rv)];
        RegionSizes rr = region_partition(reduced, rv);
        // Count whites in the original regions.
        std::int64_t before = 0, inside = 0, after = 0;
        for (std::int32_t v = 0; v < shape.size(); ++v) {
          if (shape.height(v) % 2 == 1) continue;
          if (v < u)
            ++before;
          else if (v < u + shape.subtree_size(u))
            ++inside;
          else
            ++after;
        }
        CHECK(rr.before == before);
        CHECK(rr.subtree == inside);
        CHECK(rr.after == after);
      }
    });
  }
}

TEST_CASE("bi-type tree counts for small n") {
  // Shapes with white leaves: 1, 1, 3 for n = 1, 2, 3.
  int c1 = 0, c2 = 0, c3 = 0;
  enumerate_bitype_trees(1, [&](const PlaneTree&) { ++c1; });
  enumerate_bitype_trees(2, [&](const PlaneTree&) { ++c2; });
  enumerate_bitype_trees(3, [&](const PlaneTree&) { ++c3; });
  CHECK(c1 == 1);
  CHECK(c2 == 1);
  CHECK(c3 == 3);

  // Valid labellings: |U_3| matches the factorization count 4.
  int u3 = 0;
  enumerate_U_n(3, [&](const LabelledBiTypeTree& t) {
    CHECK(validate_U_n(t).ok);
    ++u3;
  });
  CHECK(u3 == 4);
}

TEST_CASE("black vertex count is at most n-1") {
  for (int n = 1; n <= 6; ++n)
    enumerate_bitype_trees(n, [&](const PlaneTree& shape) {
      int blacks = 0;
      for (std::int32_t v = 0; v < shape.size(); ++v)
        if (shape.height(v) % 2 == 1) {
          ++blacks;
          CHECK(shape.degree(v) >= 1);
        }
      CHECK(blacks <= std::max(n - 1, 0));
    });
}
