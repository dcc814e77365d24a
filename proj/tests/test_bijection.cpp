#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "minfact/bijection.hpp"
#include "minfact/enumerate.hpp"
#include "minfact/lamination.hpp"

using namespace minfact;

namespace {

Factorization make_fact(int n, const std::vector<std::vector<int>>& cycles) {
  Factorization f;
  f.n = n;
  for (const auto& c : cycles) f.cycles.emplace_back(c, n);
  return f;
}

const Factorization kFig8 = make_fact(8, {{5, 6, 7, 8}, {2, 3}, {1, 2, 5}, {4, 5}});

// The dual tree of kFig8: root with black children labelled 3 and 1.
LabelledBiTypeTree fig8_tree() {
  PlaneTree t(std::vector<std::int32_t>{2, 2, 0, 2, 1, 0, 1, 0, 3, 0, 0, 0});
  std::vector<std::int32_t> labels(12, 0);
  labels[1] = 3;
  labels[4] = 2;
  labels[6] = 4;
  labels[8] = 1;
  return LabelledBiTypeTree(std::move(t), std::move(labels));
}

std::string fact_key(const Factorization& f) {
  std::string key = std::to_string(f.n) + ":";
  for (const Cycle& c : f.cycles) {
    for (int v : c.support) key += std::to_string(v) + ".";
    key += "|";
  }
  return key;
}

std::string tree_key(const LabelledBiTypeTree& t) {
  std::string key;
  for (std::int32_t v = 0; v < t.tree.size(); ++v)
    key += std::to_string(t.tree.degree(v)) + "." +
           std::to_string(t.black_label[static_cast<std::size_t>(v)]) + "|";
  return key;
}

}  // namespace

TEST_CASE("phi produces the validated lamination and inverts") {
  ColoredLamination L = phi(kFig8);
  REQUIRE(L.faces.size() == 4);
  CHECK(validate_properties(L, 8, 4).all());
  CHECK(phi_inverse(L, 8) == kFig8);

  // Single labelled chord for n = 2.
  Factorization f2 = make_fact(2, {{1, 2}});
  ColoredLamination L2 = phi(f2);
  REQUIRE(L2.faces.size() == 1);
  CHECK(L2.faces[0].corners.size() == 2);
  CHECK(phi_inverse(L2, 2) == f2);
}

TEST_CASE("phi_inverse rejects invalid laminations") {
  ColoredLamination L;
  BlackFace a = face_of_cycle(Cycle({1, 3}, 4), 4);
  a.label = 1;
  BlackFace b = face_of_cycle(Cycle({2, 4}, 4), 4);  // crosses a
  b.label = 2;
  append_face_edges(a, L.chords);
  append_face_edges(b, L.chords);
  L.faces = {a, b};
  CHECK_THROWS_AS(phi_inverse(L, 4), std::invalid_argument);
}

TEST_CASE("psi builds the dual tree of the 8-cycle example") {
  LabelledBiTypeTree t = psi(kFig8);
  CHECK(t == fig8_tree());
  CHECK(t.n_white() == 8);
  CHECK(t.n_black() == 4);
  CHECK(validate_U_n(t).ok);
}

TEST_CASE("psi edge cases") {
  // Single full cycle: root - black(1) - n-1 white leaves.
  Factorization full = make_fact(5, {{1, 2, 3, 4, 5}});
  LabelledBiTypeTree t = psi(full);
  CHECK(t.tree.degrees() == std::vector<std::int32_t>{1, 4, 0, 0, 0, 0});
  CHECK(t.black_label[1] == 1);

  // n = 2.
  Factorization f2 = make_fact(2, {{1, 2}});
  CHECK(psi(f2).tree.degrees() == std::vector<std::int32_t>{1, 1, 0});

  // n = 1: the lone root.
  CHECK(psi(Factorization{1, {}}).tree.size() == 1);
}

TEST_CASE("white exploration labels of the example tree") {
  LabelledBiTypeTree t = fig8_tree();
  std::vector<std::int32_t> lab = white_exploration_labels(t);
  // Whites at preorder ids 0,2,3,5,7,9,10,11.
  CHECK(lab[0] == 1);
  CHECK(lab[2] == 2);
  CHECK(lab[3] == 4);
  CHECK(lab[5] == 3);
  CHECK(lab[7] == 5);
  CHECK(lab[9] == 6);
  CHECK(lab[10] == 7);
  CHECK(lab[11] == 8);
}

TEST_CASE("white exploration is a bijection onto 1..n across the corpus") {
  for (int n = 1; n <= 6; ++n)
    for (const Factorization& f : all_minimal_factorizations(n)) {
      LabelledBiTypeTree t = psi(f);
      std::vector<std::int32_t> lab = white_exploration_labels(t);
      std::set<std::int32_t> seen;
      for (std::int32_t v = 0; v < t.tree.size(); ++v)
        if (!t.is_black(v)) seen.insert(lab[static_cast<std::size_t>(v)]);
      CHECK(static_cast<int>(seen.size()) == n);
      CHECK(*seen.begin() == 1);
      CHECK(*seen.rbegin() == n);
    }
}

TEST_CASE("psi_inverse recovers the example factorization") {
  CHECK(psi_inverse(fig8_tree()) == kFig8);
  // Root - black - leaf gives the transposition.
  PlaneTree t2(std::vector<std::int32_t>{1, 1, 0});
  LabelledBiTypeTree b2(t2, {0, 1, 0});
  CHECK(psi_inverse(b2) == make_fact(2, {{1, 2}}));
}

TEST_CASE("round trips over the full corpus, both directions") {
  for (int n = 1; n <= 6; ++n) {
    // Factorization -> tree -> factorization.
    std::set<std::string> tree_keys;
    long long m_count = 0;
    for (const Factorization& f : all_minimal_factorizations(n)) {
      ++m_count;
      LabelledBiTypeTree t = psi(f);
      CHECK(validate_U_n(t).ok);
      CHECK(psi_inverse(t) == f);
      CHECK(tree_keys.insert(tree_key(t)).second);
      // Class is preserved: black degree + 1 equals the cycle length.
      for (std::int32_t v = 0; v < t.tree.size(); ++v)
        if (t.is_black(v)) {
          const int lab = t.black_label[static_cast<std::size_t>(v)];
          CHECK(t.tree.degree(v) + 1 ==
                f.cycles[static_cast<std::size_t>(lab - 1)].length());
        }
      // phi round trip.
      CHECK(phi_inverse(phi(f), n) == f);
    }
    // Tree -> factorization -> tree over the whole labelled set.
    long long u_count = 0;
    std::set<std::string> fact_keys;
    enumerate_U_n(n, [&](const LabelledBiTypeTree& t) {
      ++u_count;
      Factorization f = psi_inverse(t);
      CHECK(is_minimal_factorization(f));
      CHECK(psi(f) == t);
      CHECK(fact_keys.insert(fact_key(f)).second);
    });
    CHECK(u_count == m_count);
  }
}

TEST_CASE("closed-form extraction agrees with the lamination route") {
  for (int n = 2; n <= 6; ++n)
    enumerate_U_n(n, [&](const LabelledBiTypeTree& t) {
      const Factorization direct = psi_inverse(t);
      const Factorization via_lamination = phi_inverse(lamination_of_tree(t), n);
      CHECK(direct == via_lamination);
    });
}

TEST_CASE("psi rejects non-laminar input") {
  // (1 3)(2 4) is not minimal; its arc ranges cross.
  Factorization bad = make_fact(4, {{1, 3}, {2, 4}});
  CHECK_THROWS_AS(psi(bad), std::invalid_argument);
}

TEST_CASE("valid labellings of a shape number k! over the white factorials") {
  // The count drives the factorization sampler: per shape, exactly
  // k! / prod_white (black child count)! labellings are valid.
  for (int n = 2; n <= 6; ++n) {
    enumerate_bitype_trees(n, [&](const PlaneTree& shape) {
      std::vector<std::int32_t> blacks;
      for (std::int32_t v = 0; v < shape.size(); ++v)
        if (shape.height(v) % 2 == 1) blacks.push_back(v);
      std::vector<std::int32_t> perm(blacks.size());
      std::iota(perm.begin(), perm.end(), 1);
      long long valid = 0;
      std::sort(perm.begin(), perm.end());
      do {
        std::vector<std::int32_t> labels(static_cast<std::size_t>(shape.size()), 0);
        for (std::size_t i = 0; i < blacks.size(); ++i)
          labels[static_cast<std::size_t>(blacks[i])] = perm[i];
        if (validate_U_n(LabelledBiTypeTree(shape, labels)).ok) ++valid;
      } while (std::next_permutation(perm.begin(), perm.end()));
      long long expected = 1;
      for (std::size_t i = 2; i <= blacks.size(); ++i) expected *= static_cast<long long>(i);
      for (std::int32_t v = 0; v < shape.size(); ++v)
        if (shape.height(v) % 2 == 0)
          for (std::int32_t i = 2; i <= shape.degree(v); ++i) expected /= i;
      CHECK(valid == expected);
    });
  }
}

TEST_CASE("canonical_relabel yields the valid arrangement and preserves group sets") {
  // Scramble the labels of every corpus tree and relabel: validity is
  // restored while each white vertex keeps the same set of child labels.
  Rng rng(777);
  for (int n = 2; n <= 5; ++n)
    for (const Factorization& f : all_minimal_factorizations(n)) {
      LabelledBiTypeTree t = psi(f);
      LabelledBiTypeTree scrambled = t;
      std::vector<std::int32_t> blacks;
      for (std::int32_t v = 0; v < t.tree.size(); ++v)
        if (t.is_black(v)) blacks.push_back(v);
      std::vector<std::int32_t> perm(blacks.size());
      std::iota(perm.begin(), perm.end(), 1);
      rng.shuffle(perm);
      for (std::size_t i = 0; i < blacks.size(); ++i)
        scrambled.black_label[static_cast<std::size_t>(blacks[i])] = perm[i];
      LabelledBiTypeTree fixed = canonical_relabel(scrambled);
      CHECK(validate_U_n(fixed).ok);
      CHECK(fixed.tree == t.tree);
      for (std::int32_t v = 0; v < t.tree.size(); ++v) {
        if (t.is_black(v)) continue;
        auto kids = t.tree.children(v);
        std::vector<std::int32_t> a, b;
        for (std::int32_t c : kids) {
          a.push_back(scrambled.black_label[static_cast<std::size_t>(c)]);
          b.push_back(fixed.black_label[static_cast<std::size_t>(c)]);
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
      }
    }
}
