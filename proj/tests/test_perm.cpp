#include <catch2/catch_amalgamated.hpp>

#include "minfact/enumerate.hpp"
#include "minfact/perm.hpp"

using namespace minfact;

namespace {

Factorization make_fact(int n, const std::vector<std::vector<int>>& cycles) {
  Factorization f;
  f.n = n;
  for (const auto& c : cycles) f.cycles.emplace_back(c, n);
  return f;
}

const Factorization kFig8 = make_fact(8, {{5, 6, 7, 8}, {2, 3}, {1, 2, 5}, {4, 5}});

}  // namespace

TEST_CASE("cycle construction rejects bad input") {
  CHECK_THROWS_AS(Cycle({3, 2}, 4), std::invalid_argument);
  CHECK_THROWS_AS(Cycle({1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(Cycle({0, 2}, 4), std::invalid_argument);
  CHECK_THROWS_AS(Cycle({2, 2}, 4), std::invalid_argument);
  CHECK_THROWS_AS(Cycle({2, 5}, 4), std::invalid_argument);
}

TEST_CASE("compose applies cycles left to right") {
  CHECK(compose(kFig8) == n_cycle(8));
  CHECK(compose({}, 5) == identity_perm(5));
  CHECK(compose(make_fact(2, {{1, 2}})) == n_cycle(2));

  // Left-to-right order matters: tau_1 tau_2 applies tau_1 first.
  Factorization f = make_fact(3, {{2, 3}, {1, 2}});
  CHECK(compose(f) == n_cycle(3));
  Factorization g = make_fact(3, {{1, 2}, {2, 3}});
  CHECK(compose(g) != n_cycle(3));
}

TEST_CASE("minimality predicate") {
  CHECK(is_minimal_factorization(kFig8));
  CHECK(is_minimal_factorization(make_fact(3, {{1, 2, 3}})));
  CHECK_FALSE(is_minimal_factorization(make_fact(3, {{1, 2}, {1, 2}})));
  CHECK(check_minimal_factorization(make_fact(3, {{1, 2}, {1, 2}}).cycles, 3).reason ==
        "product is not the n-cycle");
  // Defect mismatch.
  CHECK(check_minimal_factorization(make_fact(4, {{1, 2}}).cycles, 4).reason ==
        "total length defect is not n-1");
  // The empty factorization is minimal only for n = 1.
  CHECK(is_minimal_factorization(Factorization{1, {}}));
  CHECK_FALSE(is_minimal_factorization(Factorization{2, {}}));
}

TEST_CASE("transposition slicing") {
  Factorization f = make_fact(5, {{1, 2, 5}});
  Factorization sliced = transposition_slicing(f);
  REQUIRE(sliced.cycles.size() == 2);
  CHECK(sliced.cycles[0].support == std::vector<int>{1, 2});
  CHECK(sliced.cycles[1].support == std::vector<int>{1, 5});

  // A transposition maps to itself.
  Factorization t = make_fact(2, {{1, 2}});
  CHECK(transposition_slicing(t) == t);

  // Full slicing of the 8-cycle example: 7 transpositions, same product.
  Factorization s8 = transposition_slicing(kFig8);
  CHECK(s8.cycles.size() == 7);
  for (const Cycle& c : s8.cycles) CHECK(c.length() == 2);
  CHECK(compose(s8) == compose(kFig8));
  CHECK(is_minimal_factorization(s8));
}

TEST_CASE("enumeration: named counts") {
  ClassSignature all2;
  all2.lengths = {2, 2, 2};
  CHECK(count_minimal_factorizations(4, &all2) == 16);

  // Two-cycle classes of the 5-cycle all count 5^1 = 5. (A class is
  // feasible only when sum(a_i - 1) = n - 1; infeasible classes count 0.)
  for (std::vector<int> lengths : {std::vector<int>{3, 3}, {4, 2}, {2, 4}}) {
    ClassSignature cls;
    cls.lengths = lengths;
    CHECK(count_minimal_factorizations(5, &cls) == 5);
  }
  ClassSignature infeasible;
  infeasible.lengths = {3, 2};
  CHECK(count_minimal_factorizations(5, &infeasible) == 0);

  CHECK(count_minimal_factorizations(3) == 4);
  CHECK(count_minimal_factorizations(1) == 1);
  CHECK(count_minimal_factorizations(2) == 1);
}

TEST_CASE("enumeration bound is enforced") {
  CHECK_THROWS_AS(count_minimal_factorizations(9), std::invalid_argument);
}

TEST_CASE("every enumerated factorization is minimal and unique") {
  for (int n = 1; n <= 5; ++n) {
    auto all = all_minimal_factorizations(n);
    std::set<std::string> seen;
    for (const Factorization& f : all) {
      CHECK(is_minimal_factorization(f));
      std::string key;
      for (const Cycle& c : f.cycles) {
        for (int v : c.support) key += std::to_string(v) + ".";
        key += "|";
      }
      CHECK(seen.insert(key).second);
    }
  }
}

TEST_CASE("class counts are n^(k-1) for every class up to n = 6") {
  auto ipow = [](long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
  };
  for (int n = 2; n <= 6; ++n) {
    long long total = 0;
    for (const ClassSignature& cls : all_class_signatures(n)) {
      const long long cnt = count_minimal_factorizations(n, &cls);
      const long long expected = ipow(n, static_cast<int>(cls.lengths.size()) - 1);
      CHECK(cnt == expected);
      total += cnt;
    }
    CHECK(total == count_minimal_factorizations(n));
  }
}

TEST_CASE("slicing preserves minimality across the n <= 6 corpus") {
  for (int n = 2; n <= 6; ++n) {
    for (const Factorization& f : all_minimal_factorizations(n)) {
      Factorization s = transposition_slicing(f);
      CHECK(static_cast<int>(s.cycles.size()) == n - 1);
      CHECK(is_minimal_factorization(s));
      CHECK(compose(s) == compose(f));
    }
  }
}
