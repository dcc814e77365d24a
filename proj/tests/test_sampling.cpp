#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <string>

#include "minfact/enumerate.hpp"
#include "minfact/sampling.hpp"
#include "minfact/stats.hpp"
#include "oracles.hpp"

using namespace minfact;
using minfact::oracles::exact_btsg_law;
using minfact::oracles::fact_key;
using minfact::oracles::tree_key;
using minfact::oracles::tv_distance;

TEST_CASE("conditioned tree sampler basics") {
  std::vector<double> mu = {0.5, 0.25, 0.125, 0.0625, 0.03125};
  Rng rng(1);
  CHECK(sample_gw_conditioned(mu, 1, rng).size() == 1);
  for (int n : {2, 5, 40, 80}) {
    PlaneTree t = sample_gw_conditioned(mu, n, rng);
    CHECK(t.size() == n);
  }
}

TEST_CASE("conditioned sampler respects support periodicity") {
  // Offspring supported on {0, 2}: only odd sizes are reachable.
  std::vector<double> mu = {0.5, 0.0, 0.5};
  Rng rng(2);
  CHECK_NOTHROW(sample_gw_conditioned(mu, 5, rng));
  CHECK_THROWS_AS(sample_gw_conditioned(mu, 4, rng), std::invalid_argument);
}

TEST_CASE("conditioned law matches exact enumeration at n = 4 [slow]") {
  // Geometric(1/2) offspring makes the five 4-vertex trees equally likely.
  std::vector<double> mu(24);
  double p = 0.5;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] = p;
    p *= 0.5;
  }
  const int trials = 100000;
  std::map<std::string, double> empirical;
  Rng rng(20260810);
  for (int i = 0; i < trials; ++i) {
    PlaneTree t = sample_gw_conditioned(mu, 4, rng);
    std::string key;
    for (std::int32_t d : t.degrees()) key += std::to_string(d);
    empirical[key] += 1.0 / trials;
  }
  REQUIRE(empirical.size() == 5);
  std::map<std::string, double> exact;
  for (const auto& [k, v] : empirical) exact[k] = 0.2;
  CHECK(tv_distance(empirical, exact) <= 0.02);
}

TEST_CASE("mean height grows like sqrt(n) for finite variance (diagnostic)") {
  std::vector<double> mu(40);
  double p = 0.5;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] = p;
    p *= 0.5;
  }
  Rng rng(9);
  auto mean_height = [&](int n) {
    double acc = 0;
    const int reps = 60;
    for (int i = 0; i < reps; ++i) acc += sample_gw_conditioned(mu, n, rng).tree_height();
    return acc / reps;
  };
  const double h100 = mean_height(100);
  const double h400 = mean_height(400);
  // sqrt scaling would double the height; accept a generous band.
  CHECK(h400 / h100 > 1.3);
  CHECK(h400 / h100 < 3.2);
}

TEST_CASE("decoration sampler: forced cases") {
  // Three-cycle law: every white vertex's grandchildren come in pairs, one
  // black child per pair.
  CriticalEquivalent ce = critical_equivalent(WeightSequence::delta(3));
  DecorationSampler ds(ce);
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    auto blocks = ds.sample_blocks(2, rng);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0] == 2);
    auto blocks4 = ds.sample_blocks(4, rng);
    REQUIRE(blocks4.size() == 2);
    CHECK(blocks4[0] == 2);
    CHECK(blocks4[1] == 2);
  }
}

TEST_CASE("btsg sampler structural invariants") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  BtsgSampler sampler(ce, 200);
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    LabelledBiTypeTree t = sampler.sample(200, rng);
    CHECK(t.n_white() == 200);
    CHECK(t.structure_ok());
    // k = 0 grandchildren forces 0 black children: leaves of the reduced
    // tree are leaves of t.
    std::vector<std::int32_t> map;
    PlaneTree reduced = white_reduced(t, &map);
    for (std::int32_t v = 0; v < reduced.size(); ++v)
      if (reduced.degree(v) == 0)
        CHECK(t.tree.degree(map[static_cast<std::size_t>(v)]) == 0);
  }
}

TEST_CASE("btsg law matches exhaustive weights at n = 3 [slow]") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  const int trials = 100000;
  BtsgSampler sampler(ce, 3);
  std::map<std::string, double> empirical;
  for (int i = 0; i < trials; ++i) {
    Rng rng(Rng::mix(31337, static_cast<std::uint64_t>(i)));
    empirical[tree_key(sampler.sample(3, rng))] += 1.0 / trials;
  }
  std::map<std::string, double> exact = exact_btsg_law(WeightSequence::uniform(), 3);
  // Atoms: shape A (one black, two whites below it), chain, two-black fork.
  CHECK(exact.size() == 5);
  CHECK(tv_distance(empirical, exact) <= 0.02);
}

TEST_CASE("factorization sampler at n = 2 is deterministic") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  Rng rng(5);
  Factorization f = sample_minimal_factorization(ce, 2, rng);
  REQUIRE(f.cycles.size() == 1);
  CHECK(f.cycles[0].support == std::vector<int>{1, 2});
}

TEST_CASE("factorization sampler matches the weighted law at n = 3 and 4 [slow]") {
  // Uniform weights put equal mass on every element of the set.
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  for (int n : {3, 4}) {
    BoltzmannSampler sampler(ce, n);
    const int trials = 100000;
    std::map<std::string, double> empirical;
    for (int i = 0; i < trials; ++i) {
      Rng rng(Rng::mix(777, static_cast<std::uint64_t>(i) * 7 + static_cast<std::uint64_t>(n)));
      empirical[fact_key(sampler.sample(rng))] += 1.0 / trials;
    }
    std::map<std::string, double> exact;
    const auto all = all_minimal_factorizations(n);
    for (const Factorization& f : all)
      exact[fact_key(f)] = 1.0 / static_cast<double>(all.size());
    REQUIRE(exact.size() == (n == 3 ? 4 : 25));
    CHECK(tv_distance(empirical, exact) <= 0.02);
  }
}

TEST_CASE("cycle count of the sampler matches exact enumeration at n = 6") {
  // Exhaustive mean of N(f) over the 2401 elements is 10633/2401.
  const double exact_mean = 10633.0 / 2401.0;
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  BoltzmannSampler sampler(ce, 6);
  const int trials = 40000;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < trials; ++i) {
    Rng rng(Rng::mix(2024, static_cast<std::uint64_t>(i)));
    const double k = static_cast<double>(sampler.sample(rng).k());
    acc += k;
    acc2 += k * k;
  }
  const double mean = acc / trials;
  const double se = std::sqrt((acc2 / trials - mean * mean) / trials);
  CHECK(std::abs(mean - exact_mean) <= 4 * se + 1e-3);
}

TEST_CASE("every sampled factorization is minimal") {
  const std::vector<WeightSequence> models = {
      WeightSequence::uniform(), WeightSequence::delta(3), WeightSequence::power_law(1.5)};
  for (const WeightSequence& w : models) {
    CriticalEquivalent ce = critical_equivalent(w);
    // The three-cycle model requires odd n.
    const int n = w.kind == WeightKind::Delta ? 61 : 60;
    BoltzmannSampler sampler(ce, n);
    for (int rep = 0; rep < 10; ++rep) {
      Rng rng(Rng::mix(42, static_cast<std::uint64_t>(rep)));
      Factorization f = sampler.sample(rng);
      CHECK(is_minimal_factorization(f));
    }
  }
}

TEST_CASE("transposition weights always give n-1 transpositions") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::delta(2));
  BoltzmannSampler sampler(ce, 24);
  Rng rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    Factorization f = sampler.sample(rng);
    CHECK(f.k() == 23);
    for (const Cycle& c : f.cycles) CHECK(c.length() == 2);
  }
}

TEST_CASE("tilting invariance") {
  // w and w^(s) have the same critical equivalent and the same exact
  // weights up to the global factor s^{n-1}.
  WeightSequence base = WeightSequence::explicit_list({1.0, 1.0, 1.0});
  const double sprime = 0.5;
  WeightSequence tilted =
      WeightSequence::explicit_list({1.0 * sprime, 1.0 * sprime * sprime,
                                     1.0 * sprime * sprime * sprime});
  CriticalEquivalent ce_base = critical_equivalent(base);
  CriticalEquivalent ce_tilted = critical_equivalent(tilted);
  CHECK(std::abs(ce_base.s - ce_tilted.s * sprime) < 1e-10);
  for (long long i = 0; i <= 8; ++i)
    CHECK(std::abs(ce_base.nu(i) - ce_tilted.nu(i)) < 1e-10);

  const int n = 4;
  double ratio = 0;
  bool first = true;
  for (const Factorization& f : all_minimal_factorizations(n)) {
    double wb = 1, wt = 1;
    for (const Cycle& c : f.cycles) {
      wb *= base.at(c.length() - 1);
      wt *= tilted.at(c.length() - 1);
    }
    if (first) {
      ratio = wt / wb;
      first = false;
    }
    CHECK(std::abs(wt / wb - ratio) < 1e-12);
  }
  CHECK(std::abs(ratio - std::pow(sprime, n - 1)) < 1e-12);
}

TEST_CASE("shuffle preserves validity-free invariants") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  BtsgSampler sampler(ce, 30);
  Rng rng(2718);
  LabelledBiTypeTree t = sampler.sample(30, rng);
  for (long long K : {0LL, 3LL, -1LL}) {
    LabelledBiTypeTree s = shuffle_K(t, K, rng);
    CHECK(s.structure_ok());
    CHECK(s.n_white() == t.n_white());
    CHECK(s.n_black() == t.n_black());
    // The unlabelled degree multiset is untouched.
    std::vector<std::int32_t> a = t.tree.degrees(), b = s.tree.degrees();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
  // K = 0 on a tree where every white vertex has at most one black child
  // is the identity.
  PlaneTree chain(std::vector<std::int32_t>{1, 1, 1, 1, 0});
  LabelledBiTypeTree c(chain, {0, 2, 0, 1, 0});
  Rng rng2(1);
  CHECK(shuffle_K(c, 0, rng2) == c);
}

TEST_CASE("shuffled coding trees keep the tree law for fixed-length cycles [slow]") {
  // With single-length weights every factorization has the same number of
  // cycles, and the coding tree of the weighted factorization is exactly
  // the uniformly labelled simply generated tree; the shuffle preserves
  // that law for every K.
  CriticalEquivalent ce = critical_equivalent(WeightSequence::delta(2));
  BoltzmannSampler sampler(ce, 4);
  std::map<std::string, double> exact = exact_btsg_law(WeightSequence::delta(2), 4);
  const int trials = 60000;
  for (long long K : {0LL, 1LL, -1LL}) {
    std::map<std::string, double> empirical;
    for (int i = 0; i < trials; ++i) {
      Rng rng(Rng::mix(1000 + static_cast<std::uint64_t>(K + 5), static_cast<std::uint64_t>(i)));
      LabelledBiTypeTree t = psi(sampler.sample(rng));
      empirical[tree_key(shuffle_K(t, K, rng))] += 1.0 / trials;
    }
    CHECK(tv_distance(empirical, exact) <= 0.02);
  }
}

TEST_CASE("shuffle leaves labels uniform given the shape [slow]") {
  // For general weights the cycle count varies and the coding-tree shape
  // law is k!-tilted against the simply generated one, so the shuffled law
  // is compared against its own shape marginal with uniform labels.
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  BoltzmannSampler sampler(ce, 4);
  const int trials = 80000;
  for (long long K : {0LL, 2LL, -1LL}) {
    std::map<std::string, double> empirical;
    std::map<std::string, double> shape_mass;
    std::map<std::string, std::string> shape_of;
    std::map<std::string, double> shape_labellings;
    for (int i = 0; i < trials; ++i) {
      Rng rng(Rng::mix(5000 + static_cast<std::uint64_t>(K + 5), static_cast<std::uint64_t>(i)));
      LabelledBiTypeTree t = shuffle_K(psi(sampler.sample(rng)), K, rng);
      const std::string full = tree_key(t);
      std::string shape;
      for (std::int32_t v = 0; v < t.tree.size(); ++v)
        shape += std::to_string(t.tree.degree(v)) + ".";
      empirical[full] += 1.0 / trials;
      shape_mass[shape] += 1.0 / trials;
      shape_of[full] = shape;
      double fact = 1;
      for (int f2 = 2; f2 <= t.n_black(); ++f2) fact *= f2;
      shape_labellings[shape] = fact;
    }
    std::map<std::string, double> reference;
    for (const auto& [key, mass] : empirical)
      reference[key] = shape_mass[shape_of[key]] / shape_labellings[shape_of[key]];
    CHECK(tv_distance(empirical, reference) <= 0.02);
  }
}

TEST_CASE("black vertex share concentrates near 1 - nu0") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  TrialReport rep = estimate_cycle_count(ce, 500, 60, 606, 2, 0.03);
  CHECK(rep.pass);
}
