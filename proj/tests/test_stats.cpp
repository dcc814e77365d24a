#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "minfact/rng.hpp"
#include "minfact/stats.hpp"

using namespace minfact;

namespace {

CriticalEquivalent random_critical(Rng& rng) {
  std::vector<double> w;
  const int len = 2 + static_cast<int>(rng.below(6));
  for (int i = 0; i < len; ++i) w.push_back(0.05 + rng.real01());
  return critical_equivalent(WeightSequence::explicit_list(w));
}

}  // namespace

TEST_CASE("closed-form p_nu on the named laws") {
  // Zero variance: never black.
  CHECK(exact_p_nu(critical_equivalent(WeightSequence::delta(2))).value == 0.0);
  // Three-cycles: one half.
  CHECK(std::abs(exact_p_nu(critical_equivalent(WeightSequence::delta(3))).value - 0.5) < 1e-12);
  // Uniform weights: 1 - 1/sqrt(5).
  CHECK(std::abs(exact_p_nu(critical_equivalent(WeightSequence::uniform())).value -
                 (1.0 - 1.0 / std::sqrt(5.0))) < 1e-10);
  // Infinite variance flags and saturates.
  PnuResult pl = exact_p_nu(critical_equivalent(WeightSequence::power_law(1.5)));
  CHECK(pl.infinite_variance);
  CHECK(pl.value == 1.0);
}

TEST_CASE("branching-formula route agrees with the closed form") {
  CHECK(std::abs(p_nu_by_branching_formula(critical_equivalent(WeightSequence::delta(2)), 40)) <
        1e-9);
  CHECK(std::abs(p_nu_by_branching_formula(critical_equivalent(WeightSequence::delta(3)), 40) -
                 0.5) < 1e-9);
  CHECK(std::abs(p_nu_by_branching_formula(critical_equivalent(WeightSequence::uniform()), 60) -
                 (1.0 - 1.0 / std::sqrt(5.0))) < 1e-8);

  Rng rng(808);
  for (int trial = 0; trial < 20; ++trial) {
    CriticalEquivalent ce = random_critical(rng);
    const double closed = exact_p_nu(ce).value;
    const double dp = p_nu_by_branching_formula(ce, 160);
    CHECK(std::abs(closed - dp) < 1e-8);
  }
}

TEST_CASE("branching formula reports an insufficient cutoff") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  CHECK_THROWS_AS(p_nu_by_branching_formula(ce, 6), std::runtime_error);
}

TEST_CASE("cycle count estimator: exact case") {
  // All transpositions: N/n = (n-1)/n with zero spread.
  CriticalEquivalent ce = critical_equivalent(WeightSequence::delta(2));
  TrialReport rep = estimate_cycle_count(ce, 50, 10, 11, 1, 0.03);
  CHECK(rep.pass);
  CHECK(rep.se == 0.0);
  CHECK(std::abs(rep.mean - 49.0 / 50.0) < 1e-12);
}

TEST_CASE("cycle count estimator under three-cycles") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::delta(3));
  TrialReport rep = estimate_cycle_count(ce, 501, 50, 77, 2, 0.03);
  CHECK(std::abs(rep.reference - 0.5) < 1e-12);
  CHECK(rep.pass);
}

TEST_CASE("largest cycle: transpositions and trends") {
  CriticalEquivalent d2 = critical_equivalent(WeightSequence::delta(2));
  BoltzmannSampler s(d2, 40);
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    Factorization f = s.sample(rng);
    int lmax = 0;
    for (const Cycle& c : f.cycles) lmax = std::max(lmax, c.length());
    CHECK(lmax == 2);
  }

  // Finite variance: the ratio l_max / B_n decays with n.
  CriticalEquivalent uni = critical_equivalent(WeightSequence::uniform());
  TrialReport small = estimate_largest_cycle(uni, 200, 60, 909, 2);
  TrialReport large = estimate_largest_cycle(uni, 1600, 60, 909, 2);
  CHECK(large.median < small.median);
}

TEST_CASE("largest cycle is stable under heavy tails") {
  CriticalEquivalent pl = critical_equivalent(WeightSequence::power_law(1.5));
  TrialReport a = estimate_largest_cycle(pl, 300, 50, 123, 2);
  TrialReport b = estimate_largest_cycle(pl, 1200, 50, 123, 2);
  CHECK(a.median > 0.05);
  CHECK(b.median > 0.05);
  const double ratio = a.median / b.median;
  CHECK(ratio > 1.0 / 3.0);
  CHECK(ratio < 3.0);
}

TEST_CASE("black fraction flags sparse data as inconclusive") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  TrialReport rep = estimate_black_fraction(ce, 300, 2, 0.05, 42, 1, 300);
  CHECK(rep.inconclusive);
}

TEST_CASE("black fraction approaches p_nu [slow]") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  TrialReport rep = estimate_black_fraction(ce, 1500, 260, 0.05, 4242, 4, 250);
  INFO(rep.note);
  CHECK_FALSE(rep.inconclusive);
  CHECK(rep.pass);
}

TEST_CASE("monte carlo runs are deterministic under the seed") {
  CriticalEquivalent ce = critical_equivalent(WeightSequence::uniform());
  TrialReport a = estimate_cycle_count(ce, 200, 30, 999, 1, 0.05);
  TrialReport b = estimate_cycle_count(ce, 200, 30, 999, 3, 0.05);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
}

TEST_CASE("counting suite to n = 5") {
  CountingReport rep = counting_suite(5);
  INFO([&] {
    std::string bad;
    for (const CountingRow& r : rep.rows)
      if (!r.ok)
        bad += r.what + " got " + std::to_string(r.got) + " expected " +
               std::to_string(r.expected) + "; ";
    return bad;
  }());
  CHECK(rep.ok);
  // Named rows: 16 transposition factorizations at n = 4, 125 at n = 5
  // for the all-transposition class.
  bool saw16 = false, saw125 = false;
  for (const CountingRow& r : rep.rows) {
    if (r.n == 4 && r.what == "transposition factorizations") saw16 = r.got == 16;
    if (r.n == 5 && r.what == "transposition factorizations") saw125 = r.got == 125;
  }
  CHECK(saw16);
  CHECK(saw125);
}

TEST_CASE("welford merge is exact") {
  Rng rng(1);
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(rng.real01());
  Welford whole, left, right;
  for (int i = 0; i < 1000; ++i) (i < 400 ? left : right).add(xs[static_cast<std::size_t>(i)]);
  for (double x : xs) whole.add(x);
  left.merge(right);
  CHECK(left.n == whole.n);
  CHECK(std::abs(left.mean - whole.mean) < 1e-12);
  CHECK(std::abs(left.variance() - whole.variance()) < 1e-12);
}
