#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "minfact/enumerate.hpp"
#include "minfact/rng.hpp"
#include "minfact/sampling.hpp"
#include "minfact/tree.hpp"
#include "minfact/weights.hpp"

namespace minfact {

// --------------------------------------------------------------------------
// Trial bookkeeping
// --------------------------------------------------------------------------

struct Welford {
  long long n = 0;
  double mean = 0, m2 = 0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const long long t = n + o.n;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / static_cast<double>(t);
    mean += d * static_cast<double>(o.n) / static_cast<double>(t);
    n = t;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double se() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

struct TrialReport {
  std::string estimator;
  int n = 0;
  long long trials = 0;
  double mean = 0;
  double se = 0;
  double median = 0;
  double reference = 0;
  double tolerance = 0;
  bool pass = false;
  bool inconclusive = false;
  std::string note;

  void judge() { pass = std::abs(mean - reference) <= std::max(tolerance, 3.0 * se); }
};

// Deterministic trial runner: per-trial substreams, one context per worker
// thread, results written by trial index so the thread count never changes
// the outcome.
template <class MakeCtx, class Trial>
std::vector<double> run_trials(long long trials, std::uint64_t seed, int threads,
                               MakeCtx&& make_ctx, Trial&& trial) {
  std::vector<double> out(static_cast<std::size_t>(trials), 0.0);
  threads = std::max(1, threads);
  if (threads == 1) {
    auto ctx = make_ctx();
    for (long long i = 0; i < trials; ++i) {
      Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(i)));
      out[static_cast<std::size_t>(i)] = trial(ctx, i, rng);
    }
    return out;
  }
  std::vector<std::thread> pool;
  const long long chunk = (trials + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long long lo = t * chunk, hi = std::min<long long>(trials, (t + 1) * chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi]() {
      auto ctx = make_ctx();
      for (long long i = lo; i < hi; ++i) {
        Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(i)));
        out[static_cast<std::size_t>(i)] = trial(ctx, i, rng);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// --------------------------------------------------------------------------
// The black-face probability p_nu
// --------------------------------------------------------------------------

// Closed form sigma^2 / (sigma^2 + 1); infinite variance colors every
// macroscopic face, reported as 1 with the inconclusive-free flag.
struct PnuResult {
  double value = 0;
  bool infinite_variance = false;
};

inline PnuResult exact_p_nu(const CriticalEquivalent& ce) {
  if (!ce.finite_variance) return {1.0, true};
  return {ce.sigma2 / (ce.sigma2 + 1.0), false};
}

// Independent route: the composition sum
//   p = (1/sigma_mu^2) sum_j mu°_j sum_{a_1..a_j} prod mu•_{a_i} (sum a_i(a_i-1))
// evaluated by dynamic programming over block counts and totals, with
// sigma_mu^2 taken numerically from the reduced offspring masses.
inline double p_nu_by_branching_formula(const CriticalEquivalent& ce, int cutoff) {
  if (!ce.finite_variance)
    throw std::invalid_argument("p_nu_by_branching_formula: needs finite variance");
  DecoratedPair pair = decorated_pair(ce);

  // sigma_mu^2 from the reduced offspring law itself.
  std::vector<double> mu = reduced_offspring_auto(ce, 1e-13, 1 << 22);
  double mu_mean = 0, mu_m2 = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu_mean += static_cast<double>(i) * mu[i];
    mu_m2 += static_cast<double>(i) * static_cast<double>(i) * mu[i];
  }
  const double sigma_mu2 = mu_m2 - mu_mean * mu_mean;

  // f[j][k] = P(j blocks sum to k); T[j][k] adds the weight sum a(a-1).
  const int jmax = std::min(cutoff, 400);
  std::vector<double> bullet(static_cast<std::size_t>(cutoff) + 1, 0.0);
  for (int a = 1; a <= cutoff; ++a) bullet[static_cast<std::size_t>(a)] = pair.mu_bullet(a);
  std::vector<std::vector<double>> f(static_cast<std::size_t>(jmax) + 1,
                                     std::vector<double>(static_cast<std::size_t>(cutoff) + 1, 0.0));
  std::vector<std::vector<double>> T = f;
  f[0][0] = 1.0;
  for (int j = 1; j <= jmax; ++j)
    for (int k = j; k <= cutoff; ++k) {
      double facc = 0, tacc = 0;
      for (int a = 1; a <= k - j + 1; ++a) {
        const double w = bullet[static_cast<std::size_t>(a)];
        if (w == 0) continue;
        facc += w * f[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - a)];
        tacc += w * (T[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - a)] +
                     static_cast<double>(a) * (a - 1) *
                         f[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - a)]);
      }
      f[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = facc;
      T[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = tacc;
    }

  double total = 0, mass = 0, last_shell = 0;
  for (int k = 1; k <= cutoff; ++k) {
    double shell = 0, shell_mass = 0;
    for (int j = 1; j <= std::min(jmax, k); ++j) {
      const double mc = pair.mu_circ(j);
      shell += mc * T[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      shell_mass += mc * f[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
    total += shell;
    mass += shell_mass;
    last_shell = shell;
  }
  // Tail control: the final shell must be negligible against the total.
  if (total > 0 && last_shell > 1e-9 * total) {
    std::ostringstream os;
    os << "p_nu_by_branching_formula: cutoff " << cutoff
       << " too small (last shell " << last_shell << " of total " << total << ")";
    throw std::runtime_error(os.str());
  }
  (void)mass;
  return total / sigma_mu2;
}

// --------------------------------------------------------------------------
// Monte Carlo estimators
// --------------------------------------------------------------------------

// Mean of N(f)/n against 1 - nu_0. The cycle count of the factorization is
// the black vertex count of its tree, so the tree sampler suffices.
inline TrialReport estimate_cycle_count(const CriticalEquivalent& ce, int n, long long trials,
                                        std::uint64_t seed, int threads = 1,
                                        double tolerance = 0.02) {
  std::vector<double> vals = run_trials(
      trials, seed, threads, [&]() { return BtsgSampler(ce, n); },
      [&](BtsgSampler& sampler, long long, Rng& rng) {
        LabelledBiTypeTree t = sampler.sample(n, rng);
        return static_cast<double>(t.n_black()) / static_cast<double>(n);
      });
  Welford w;
  for (double v : vals) w.add(v);
  TrialReport rep;
  rep.estimator = "cycle-count";
  rep.n = n;
  rep.trials = trials;
  rep.mean = w.mean;
  rep.se = w.se();
  rep.median = median_of(vals);
  rep.reference = 1.0 - ce.nu0;
  rep.tolerance = tolerance;
  rep.judge();
  return rep;
}

// Largest cycle length, normalized by B_n. The largest cycle is the top
// black degree of the tree.
inline TrialReport estimate_largest_cycle(const CriticalEquivalent& ce, int n, long long trials,
                                          std::uint64_t seed, int threads = 1) {
  const double Bn = scaling_constants(ce, static_cast<double>(n)).B;
  std::vector<double> vals = run_trials(
      trials, seed, threads, [&]() { return BtsgSampler(ce, n); },
      [&](BtsgSampler& sampler, long long, Rng& rng) {
        LabelledBiTypeTree t = sampler.sample(n, rng);
        std::int32_t best = 0;
        for (std::int32_t v = 0; v < t.tree.size(); ++v)
          if (t.is_black(v)) best = std::max(best, t.tree.degree(v));
        return static_cast<double>(best + 1) / Bn;  // degree + parent edge
      });
  Welford w;
  for (double v : vals) w.add(v);
  TrialReport rep;
  rep.estimator = "largest-cycle";
  rep.n = n;
  rep.trials = trials;
  rep.mean = w.mean;
  rep.se = w.se();
  rep.median = median_of(vals);
  rep.reference = 1.0;  // scale-free: consumers compare across n
  rep.tolerance = 0;
  rep.pass = true;
  rep.note = "ratio l_max / B_n; judged as a trend across an n-grid";
  return rep;
}

// Fraction of black large faces against p_nu. A large face is observed at
// each white (eps n)-node u of the reduced tree; it is black exactly when
// the two grandchildren of u carrying the largest reduced subtrees share
// their black parent.
inline TrialReport estimate_black_fraction(const CriticalEquivalent& ce, int n, long long trials,
                                           double eps_fraction, std::uint64_t seed,
                                           int threads = 1, long long min_faces = 300) {
  const double pnu = exact_p_nu(ce).value;
  std::vector<double> blacks(static_cast<std::size_t>(trials)),
      totals(static_cast<std::size_t>(trials));
  run_trials(
      trials, seed, threads, [&]() { return BtsgSampler(ce, n); },
      [&](BtsgSampler& sampler, long long i, Rng& rng) {
        LabelledBiTypeTree t = sampler.sample(n, rng);
        std::vector<std::int32_t> white_of_reduced;
        PlaneTree reduced = white_reduced(t, &white_of_reduced);
        const std::int64_t a = static_cast<std::int64_t>(std::ceil(eps_fraction * n));
        long long black = 0, total = 0;
        for (std::int32_t v = 0; v < reduced.size(); ++v) {
          if (!is_a_node(reduced, v, a)) continue;
          std::int32_t b1 = -1, b2 = -1;
          std::int32_t c = v + 1;
          for (std::int32_t j = 0; j < reduced.degree(v); ++j) {
            const std::int32_t s = reduced.subtree_size(c);
            if (b1 < 0 || s > reduced.subtree_size(b1)) {
              b2 = b1;
              b1 = c;
            } else if (b2 < 0 || s > reduced.subtree_size(b2)) {
              b2 = c;
            }
            c += reduced.subtree_size(c);
          }
          if (b2 < 0) continue;
          const std::int32_t w1 = white_of_reduced[static_cast<std::size_t>(b1)];
          const std::int32_t w2 = white_of_reduced[static_cast<std::size_t>(b2)];
          ++total;
          if (t.tree.parent(w1) == t.tree.parent(w2)) ++black;
        }
        blacks[static_cast<std::size_t>(i)] = static_cast<double>(black);
        totals[static_cast<std::size_t>(i)] = static_cast<double>(total);
        return 0.0;
      });
  double black = 0, total = 0;
  for (std::size_t i = 0; i < blacks.size(); ++i) {
    black += blacks[i];
    total += totals[i];
  }
  TrialReport rep;
  rep.estimator = "black-fraction";
  rep.n = n;
  rep.trials = trials;
  rep.reference = pnu;
  rep.tolerance = 0;
  if (total < static_cast<double>(min_faces)) {
    rep.inconclusive = true;
    rep.note = "too few large faces (" + std::to_string(static_cast<long long>(total)) + ")";
    return rep;
  }
  rep.mean = black / total;
  rep.se = std::sqrt(std::max(rep.mean * (1 - rep.mean), 1e-12) / total);
  rep.note = "faces observed: " + std::to_string(static_cast<long long>(total));
  rep.judge();
  return rep;
}

// --------------------------------------------------------------------------
// Exact counting identities
// --------------------------------------------------------------------------

struct CountingRow {
  int n = 0;
  std::string what;
  long long got = 0;
  long long expected = 0;
  bool ok = false;
};

struct CountingReport {
  std::vector<CountingRow> rows;
  bool ok = true;

  void add(int n, std::string what, long long got, long long expected) {
    rows.push_back({n, std::move(what), got, expected, got == expected});
    ok = ok && got == expected;
  }
};

inline long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Transposition counts n^{n-2}, per-class counts n^{k-1}, and equality of
// the two enumeration sides of the bijection.
inline CountingReport counting_suite(int n_max) {
  if (n_max > kEnumerationBound)
    throw std::invalid_argument("counting_suite: n_max exceeds the enumeration bound");
  CountingReport rep;
  for (int n = 2; n <= n_max; ++n) {
    ClassSignature all2;
    all2.lengths.assign(static_cast<std::size_t>(n - 1), 2);
    rep.add(n, "transposition factorizations", count_minimal_factorizations(n, &all2),
            ipow(n, n - 2));

    long long total = 0;
    for (const ClassSignature& cls : all_class_signatures(n)) {
      const long long cnt = count_minimal_factorizations(n, &cls);
      total += cnt;
      std::string what = "class (";
      for (std::size_t i = 0; i < cls.lengths.size(); ++i)
        what += (i ? "," : "") + std::to_string(cls.lengths[i]);
      what += ")";
      rep.add(n, what, cnt, ipow(n, static_cast<int>(cls.lengths.size()) - 1));
    }
    rep.add(n, "all factorizations", count_minimal_factorizations(n), total);

    long long u_count = 0;
    enumerate_U_n(n, [&](const LabelledBiTypeTree&) { ++u_count; });
    rep.add(n, "labelled trees vs factorizations", u_count, total);
  }
  return rep;
}

}  // namespace minfact
