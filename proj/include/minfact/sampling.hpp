#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "minfact/bijection.hpp"
#include "minfact/rng.hpp"
#include "minfact/tree.hpp"
#include "minfact/weights.hpp"

namespace minfact {

namespace sampling_detail {

inline long long support_gcd(const std::vector<double>& mu) {
  long long g = 0;
  for (std::size_t i = 1; i < mu.size(); ++i)
    if (mu[i] > 0) g = std::gcd(g, static_cast<long long>(i));
  return g;
}

// Rotation of the cycle lemma: increments x_i with sum n-1 admit exactly
// one cyclic shift whose Lukasiewicz walk stays nonnegative before the
// end; it starts right after the first minimum of the prefix walk.
inline void rotate_to_valid(std::vector<std::int32_t>& x) {
  const std::size_t n = x.size();
  long long walk = 0, best = 0;
  std::size_t cut = 0;
  for (std::size_t i = 0; i < n; ++i) {
    walk += x[i] - 1;
    if (walk < best) {
      best = walk;
      cut = i + 1;
    }
  }
  if (cut != 0 && cut != n)
    std::rotate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(cut), x.end());
}

}  // namespace sampling_detail

// Exact sample of a mu-Galton-Watson tree conditioned to n vertices:
// n i.i.d. offspring draws conditioned to sum to n-1, then the cycle-lemma
// rotation. Rejection for large n; a DP table below 64 vertices where
// rejection is wasteful. Conditioning on the sum makes truncating mu at
// n-1 entries harmless.
inline PlaneTree sample_gw_conditioned(const std::vector<double>& mu, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_gw_conditioned: n must be >= 1");
  if (mu.empty() || mu[0] <= 0)
    throw std::invalid_argument("sample_gw_conditioned: mu_0 must be positive");
  if (n == 1) return PlaneTree(std::vector<std::int32_t>{0});

  const long long g = sampling_detail::support_gcd(mu);
  if (g == 0 || (n - 1) % g != 0)
    throw std::invalid_argument("sample_gw_conditioned: n is not reachable (support periodicity)");

  const std::size_t cap = std::min<std::size_t>(mu.size(), static_cast<std::size_t>(n));
  std::vector<double> trunc(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(cap));
  std::vector<std::int32_t> x(static_cast<std::size_t>(n));

  if (n <= 64) {
    const int target = n - 1;
    std::vector<std::vector<double>> P(
        static_cast<std::size_t>(n + 1),
        std::vector<double>(static_cast<std::size_t>(target + 1), 0.0));
    P[0][0] = 1.0;
    for (int j = 1; j <= n; ++j)
      for (int m = 0; m <= target; ++m) {
        double acc = 0;
        const int amax = std::min<int>(m, static_cast<int>(trunc.size()) - 1);
        for (int a = 0; a <= amax; ++a)
          acc += trunc[static_cast<std::size_t>(a)] *
                 P[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(m - a)];
        P[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = acc;
      }
    if (P[static_cast<std::size_t>(n)][static_cast<std::size_t>(target)] <= 0)
      throw std::invalid_argument("sample_gw_conditioned: target sum has zero probability");
    int rem = target;
    for (int j = 0; j < n; ++j) {
      const int left = n - 1 - j;
      double u = rng.real01() * P[static_cast<std::size_t>(left + 1)][static_cast<std::size_t>(rem)];
      const int amax = std::min<int>(rem, static_cast<int>(trunc.size()) - 1);
      int a = 0;
      for (; a < amax; ++a) {
        const double m = trunc[static_cast<std::size_t>(a)] *
                         P[static_cast<std::size_t>(left)][static_cast<std::size_t>(rem - a)];
        if (u < m) break;
        u -= m;
      }
      x[static_cast<std::size_t>(j)] = a;
      rem -= a;
    }
  } else {
    AliasTable alias(trunc);
    const long long op_budget = 400000000;
    long long ops = 0;
    for (;;) {
      long long sum = 0;
      int i = 0;
      for (; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(alias.sample(rng));
        sum += x[static_cast<std::size_t>(i)];
        if (sum > n - 1) break;  // row already rejected; skip the rest
      }
      ops += i + 1;
      if (i == n && sum == n - 1) break;
      if (ops > op_budget)
        throw std::runtime_error("sample_gw_conditioned: rejection budget exceeded");
    }
  }

  sampling_detail::rotate_to_valid(x);
  return PlaneTree(std::move(x));
}

// --------------------------------------------------------------------------
// Decoration of the white reduced tree
// --------------------------------------------------------------------------

// Conditional block structure at a white vertex: given k white
// grandchildren, the number of black children is J and their white-child
// counts (a_1..a_J), with P(J = j, blocks = a) = mu°_j prod_i mu•_{a_i} / mu_k.
// f[j][k] = P(a_1 + ... + a_j = k) tables are cached and grown on demand;
// J is capped where the Poisson factor mu°_j underflows doubles, which
// discards mass below 1e-300.
class DecorationSampler {
 public:
  explicit DecorationSampler(const CriticalEquivalent& ce) : pair_(decorated_pair(ce)) {}

  // Sample (a_1, ..., a_j) summing to k >= 1.
  std::vector<std::int32_t> sample_blocks(int k, Rng& rng) {
    ensure(k);
    const int jcap = std::min<int>(k, static_cast<int>(circ_.size()) - 1);
    double norm = 0;
    for (int j = 1; j <= jcap; ++j)
      norm += circ_[static_cast<std::size_t>(j)] *
              f_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    if (norm <= 0) throw std::runtime_error("DecorationSampler: zero mass (unreachable k)");
    double u = rng.real01() * norm;
    int j = 1;
    for (; j < jcap; ++j) {
      const double m = circ_[static_cast<std::size_t>(j)] *
                       f_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      if (u < m) break;
      u -= m;
    }

    std::vector<std::int32_t> blocks(static_cast<std::size_t>(j));
    int rem = k;
    for (int b = 0; b < j; ++b) {
      const int left = j - b - 1;
      if (left == 0) {
        blocks[static_cast<std::size_t>(b)] = rem;
        break;
      }
      double v = rng.real01() *
                 f_[static_cast<std::size_t>(left + 1)][static_cast<std::size_t>(rem)];
      const int amax = rem - left;  // later blocks need >= 1 each
      int a = 1;
      for (; a < amax; ++a) {
        const double m = bullet(a) *
                         f_[static_cast<std::size_t>(left)][static_cast<std::size_t>(rem - a)];
        if (v < m) break;
        v -= m;
      }
      blocks[static_cast<std::size_t>(b)] = a;
      rem -= a;
    }
    return blocks;
  }

  const DecoratedPair& pair() const { return pair_; }

 private:
  double bullet(int a) {
    if (a >= static_cast<int>(bullet_.size())) {
      const std::size_t old = bullet_.size();
      bullet_.resize(static_cast<std::size_t>(a) + 1);
      for (std::size_t i = old; i < bullet_.size(); ++i)
        bullet_[i] = pair_.mu_bullet(static_cast<long long>(i));
    }
    return bullet_[static_cast<std::size_t>(a)];
  }

  void ensure(int k) {
    if (k <= built_k_) return;
    if (circ_.empty()) {
      const double lam = 1.0 - pair_.nu0;
      double p = std::exp(-lam);
      circ_.push_back(p);
      for (int j = 1; j <= 700; ++j) {
        p *= lam / j;
        if (p < 1e-300 && j > 2) break;
        circ_.push_back(p);
      }
    }
    bullet(k);
    const int jmax = static_cast<int>(circ_.size()) - 1;
    f_.resize(static_cast<std::size_t>(jmax) + 1);
    for (int j = 0; j <= jmax; ++j)
      f_[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(k) + 1, 0.0);
    if (built_k_ < 0) {
      f_[0][0] = 1.0;
      built_k_ = 0;
    }
    for (int kk = built_k_ + 1; kk <= k; ++kk)
      for (int j = 1; j <= std::min(jmax, kk); ++j) {
        double acc = 0;
        for (int a = 1; a <= kk - j + 1; ++a)
          acc += bullet(a) *
                 f_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(kk - a)];
        f_[static_cast<std::size_t>(j)][static_cast<std::size_t>(kk)] = acc;
      }
    built_k_ = k;
  }

  DecoratedPair pair_;
  std::vector<double> circ_;
  std::vector<double> bullet_;
  std::vector<std::vector<double>> f_;
  int built_k_ = -1;
};

// --------------------------------------------------------------------------
// Bi-type simply generated trees and the factorization sampler
// --------------------------------------------------------------------------

// Holds the offspring table and decoration caches for repeated sampling at
// a fixed weight model. Single-threaded warm-up; afterwards distinct Rng
// streams can drive distinct instances concurrently.
class BtsgSampler {
 public:
  BtsgSampler(const CriticalEquivalent& ce, int n_max)
      : ce_(ce), deco_(ce), mu_(reduced_offspring(ce, std::max<long long>(2, n_max))) {}

  const std::vector<double>& offspring() const { return mu_; }
  const CriticalEquivalent& law() const { return ce_; }

  // Exact sample with n white vertices: (1) white reduced tree, (2) block
  // decomposition of each white vertex's grandchildren, (3) black layer
  // attached, (4) uniform black labels.
  LabelledBiTypeTree sample(int n, Rng& rng) {
    PlaneTree reduced = sample_gw_conditioned(mu_, n, rng);

    std::vector<std::int32_t> deg;
    deg.reserve(static_cast<std::size_t>(2 * n));
    struct Frame {
      std::int32_t first;  // first reduced vertex of the frame
      std::int32_t block;  // -1: white vertex; >= 0: black with that many whites
    };
    std::vector<Frame> stack;
    stack.push_back({0, -1});
    while (!stack.empty()) {
      Frame fr = stack.back();
      stack.pop_back();
      if (fr.block < 0) {
        const std::int32_t v = fr.first;
        const int k = reduced.degree(v);
        std::vector<std::int32_t> blocks;
        if (k > 0) blocks = deco_.sample_blocks(k, rng);
        deg.push_back(static_cast<std::int32_t>(blocks.size()));
        std::int32_t c = v + 1;
        std::vector<Frame> black_frames;
        black_frames.reserve(blocks.size());
        for (std::int32_t b : blocks) {
          black_frames.push_back({c, b});
          for (std::int32_t i = 0; i < b; ++i) c += reduced.subtree_size(c);
        }
        for (auto it = black_frames.rbegin(); it != black_frames.rend(); ++it)
          stack.push_back(*it);
      } else {
        deg.push_back(fr.block);
        std::int32_t c = fr.first;
        std::vector<std::int32_t> whites;
        whites.reserve(static_cast<std::size_t>(fr.block));
        for (std::int32_t i = 0; i < fr.block; ++i) {
          whites.push_back(c);
          c += reduced.subtree_size(c);
        }
        for (auto it = whites.rbegin(); it != whites.rend(); ++it)
          stack.push_back({*it, -1});
      }
    }

    PlaneTree tree(std::move(deg));
    std::vector<std::int32_t> blacks;
    for (std::int32_t v = 0; v < tree.size(); ++v)
      if (tree.height(v) % 2 == 1) blacks.push_back(v);
    std::vector<std::int32_t> perm(blacks.size());
    std::iota(perm.begin(), perm.end(), 1);
    rng.shuffle(perm);
    std::vector<std::int32_t> labels(static_cast<std::size_t>(tree.size()), 0);
    for (std::size_t i = 0; i < blacks.size(); ++i)
      labels[static_cast<std::size_t>(blacks[i])] = perm[i];
    return LabelledBiTypeTree(std::move(tree), std::move(labels));
  }

 private:
  CriticalEquivalent ce_;
  DecorationSampler deco_;
  std::vector<double> mu_;
};

inline LabelledBiTypeTree sample_btsg(const CriticalEquivalent& ce, int n, Rng& rng) {
  BtsgSampler s(ce, n);
  return s.sample(n, rng);
}

// --------------------------------------------------------------------------
// Exact weighted factorization sampler
// --------------------------------------------------------------------------

// Draws f with probability proportional to prod_i w_{l(tau_i)-1} exactly.
//
// The tree pushforward of this law is NOT the plain bi-type tree law: with
// #valid labellings of a shape equal to k!/prod_white (child count)!, the
// shape marginal carries an extra k! against the simply generated weights
// (checked exhaustively at n <= 6). The sampler therefore conditions on
// the cycle count first:
//   (1) K from P(K = k) ~ n^k [x^{n-1}] F_nu^k via a log-space composition
//       walk (the per-class count n^{k-1} makes this the exact law);
//   (2) given K: black children spread over whites as K uniform balls in n
//       boxes (the Poisson factors reduce to a multinomial), block sizes
//       i.i.d. nu conditioned to sum n-1 (tilted rejection), assembled by
//       the cycle-lemma rotation;
//   (3) labels: uniform assignment pushed through canonical_relabel, which
//       is uniform over valid labellings;
//   (4) the inverse dual-tree map.
// Conditioned on K both sides agree with the simply generated law, and K
// itself carries the exact marginal, so the output is the target law.
class BoltzmannSampler {
 public:
  BoltzmannSampler(const CriticalEquivalent& ce, int n) : ce_(ce), n_(n) {
    if (n < 1) throw std::invalid_argument("BoltzmannSampler: n must be >= 1");
    if (n == 1) return;
    const long long m = n - 1;
    nu_ = ce.nu_table(n);
    log_g_.assign(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
    for (long long d = 1; d <= m; ++d)
      if (nu_[static_cast<std::size_t>(d)] > 0) {
        support_.push_back(static_cast<int>(d));
        log_g_[static_cast<std::size_t>(d)] =
            std::log(static_cast<double>(n)) + std::log(nu_[static_cast<std::size_t>(d)]);
      }
    if (support_.empty())
      throw std::invalid_argument("BoltzmannSampler: weights vanish below n");
    // log A(t) with A(0) = 1 and A(t) = sum_d g_d A(t - d).
    log_A_.assign(static_cast<std::size_t>(m + 1), -std::numeric_limits<double>::infinity());
    log_A_[0] = 0.0;
    std::vector<double> terms;
    for (long long t = 1; t <= m; ++t) {
      terms.clear();
      for (int d : support_) {
        if (d > t) break;
        const double lt = log_g_[static_cast<std::size_t>(d)] + log_A_[static_cast<std::size_t>(t - d)];
        if (std::isfinite(lt)) terms.push_back(lt);
      }
      if (terms.empty()) continue;
      const double mx = *std::max_element(terms.begin(), terms.end());
      double acc = 0;
      for (double lt : terms) acc += std::exp(lt - mx);
      log_A_[static_cast<std::size_t>(t)] = mx + std::log(acc);
    }
    if (!std::isfinite(log_A_[static_cast<std::size_t>(m)]))
      throw std::invalid_argument("BoltzmannSampler: n is not reachable (support periodicity)");
  }

  int cycle_count(Rng& rng) const {
    if (n_ == 1) return 0;
    long long t = n_ - 1;
    int k = 0;
    while (t > 0) {
      double u = rng.real01();
      double acc = 0;
      int chosen = support_.back();
      for (int d : support_) {
        if (d > t) break;
        acc += std::exp(log_g_[static_cast<std::size_t>(d)] +
                        log_A_[static_cast<std::size_t>(t - d)] -
                        log_A_[static_cast<std::size_t>(t)]);
        if (u < acc) {
          chosen = d;
          break;
        }
      }
      if (chosen > t) chosen = static_cast<int>(t);  // numerical guard
      t -= chosen;
      ++k;
    }
    return k;
  }

  // Labelled coding tree of the sampled factorization.
  LabelledBiTypeTree sample_tree(Rng& rng) {
    if (n_ == 1) return LabelledBiTypeTree();
    const int K = cycle_count(rng);
    return tree_given_cycles(K, rng);
  }

  Factorization sample(Rng& rng) {
    if (n_ == 1) return Factorization{1, {}};
    return psi_inverse(sample_tree(rng));
  }

  LabelledBiTypeTree tree_given_cycles(int K, Rng& rng) {
    const long long m = n_ - 1;
    // Black-children counts: K uniform balls in n boxes.
    std::vector<std::int32_t> j(static_cast<std::size_t>(n_), 0);
    for (int b = 0; b < K; ++b) ++j[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n_)))];
    // Block sizes: i.i.d. nu (conditioned positive) given sum m, sampled
    // through an exponential tilt centred at mean m / K.
    std::vector<std::int32_t> blocks = conditioned_blocks(K, m, rng);

    // Vertex records (j_i with its dealt blocks) rotated by the cycle
    // lemma on the grandchild-count walk.
    std::vector<std::int32_t> grand(static_cast<std::size_t>(n_), 0);
    std::vector<std::size_t> block_start(static_cast<std::size_t>(n_) + 1, 0);
    for (int i = 0; i < n_; ++i) {
      block_start[static_cast<std::size_t>(i) + 1] =
          block_start[static_cast<std::size_t>(i)] + static_cast<std::size_t>(j[static_cast<std::size_t>(i)]);
      for (std::size_t b = block_start[static_cast<std::size_t>(i)];
           b < block_start[static_cast<std::size_t>(i) + 1]; ++b)
        grand[static_cast<std::size_t>(i)] += blocks[b];
    }
    long long walk = 0, best = 0;
    std::size_t cut = 0;
    for (int i = 0; i < n_; ++i) {
      walk += grand[static_cast<std::size_t>(i)] - 1;
      if (walk < best) {
        best = walk;
        cut = static_cast<std::size_t>(i) + 1;
      }
    }
    std::vector<std::int32_t> j_rot(static_cast<std::size_t>(n_));
    std::vector<std::int32_t> blocks_rot;
    blocks_rot.reserve(blocks.size());
    for (int i = 0; i < n_; ++i) {
      const std::size_t src = (cut + static_cast<std::size_t>(i)) % static_cast<std::size_t>(n_);
      j_rot[static_cast<std::size_t>(i)] = j[src];
      for (std::size_t b = block_start[src]; b < block_start[src + 1]; ++b)
        blocks_rot.push_back(blocks[b]);
    }

    // Assemble: reduced tree from the grandchild counts, blocks attached
    // in dealt order.
    std::vector<std::int32_t> grand_rot(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      const std::size_t src = (cut + static_cast<std::size_t>(i)) % static_cast<std::size_t>(n_);
      grand_rot[static_cast<std::size_t>(i)] = grand[src];
    }
    PlaneTree reduced(grand_rot);
    LabelledBiTypeTree t = assemble_bitype(reduced, j_rot, blocks_rot);

    // Uniform labels, then the canonical valid arrangement.
    std::vector<std::int32_t> blacks;
    for (std::int32_t v = 0; v < t.tree.size(); ++v)
      if (t.is_black(v)) blacks.push_back(v);
    std::vector<std::int32_t> perm(blacks.size());
    std::iota(perm.begin(), perm.end(), 1);
    rng.shuffle(perm);
    for (std::size_t i = 0; i < blacks.size(); ++i)
      t.black_label[static_cast<std::size_t>(blacks[i])] = perm[i];
    return canonical_relabel(t);
  }

 private:
  // Bi-type tree from the reduced tree plus per-white block structure
  // (j_x black children whose white-child counts are the dealt blocks).
  static LabelledBiTypeTree assemble_bitype(const PlaneTree& reduced,
                                            const std::vector<std::int32_t>& j,
                                            const std::vector<std::int32_t>& blocks) {
    std::vector<std::size_t> block_start(j.size() + 1, 0);
    for (std::size_t i = 0; i < j.size(); ++i)
      block_start[i + 1] = block_start[i] + static_cast<std::size_t>(j[i]);

    std::vector<std::int32_t> deg;
    deg.reserve(2 * j.size());
    struct Frame {
      std::int32_t first;  // first reduced vertex of this frame
      std::int32_t block;  // -1: white; >= 0: black with that many whites
    };
    std::vector<Frame> stack;
    stack.push_back({0, -1});
    while (!stack.empty()) {
      Frame fr = stack.back();
      stack.pop_back();
      if (fr.block < 0) {
        const std::int32_t v = fr.first;
        deg.push_back(j[static_cast<std::size_t>(v)]);
        std::int32_t c = v + 1;
        std::vector<Frame> black_frames;
        for (std::size_t b = block_start[static_cast<std::size_t>(v)];
             b < block_start[static_cast<std::size_t>(v) + 1]; ++b) {
          black_frames.push_back({c, blocks[b]});
          for (std::int32_t i = 0; i < blocks[b]; ++i) c += reduced.subtree_size(c);
        }
        for (auto it = black_frames.rbegin(); it != black_frames.rend(); ++it)
          stack.push_back(*it);
      } else {
        deg.push_back(fr.block);
        std::int32_t c = fr.first;
        std::vector<std::int32_t> whites;
        for (std::int32_t i = 0; i < fr.block; ++i) {
          whites.push_back(c);
          c += reduced.subtree_size(c);
        }
        for (auto it = whites.rbegin(); it != whites.rend(); ++it)
          stack.push_back({*it, -1});
      }
    }
    PlaneTree tree(std::move(deg));
    std::vector<std::int32_t> labels(static_cast<std::size_t>(tree.size()), 0);
    return LabelledBiTypeTree(std::move(tree), std::move(labels));
  }

  std::vector<std::int32_t> conditioned_blocks(int K, long long target, Rng& rng) {
    std::vector<std::int32_t> out(static_cast<std::size_t>(K));
    if (K == 0) return out;
    const double mean = static_cast<double>(target) / K;
    if (target == K) {
      std::fill(out.begin(), out.end(), 1);
      return out;
    }
    // Tilted proposal phi^d nu_d centred at the required mean; the
    // conditional law given the sum is tilt-free, so phi only buys
    // acceptance.
    const AliasTable& alias = tilted_alias(mean);
    const long long op_budget = 800000000;
    long long ops = 0;
    for (;;) {
      long long sum = 0;
      int i = 0;
      for (; i < K; ++i) {
        out[static_cast<std::size_t>(i)] =
            support_[alias.sample(rng)];
        sum += out[static_cast<std::size_t>(i)];
        if (sum > target) break;
      }
      ops += i + 1;
      if (i == K && sum == target) return out;
      if (ops > op_budget)
        throw std::runtime_error("BoltzmannSampler: block rejection budget exceeded");
    }
  }

  // Cache of tilted alias tables, keyed by the rounded target mean.
  const AliasTable& tilted_alias(double mean) {
    const long long key = static_cast<long long>(mean * 4096.0);
    auto it = alias_cache_.find(key);
    if (it != alias_cache_.end()) return it->second;
    // Solve sum d nu_d phi^d / sum nu_d phi^d = mean by bisection in
    // log phi; weights are normalized against overflow.
    double lo = -60, hi = 60;
    auto tilted_mean = [&](double lphi) {
      double mx = -std::numeric_limits<double>::infinity();
      for (int d : support_)
        mx = std::max(mx, std::log(nu_[static_cast<std::size_t>(d)]) + lphi * d);
      double mass = 0, mom = 0;
      for (int d : support_) {
        const double w = std::exp(std::log(nu_[static_cast<std::size_t>(d)]) + lphi * d - mx);
        mass += w;
        mom += d * w;
      }
      return mom / mass;
    };
    for (int it2 = 0; it2 < 200; ++it2) {
      const double mid = 0.5 * (lo + hi);
      if (tilted_mean(mid) < mean)
        lo = mid;
      else
        hi = mid;
    }
    const double lphi = 0.5 * (lo + hi);
    double mx = -std::numeric_limits<double>::infinity();
    for (int d : support_)
      mx = std::max(mx, std::log(nu_[static_cast<std::size_t>(d)]) + lphi * d);
    std::vector<double> masses;
    masses.reserve(support_.size());
    for (int d : support_)
      masses.push_back(std::exp(std::log(nu_[static_cast<std::size_t>(d)]) + lphi * d - mx));
    return alias_cache_.emplace(key, AliasTable(masses)).first->second;
  }

  CriticalEquivalent ce_;
  int n_;
  std::vector<double> nu_;
  std::vector<double> log_g_;
  std::vector<double> log_A_;
  std::vector<int> support_;
  std::map<long long, AliasTable> alias_cache_;
};

// Exact sample of the weighted random minimal factorization.
inline Factorization sample_minimal_factorization(const CriticalEquivalent& ce, int n, Rng& rng) {
  BoltzmannSampler s(ce, n);
  return s.sample(rng);
}

// --------------------------------------------------------------------------
// The K-shuffle
// --------------------------------------------------------------------------

// Root-first relabelling: at a white vertex whose black-child labels all
// exceed K, the labels alone are permuted uniformly (subtrees stay); if
// some label is at most K the labelled children are permuted with their
// subtrees. Either way the unlabelled law is unchanged. K < 0 encodes
// "K = infinity" (always permute children with subtrees).
inline LabelledBiTypeTree shuffle_K(const LabelledBiTypeTree& t, long long K, Rng& rng) {
  const bool infinite = K < 0;

  struct Node {
    std::int32_t label;
    std::vector<int> kids;
  };
  std::vector<Node> nodes(static_cast<std::size_t>(t.tree.size()));
  for (std::int32_t v = 0; v < t.tree.size(); ++v) {
    nodes[static_cast<std::size_t>(v)].label = t.black_label[static_cast<std::size_t>(v)];
    auto ch = t.tree.children(v);
    nodes[static_cast<std::size_t>(v)].kids.assign(ch.begin(), ch.end());
  }

  // Parent is processed before its grandchildren (depth-first order);
  // operations move whole subtrees so the stack tracks mutated node ids.
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int w = stack.back();
    stack.pop_back();
    Node& nw = nodes[static_cast<std::size_t>(w)];
    const std::size_t m = nw.kids.size();
    if (m > 1) {
      bool labels_only = !infinite;
      if (labels_only)
        for (int b : nw.kids)
          if (nodes[static_cast<std::size_t>(b)].label <= K) {
            labels_only = false;
            break;
          }
      std::vector<std::size_t> idx(m);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t i = m; i > 1; --i)
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.below(i))]);
      if (labels_only) {
        std::vector<std::int32_t> labs(m);
        for (std::size_t i = 0; i < m; ++i)
          labs[i] = nodes[static_cast<std::size_t>(nw.kids[i])].label;
        for (std::size_t i = 0; i < m; ++i)
          nodes[static_cast<std::size_t>(nw.kids[i])].label = labs[idx[i]];
      } else {
        std::vector<int> kids(m);
        for (std::size_t i = 0; i < m; ++i) kids[i] = nw.kids[idx[i]];
        nw.kids = std::move(kids);
      }
    }
    for (int b : nw.kids)
      for (int gw : nodes[static_cast<std::size_t>(b)].kids) stack.push_back(gw);
  }

  std::vector<std::int32_t> deg, labels;
  deg.reserve(nodes.size());
  labels.reserve(nodes.size());
  std::vector<int> dfs{0};
  while (!dfs.empty()) {
    const int v = dfs.back();
    dfs.pop_back();
    const Node& nd = nodes[static_cast<std::size_t>(v)];
    deg.push_back(static_cast<std::int32_t>(nd.kids.size()));
    labels.push_back(nd.label);
    for (auto it = nd.kids.rbegin(); it != nd.kids.rend(); ++it) dfs.push_back(*it);
  }
  return LabelledBiTypeTree(PlaneTree(std::move(deg)), std::move(labels));
}

}  // namespace minfact
