#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace minfact {

// A permutation of {1..n} stored densely: perm[i-1] is the image of i.
using Permutation = std::vector<int>;

inline Permutation identity_perm(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  return p;
}

// The cycle (1 2 ... n), mapping i to i+1 and n to 1.
inline Permutation n_cycle(int n) {
  Permutation p(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) p[i - 1] = (i == n) ? 1 : i + 1;
  return p;
}

// An increasing cycle on {1..n}: support strictly increasing, length >= 2.
// (e_1 e_2 ... e_l) maps e_j to e_{j+1} and e_l to e_1. Non-increasing
// input is rejected rather than rotated, so corrupted data is detectable.
struct Cycle {
  int n = 0;
  std::vector<int> support;

  Cycle() = default;
  Cycle(std::vector<int> sup, int ambient) : n(ambient), support(std::move(sup)) {
    if (support.size() < 2)
      throw std::invalid_argument("Cycle: length must be at least 2");
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] < 1 || support[i] > n)
        throw std::invalid_argument("Cycle: element outside [1,n]");
      if (i > 0 && support[i] <= support[i - 1])
        throw std::invalid_argument("Cycle: support must be strictly increasing");
    }
  }

  int length() const { return static_cast<int>(support.size()); }

  int apply(int x) const {
    for (std::size_t j = 0; j < support.size(); ++j)
      if (support[j] == x)
        return support[(j + 1) % support.size()];
    return x;
  }
};

// Ordered class signature (a_1,...,a_k); valid for ambient n when
// sum(a_i - 1) == n - 1.
struct ClassSignature {
  std::vector<int> lengths;

  int defect() const {
    int d = 0;
    for (int a : lengths) d += a - 1;
    return d;
  }
};

// An ordered tuple of cycles; minimality is checked separately.
struct Factorization {
  int n = 0;
  std::vector<Cycle> cycles;

  int k() const { return static_cast<int>(cycles.size()); }

  ClassSignature class_signature() const {
    ClassSignature sig;
    sig.lengths.reserve(cycles.size());
    for (const Cycle& c : cycles) sig.lengths.push_back(c.length());
    return sig;
  }

  bool operator==(const Factorization& o) const {
    if (n != o.n || cycles.size() != o.cycles.size()) return false;
    for (std::size_t i = 0; i < cycles.size(); ++i)
      if (cycles[i].support != o.cycles[i].support) return false;
    return true;
  }
};

// Left-to-right product: tau_1 tau_2 corresponds to applying tau_1 first.
inline Permutation compose(const std::vector<Cycle>& cycles, int n) {
  Permutation p = identity_perm(n);
  for (const Cycle& c : cycles) {
    if (c.n != n) throw std::invalid_argument("compose: ambient size mismatch");
    for (int x : c.support)
      if (x < 1 || x > n)
        throw std::invalid_argument("compose: cycle element outside [1,n]");
    // p := c after p  (apply p first, then c)
    std::vector<int> next(c.support.size());
    for (std::size_t j = 0; j < c.support.size(); ++j)
      next[j] = c.support[(j + 1) % c.support.size()];
    std::vector<int> img(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t j = 0; j < c.support.size(); ++j)
      img[static_cast<std::size_t>(c.support[j])] = next[j];
    for (int i = 0; i < n; ++i) {
      int v = p[static_cast<std::size_t>(i)];
      int w = img[static_cast<std::size_t>(v)];
      if (w != 0) p[static_cast<std::size_t>(i)] = w;
    }
  }
  return p;
}

inline Permutation compose(const Factorization& f) { return compose(f.cycles, f.n); }

struct MinimalityCheck {
  bool ok = false;
  std::string reason;
};

// True iff all cycles have length >= 2, the total length defect is n-1,
// and the left-to-right product is the n-cycle.
inline MinimalityCheck check_minimal_factorization(const std::vector<Cycle>& cycles, int n) {
  if (n < 1) return {false, "ambient size must be positive"};
  long long defect = 0;
  for (const Cycle& c : cycles) {
    if (c.n != n) return {false, "ambient size mismatch"};
    if (c.length() < 2) return {false, "cycle of length < 2"};
    defect += c.length() - 1;
  }
  if (defect != n - 1) return {false, "total length defect is not n-1"};
  if (compose(cycles, n) != n_cycle(n)) return {false, "product is not the n-cycle"};
  return {true, ""};
}

inline bool is_minimal_factorization(const Factorization& f) {
  return check_minimal_factorization(f.cycles, f.n).ok;
}

// Replaces each cycle (d_1 d_2 ... d_l), d_1 the support minimum, by the
// transpositions (d_1 d_2)(d_1 d_3)...(d_1 d_l). The result has exactly
// n-1 transpositions and the same product.
inline Factorization transposition_slicing(const Factorization& f) {
  Factorization out;
  out.n = f.n;
  for (const Cycle& c : f.cycles) {
    for (std::size_t j = 1; j < c.support.size(); ++j)
      out.cycles.emplace_back(std::vector<int>{c.support[0], c.support[j]}, f.n);
  }
  return out;
}

}  // namespace minfact
