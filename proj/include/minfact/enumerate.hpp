#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "minfact/perm.hpp"

namespace minfact {

inline constexpr int kEnumerationBound = 7;

namespace detail {

// All increasing cycles on {1..n} with length >= 2, in lexicographic order
// of their support tuples.
inline std::vector<std::vector<int>> all_increasing_supports(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int next) {
    if (cur.size() >= 2) out.push_back(cur);
    for (int v = next; v <= n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(1);
  std::sort(out.begin(), out.end());
  return out;
}

// Number of cycles of the permutation rho, fixed points included.
inline int cycle_count(const Permutation& rho) {
  const int n = static_cast<int>(rho.size());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  int count = 0;
  for (int i = 1; i <= n; ++i) {
    if (seen[static_cast<std::size_t>(i - 1)]) continue;
    ++count;
    int j = i;
    while (!seen[static_cast<std::size_t>(j - 1)]) {
      seen[static_cast<std::size_t>(j - 1)] = 1;
      j = rho[static_cast<std::size_t>(j - 1)];
    }
  }
  return count;
}

}  // namespace detail

// Depth-first enumeration of every minimal factorization of the n-cycle,
// optionally restricted to an ordered class signature. This is the
// ground-truth oracle for the bijection and sampling modules, so it is
// deliberately independent of them: plain search over ordered tuples of
// increasing cycles, pruned by the residual defect bound
// n - #cycles(c_n sigma^{-1}) <= remaining defect.
inline void enumerate_minimal_factorizations(
    int n, const ClassSignature* cls,
    const std::function<void(const Factorization&)>& emit,
    int bound = kEnumerationBound) {
  if (n < 1) throw std::invalid_argument("enumerate: n must be positive");
  if (n > bound) throw std::invalid_argument("enumerate: n exceeds enumeration bound");
  if (cls && cls->defect() != n - 1) return;

  const Permutation target = n_cycle(n);
  if (n == 1) {
    // The empty product: sum of (l-1) over no cycles is 0 = n-1.
    if (!cls || cls->lengths.empty()) emit(Factorization{1, {}});
    return;
  }

  const auto supports = detail::all_increasing_supports(n);

  // Inverse images of the partial product, kept incrementally.
  Permutation sigma = identity_perm(n);
  std::vector<Cycle> chosen;

  // rho = target o sigma^{-1}; the minimal defect to finish is n - #cycles(rho).
  auto residual_need = [&]() {
    Permutation sigma_inv(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
      sigma_inv[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i - 1)] - 1)] = i;
    Permutation rho(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
      rho[static_cast<std::size_t>(i - 1)] =
          target[static_cast<std::size_t>(sigma_inv[static_cast<std::size_t>(i - 1)] - 1)];
    return n - detail::cycle_count(rho);
  };

  std::function<void(int)> rec = [&](int defect_left) {
    if (defect_left == 0) {
      if (sigma == target) {
        Factorization f;
        f.n = n;
        f.cycles = chosen;
        emit(f);
      }
      return;
    }
    const std::size_t level = chosen.size();
    for (const auto& sup : supports) {
      const int d = static_cast<int>(sup.size()) - 1;
      if (d > defect_left) continue;
      if (cls) {
        if (level >= cls->lengths.size()) return;
        if (static_cast<int>(sup.size()) != cls->lengths[level]) continue;
      }
      Cycle c(sup, n);
      Permutation saved = sigma;
      for (int i = 0; i < n; ++i) {
        int v = sigma[static_cast<std::size_t>(i)];
        sigma[static_cast<std::size_t>(i)] = c.apply(v);
      }
      chosen.push_back(c);
      if (residual_need() <= defect_left - d) rec(defect_left - d);
      chosen.pop_back();
      sigma = saved;
    }
  };
  rec(n - 1);
}

inline std::vector<Factorization> all_minimal_factorizations(
    int n, const ClassSignature* cls = nullptr, int bound = kEnumerationBound) {
  std::vector<Factorization> out;
  enumerate_minimal_factorizations(
      n, cls, [&](const Factorization& f) { out.push_back(f); }, bound);
  return out;
}

inline long long count_minimal_factorizations(int n, const ClassSignature* cls = nullptr,
                                              int bound = kEnumerationBound) {
  long long c = 0;
  enumerate_minimal_factorizations(n, cls, [&](const Factorization&) { ++c; }, bound);
  return c;
}

// All ordered class signatures with sum(a_i - 1) = n - 1, a_i >= 2.
inline std::vector<ClassSignature> all_class_signatures(int n) {
  std::vector<ClassSignature> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int defect_left) {
    if (defect_left == 0) {
      out.push_back(ClassSignature{cur});
      return;
    }
    for (int d = 1; d <= defect_left; ++d) {
      cur.push_back(d + 1);
      rec(defect_left - d);
      cur.pop_back();
    }
  };
  rec(n - 1);
  return out;
}

}  // namespace minfact
