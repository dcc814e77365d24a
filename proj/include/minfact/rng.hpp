#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace minfact {

// Deterministic 64-bit generator with hand-rolled sampling helpers.
// std:: distributions are implementation-defined, so everything that
// touches the output stream is implemented here; a seed therefore
// produces the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  // Uniform double in [0,1) with 53 random bits.
  double real01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), bitmask rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    if ((n & (n - 1)) == 0) return u64() & (n - 1);
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = u64() & mask;
      if (v < n) return v;
    }
  }

  double uniform(double a, double b) { return a + (b - a) * real01(); }

  // Exact Poisson sample by Knuth multiplication, chunked so that
  // exp(-lambda) stays representable.
  std::int64_t poisson(double lambda) {
    if (lambda < 0 || !std::isfinite(lambda))
      throw std::invalid_argument("Rng::poisson: bad lambda");
    std::int64_t total = 0;
    while (lambda > 500.0) {
      total += poisson_knuth(500.0);
      lambda -= 500.0;
    }
    return total + poisson_knuth(lambda);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Substream derivation: deterministic regardless of thread layout.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::int64_t poisson_knuth(double lambda) {
    if (lambda <= 0) return 0;
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= real01();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64 eng_;
};

// Vose alias table over a finite mass vector. Masses need not sum to one;
// they are normalized on construction.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(const std::vector<double>& masses) {
    const std::size_t n = masses.size();
    if (n == 0) throw std::invalid_argument("AliasTable: empty support");
    double total = 0;
    for (double m : masses) {
      if (m < 0 || !std::isfinite(m))
        throw std::invalid_argument("AliasTable: negative or non-finite mass");
      total += m;
    }
    if (total <= 0) throw std::invalid_argument("AliasTable: zero total mass");
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = masses[i] * n / total;
    std::vector<std::size_t> small, large;
    for (std::size_t i = n; i-- > 0;)
      (scaled[i] < 1.0 ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
      std::size_t s = small.back(), l = large.back();
      small.pop_back();
      large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    while (!large.empty()) {
      prob_[large.back()] = 1.0;
      large.pop_back();
    }
    while (!small.empty()) {
      prob_[small.back()] = 1.0;
      small.pop_back();
    }
  }

  std::size_t sample(Rng& rng) const {
    std::size_t i = static_cast<std::size_t>(rng.below(prob_.size()));
    return rng.real01() < prob_[i] ? i : alias_[i];
  }

  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace minfact
