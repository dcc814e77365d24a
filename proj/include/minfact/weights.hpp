#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace minfact {

// --------------------------------------------------------------------------
// Weight sequences (w_i)_{i >= 1}
// --------------------------------------------------------------------------

enum class WeightKind { Explicit, Uniform, Delta, PowerLaw };

// Zeta-style tail sum  sum_{k >= from} k^(-s)  by partial sum plus an
// Euler-Maclaurin remainder; accurate to ~1e-15 absolute.
inline double power_tail_sum(double s, long long from) {
  if (from < 1) throw std::invalid_argument("power_tail_sum: from must be >= 1");
  const long long cut = std::max<long long>(from, 100000);
  double acc = 0;
  for (long long k = from; k < cut; ++k) acc += std::pow(static_cast<double>(k), -s);
  const double N = static_cast<double>(cut);
  acc += std::pow(N, 1 - s) / (s - 1) + 0.5 * std::pow(N, -s) +
         s / 12.0 * std::pow(N, -s - 1) - s * (s + 1) * (s + 2) / 720.0 * std::pow(N, -s - 3);
  return acc;
}

struct WeightSequence {
  WeightKind kind = WeightKind::Uniform;
  std::vector<double> w;  // Explicit: w[i-1] holds w_i
  int r = 2;              // Delta: w_{r-1} = 1
  double alpha = 1.5;     // PowerLaw tail exponent
  int k0 = 1;             // PowerLaw support start
  double c = 0;           // PowerLaw constant, fixed by criticality

  static WeightSequence uniform() { return WeightSequence{WeightKind::Uniform, {}, 2, 0, 1, 0}; }

  static WeightSequence delta(int r) {
    if (r < 2) throw std::invalid_argument("delta weights need r >= 2");
    return WeightSequence{WeightKind::Delta, {}, r, 0, 1, 0};
  }

  static WeightSequence explicit_list(std::vector<double> values) {
    bool some = false;
    for (double v : values) {
      if (v < 0 || !std::isfinite(v)) throw std::invalid_argument("explicit weights must be >= 0");
      some = some || v > 0;
    }
    if (!some) throw std::invalid_argument("explicit weights must not all vanish");
    return WeightSequence{WeightKind::Explicit, std::move(values), 2, 0, 1, 0};
  }

  // w_i = c i^{-1-alpha} for i >= k0, with c chosen so that the sequence is
  // itself a critical probability law restricted to i >= 1 (tilt s = 1).
  static WeightSequence power_law(double alpha, int k0 = 1) {
    if (!(alpha > 1.0) || !(alpha <= 2.0))
      throw std::invalid_argument("power_law: alpha must lie in (1, 2]");
    if (k0 < 1) throw std::invalid_argument("power_law: k0 must be >= 1");
    WeightSequence ws{WeightKind::PowerLaw, {}, 2, alpha, k0, 0};
    ws.c = 1.0 / power_tail_sum(alpha, k0);  // criticality: sum i * w_i = 1
    const double mass = ws.c * power_tail_sum(alpha + 1, k0);
    if (mass > 1.0 + 1e-12)
      throw std::invalid_argument("power_law: defective construction (mass > 1)");
    return ws;
  }

  double at(long long i) const {
    if (i < 1) return 0;
    switch (kind) {
      case WeightKind::Explicit:
        return i <= static_cast<long long>(w.size()) ? w[static_cast<std::size_t>(i - 1)] : 0.0;
      case WeightKind::Uniform:
        return 1.0;
      case WeightKind::Delta:
        return i == r - 1 ? 1.0 : 0.0;
      case WeightKind::PowerLaw:
        return i >= k0 ? c * std::pow(static_cast<double>(i), -1.0 - alpha) : 0.0;
    }
    return 0;
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case WeightKind::Explicit: os << "explicit[" << w.size() << "]"; break;
      case WeightKind::Uniform: os << "uniform"; break;
      case WeightKind::Delta: os << "delta:" << r; break;
      case WeightKind::PowerLaw: os << "powerlaw:" << alpha; break;
    }
    return os.str();
  }
};

// --------------------------------------------------------------------------
// Critical equivalent
// --------------------------------------------------------------------------

struct NoCriticalEquivalent : std::runtime_error {
  explicit NoCriticalEquivalent(const std::string& what) : std::runtime_error(what) {}
};

// The unique probability law nu with nu_i = w_i s^i (i >= 1) and unit mean,
// when it exists. Carries the solved tilt, the mass at zero, the stability
// index and the variance data everything downstream consumes.
struct CriticalEquivalent {
  WeightSequence weights;
  double s = 0;
  double nu0 = 0;
  double alpha = 2;           // 2 in the finite-variance case
  bool finite_variance = true;
  double sigma2 = 0;          // variance of nu when finite
  double tail_constant = 0;   // PowerLaw: nu_k ~ tail_constant * k^{-1-alpha}

  double nu(long long i) const {
    if (i == 0) return nu0;
    return weights.at(i) * std::pow(s, static_cast<double>(i));
  }

  std::vector<double> nu_table(long long len) const {
    std::vector<double> t(static_cast<std::size_t>(len));
    double spow = 1.0;
    for (long long i = 0; i < len; ++i) {
      if (i == 0) {
        t[0] = nu0;
      } else {
        spow *= s;
        t[static_cast<std::size_t>(i)] = weights.at(i) * spow;
      }
    }
    return t;
  }
};

namespace weights_detail {

// g(s) = sum_{i>=1} i w_i s^i, the left side of the criticality equation.
inline double tilt_mean(const WeightSequence& w, double s) {
  switch (w.kind) {
    case WeightKind::Uniform:
      return s < 1.0 ? s / ((1.0 - s) * (1.0 - s)) : std::numeric_limits<double>::infinity();
    case WeightKind::Delta:
      return (w.r - 1) * std::pow(s, w.r - 1);
    case WeightKind::Explicit: {
      double acc = 0, spow = 1;
      for (std::size_t i = 0; i < w.w.size(); ++i) {
        spow *= s;
        acc += static_cast<double>(i + 1) * w.w[i] * spow;
      }
      return acc;
    }
    case WeightKind::PowerLaw: {
      if (s >= 1.0) {
        double v = w.c * power_tail_sum(w.alpha, w.k0);
        return s > 1.0 ? std::numeric_limits<double>::infinity() : v;
      }
      double acc = 0;
      double spow = std::pow(s, w.k0 - 1);
      for (long long i = w.k0;; ++i) {
        spow *= s;
        const double term = w.c * std::pow(static_cast<double>(i), -w.alpha) * spow;
        acc += term;
        if (term / (1.0 - s) < 1e-18 || i > 50000000) break;
      }
      return acc;
    }
  }
  return 0;
}

// sum_{i>=1} w_i s^i, total nu-mass above zero.
inline double tilt_mass(const WeightSequence& w, double s) {
  switch (w.kind) {
    case WeightKind::Uniform:
      return s < 1.0 ? s / (1.0 - s) : std::numeric_limits<double>::infinity();
    case WeightKind::Delta:
      return std::pow(s, w.r - 1);
    case WeightKind::Explicit: {
      double acc = 0, spow = 1;
      for (std::size_t i = 0; i < w.w.size(); ++i) {
        spow *= s;
        acc += w.w[i] * spow;
      }
      return acc;
    }
    case WeightKind::PowerLaw: {
      if (s > 1.0) return std::numeric_limits<double>::infinity();
      if (s == 1.0) return w.c * power_tail_sum(w.alpha + 1, w.k0);
      double acc = 0;
      double spow = std::pow(s, w.k0 - 1);
      for (long long i = w.k0;; ++i) {
        spow *= s;
        const double term = w.c * std::pow(static_cast<double>(i), -w.alpha - 1.0) * spow;
        acc += term;
        if (term / (1.0 - s) < 1e-18 || i > 50000000) break;
      }
      return acc;
    }
  }
  return 0;
}

// sum_{i>=1} i^2 w_i s^i; infinity signals infinite variance.
inline double tilt_second_moment(const WeightSequence& w, double s) {
  switch (w.kind) {
    case WeightKind::Uniform:
      return s < 1.0 ? s * (1.0 + s) / std::pow(1.0 - s, 3) : std::numeric_limits<double>::infinity();
    case WeightKind::Delta:
      return static_cast<double>(w.r - 1) * (w.r - 1) * std::pow(s, w.r - 1);
    case WeightKind::Explicit: {
      double acc = 0, spow = 1;
      for (std::size_t i = 0; i < w.w.size(); ++i) {
        spow *= s;
        acc += static_cast<double>(i + 1) * (i + 1) * w.w[i] * spow;
      }
      return acc;
    }
    case WeightKind::PowerLaw:
      if (s >= 1.0) return std::numeric_limits<double>::infinity();
      {
        double acc = 0;
        double spow = std::pow(s, w.k0 - 1);
        for (long long i = w.k0;; ++i) {
          spow *= s;
          const double term =
              w.c * std::pow(static_cast<double>(i), 1.0 - w.alpha) * spow;
          acc += term;
          if (term / (1.0 - s) < 1e-18 || i > 50000000) break;
        }
        return acc;
      }
  }
  return 0;
}

}  // namespace weights_detail

// Solves sum_{i>=1} i w_i s^i = 1 for the tilt s by bisection (the left
// side is strictly increasing in s). Throws NoCriticalEquivalent when the
// supremum over the radius of convergence stays below one.
inline CriticalEquivalent critical_equivalent(const WeightSequence& w) {
  using namespace weights_detail;

  // Bracket the root.
  double s = 0.0;
  double lo = 0.0, hi = 1.0;
  bool solved = false;
  if (w.kind == WeightKind::PowerLaw) {
    // Radius of convergence 1; the supremum of the tilt mean on [0,1] is
    // attained at 1 and has a closed tail sum.
    const double at_one = tilt_mean(w, 1.0);
    if (at_one < 1.0 - 1e-12) {
      std::ostringstream os;
      os << "no critical equivalent: sup_s sum i w_i s^i = " << at_one
         << " < 1 within the radius of convergence (weights " << w.describe() << ")";
      throw NoCriticalEquivalent(os.str());
    }
    if (std::abs(at_one - 1.0) < 1e-9) {
      s = 1.0;
      solved = true;
    }
  } else if (w.kind == WeightKind::Explicit || w.kind == WeightKind::Delta) {
    hi = 1.0;
    while (tilt_mean(w, hi) < 1.0) {
      hi *= 2.0;
      if (hi > 1e12)
        throw NoCriticalEquivalent("no critical equivalent: tilt mean never reaches 1");
    }
  }

  if (!solved) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (tilt_mean(w, mid) < 1.0)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-13 * hi) break;
    }
    s = 0.5 * (lo + hi);
  }
  // Polish exactly-solvable kinds.
  if (w.kind == WeightKind::Delta) s = std::pow(static_cast<double>(w.r - 1), -1.0 / (w.r - 1));
  if (w.kind == WeightKind::Uniform) s = (3.0 - std::sqrt(5.0)) / 2.0;

  CriticalEquivalent ce;
  ce.weights = w;
  ce.s = s;
  ce.nu0 = 1.0 - tilt_mass(w, s);
  if (ce.nu0 < -1e-9)
    throw NoCriticalEquivalent("no critical equivalent: tilted mass above zero exceeds 1");
  ce.nu0 = std::max(0.0, ce.nu0);

  const double m2 = tilt_second_moment(w, s);
  if (std::isfinite(m2)) {
    ce.finite_variance = true;
    ce.alpha = 2.0;
    ce.sigma2 = m2 - 1.0;  // mean is 1 by construction
  } else {
    ce.finite_variance = false;
    ce.alpha = w.alpha;
    ce.sigma2 = std::numeric_limits<double>::infinity();
    ce.tail_constant = w.c;  // s == 1 for the supported power-law tails
  }
  return ce;
}

// --------------------------------------------------------------------------
// Reduced offspring law and the decorated pair
// --------------------------------------------------------------------------

// Law with generating function exp(F_nu - 1): mu_0 = e^{nu_0 - 1} and
// k mu_k = sum_{j=1..k} j nu_j mu_{k-j}.
inline std::vector<double> reduced_offspring(const CriticalEquivalent& ce, long long K) {
  std::vector<double> nu = ce.nu_table(K + 1);
  std::vector<double> mu(static_cast<std::size_t>(K + 1), 0.0);
  mu[0] = std::exp(ce.nu0 - 1.0);
  for (long long k = 1; k <= K; ++k) {
    double acc = 0;
    for (long long j = 1; j <= k; ++j)
      acc += static_cast<double>(j) * nu[static_cast<std::size_t>(j)] *
             mu[static_cast<std::size_t>(k - j)];
    mu[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
  }
  return mu;
}

// Adaptive variant: grows the table until the tail mass drops below tol.
inline std::vector<double> reduced_offspring_auto(const CriticalEquivalent& ce,
                                                  double tol = 1e-12,
                                                  long long max_K = 1 << 20) {
  long long K = 64;
  for (;;) {
    std::vector<double> mu = reduced_offspring(ce, K);
    double mass = 0;
    for (double m : mu) mass += m;
    if (1.0 - mass <= tol) return mu;
    if (K >= max_K) throw std::runtime_error("reduced_offspring_auto: truncation budget exceeded");
    K *= 2;
  }
}

// Recovers the tilted weights back from mu by inverting the recurrence;
// all recovered coefficients of a reachable law are nonnegative and equal
// nu_i. Used as a validator.
inline std::vector<double> recover_nu_from_mu(const std::vector<double>& mu) {
  if (mu.empty() || mu[0] <= 0)
    throw std::invalid_argument("recover_nu_from_mu: mu_0 must be positive");
  std::vector<double> nu(mu.size(), 0.0);
  nu[0] = 1.0 + std::log(mu[0]);
  for (std::size_t k = 1; k < mu.size(); ++k) {
    double acc = static_cast<double>(k) * mu[k];
    for (std::size_t j = 1; j < k; ++j)
      acc -= static_cast<double>(j) * nu[j] * mu[k - j];
    nu[k] = acc / (static_cast<double>(k) * mu[0]);
  }
  return nu;
}

// White offspring is Poisson(1 - nu_0); black offspring is nu conditioned
// to be positive.
struct DecoratedPair {
  double nu0 = 0;
  CriticalEquivalent ce;

  double mu_circ(long long i) const {
    const double lam = 1.0 - nu0;
    double p = std::exp(-lam);
    for (long long j = 1; j <= i; ++j) p *= lam / static_cast<double>(j);
    return p;
  }

  std::vector<double> mu_circ_table(long long len) const {
    std::vector<double> t(static_cast<std::size_t>(len), 0.0);
    const double lam = 1.0 - nu0;
    double p = std::exp(-lam);
    for (long long i = 0; i < len; ++i) {
      t[static_cast<std::size_t>(i)] = p;
      p *= lam / static_cast<double>(i + 1);
    }
    return t;
  }

  double mu_bullet(long long i) const { return i >= 1 ? ce.nu(i) / (1.0 - nu0) : 0.0; }
};

inline DecoratedPair decorated_pair(const CriticalEquivalent& ce) {
  if (ce.nu0 >= 1.0) throw std::invalid_argument("decorated_pair: nu_0 must be below 1");
  return DecoratedPair{ce.nu0, ce};
}

// --------------------------------------------------------------------------
// Scaling sequences
// --------------------------------------------------------------------------

struct ScalingConstants {
  double B = 0;
  double B_tilde = 0;
};

// Finite variance: (sigma sqrt(n/2), sqrt((sigma^2+1) n/2)). Power-law
// tails with constant slowly varying part: B_n from
// n L / B^alpha -> alpha(alpha-1)/Gamma(3-alpha) with L = c/(2-alpha).
inline ScalingConstants scaling_constants(const CriticalEquivalent& ce, double n) {
  ScalingConstants sc;
  if (ce.finite_variance) {
    sc.B = std::sqrt(ce.sigma2) * std::sqrt(n / 2.0);
    sc.B_tilde = std::sqrt((ce.sigma2 + 1.0) * n / 2.0);
    return sc;
  }
  if (ce.weights.kind != WeightKind::PowerLaw)
    throw std::invalid_argument("scaling_constants: unsupported slowly varying tail");
  if (ce.alpha >= 2.0)
    throw std::invalid_argument(
        "scaling_constants: alpha = 2 with infinite variance has non-constant L (unsupported)");
  const double L = ce.tail_constant / (2.0 - ce.alpha);
  sc.B = std::pow(n * L * std::tgamma(3.0 - ce.alpha) / (ce.alpha * (ce.alpha - 1.0)),
                  1.0 / ce.alpha);
  sc.B_tilde = sc.B;
  return sc;
}

}  // namespace minfact
