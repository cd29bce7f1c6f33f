/* Copyright 2026 The Expodio Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Exact and modular integer arithmetic used by the solver and the verifier.
//
// All modular work is fixed width: residues and moduli are uint64_t with
// moduli capped at 2^62, products go through a 128-bit intermediate.
// Arbitrary precision (BigInt) is only used where values genuinely exceed a
// machine word: exact power tests and equation enumeration.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace expodio::arith {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr u64 kModulusCap = u64{1} << 62;

class InvalidModulus : public std::invalid_argument {
 public:
  explicit InvalidModulus(u64 m)
      : std::invalid_argument("invalid modulus " + std::to_string(m)) {}
};

class NotAUnit : public std::domain_error {
 public:
  NotAUnit(u64 base, u64 m)
      : std::domain_error(std::to_string(base) + " is not a unit modulo " +
                          std::to_string(m)) {}
};

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 mod_pow(u64 base, u64 exp, u64 m) {
  if (m < 2) throw InvalidModulus(m);
  u64 result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Saturating integer power: returns nullopt when base^exp exceeds `limit`.
inline std::optional<u64> checked_pow(u64 base, u64 exp, u64 limit) {
  u128 acc = 1;
  for (u64 i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > limit) return std::nullopt;
  }
  return static_cast<u64>(acc);
}

inline u64 lcm(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

// ---------------------------------------------------------------------------
// Primality

namespace detail {

inline bool miller_rabin_round(u64 n, u64 d, unsigned s, u64 witness) {
  u64 x = mod_pow(witness, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

/// Deterministic for every 64-bit input (first twelve prime witnesses).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kSmall) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 w : kSmall)
    if (!detail::miller_rabin_round(n, d, s, w)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Factorization

struct PrimePower {
  u64 prime = 0;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::vector<PrimePower> factors;  // ascending by prime

  u64 value() const {
    u64 v = 1;
    for (const auto& f : factors)
      for (unsigned i = 0; i < f.exponent; ++i) v *= f.prime;
    return v;
  }

  std::vector<u64> primes() const {
    std::vector<u64> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

// Brent's variant of Pollard rho; n must be odd and composite.
inline u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    constexpr u64 kBatch = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void collect_factors(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  collect_factors(d, out);
  collect_factors(n / d, out);
}

}  // namespace detail

inline Factorization factorize(u64 n) {
  if (n < 2) throw InvalidInput("factorize: n must be >= 2");
  std::vector<u64> primes;
  for (u64 p : {u64{2}, u64{3}, u64{5}}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  // Wheel over 30 up to a small bound, then rho for whatever is left.
  static constexpr u64 kWheel[] = {4, 2, 4, 2, 4, 6, 2, 6};
  u64 p = 7;
  for (std::size_t i = 0; p <= 4096 && p * p <= n; p += kWheel[i++ % 8]) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) detail::collect_factors(n, primes);
  std::sort(primes.begin(), primes.end());

  Factorization f;
  for (u64 q : primes) {
    if (!f.factors.empty() && f.factors.back().prime == q)
      ++f.factors.back().exponent;
    else
      f.factors.push_back({q, 1});
  }
  return f;
}

inline unsigned p_adic_valuation(u64 n, u64 p) {
  if (n == 0 || p < 2) return 0;
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Multiplicative order

struct CycleDescriptor {
  u64 base = 0;
  u64 modulus = 0;
  u64 order = 0;
};

/// Factorization of phi(m), which every unit order divides.
inline Factorization totient_factorization(u64 m) {
  std::vector<u64> primes;
  for (const auto& f : factorize(m).factors) {
    for (unsigned i = 1; i < f.exponent; ++i) primes.push_back(f.prime);
    if (f.prime > 2)
      for (const auto& g : factorize(f.prime - 1).factors)
        for (unsigned i = 0; i < g.exponent; ++i) primes.push_back(g.prime);
  }
  std::sort(primes.begin(), primes.end());
  Factorization out;
  for (u64 q : primes) {
    if (!out.factors.empty() && out.factors.back().prime == q)
      ++out.factors.back().exponent;
    else
      out.factors.push_back({q, 1});
  }
  return out;
}

/// Order of `base` modulo `m` given a known multiple `exponent` of it and the
/// factorization of that multiple.
inline u64 order_from_exponent(u64 base, u64 m, u64 exponent,
                               const Factorization& exponent_factors) {
  u64 order = exponent;
  for (const auto& f : exponent_factors.factors) {
    for (unsigned i = 0; i < f.exponent; ++i) {
      if (mod_pow(base, order / f.prime, m) != 1) break;
      order /= f.prime;
    }
  }
  return order;
}

inline CycleDescriptor multiplicative_order(u64 base, u64 m) {
  if (m < 2) throw InvalidModulus(m);
  const u64 reduced = base % m;
  if (std::gcd(reduced, m) != 1) throw NotAUnit(base, m);
  if (reduced == 1) return {base, m, 1};
  const Factorization phi = totient_factorization(m);
  return {base, m, order_from_exponent(reduced, m, phi.value(), phi)};
}

// ---------------------------------------------------------------------------
// Discrete logarithm inside the cycle generated by a base

enum class DlogStrategy { Auto, Enumerate, BabyStepGiantStep, PohligHellman };

inline constexpr u64 kEnumerateBelow = u64{1} << 16;
inline constexpr u64 kBabyStepLimit = u64{1} << 40;

namespace detail {

inline std::optional<u64> dlog_enumerate(u64 base, u64 target, u64 m,
                                         u64 order) {
  u64 v = 1;
  for (u64 j = 0; j < order; ++j) {
    if (v == target) return j;
    v = mul_mod(v, base, m);
  }
  return std::nullopt;
}

// Smallest x in [0, order) with base^x = target, where base has exactly the
// given order modulo m.
inline std::optional<u64> dlog_bsgs(u64 base, u64 target, u64 m, u64 order) {
  u64 n = static_cast<u64>(std::sqrt(static_cast<long double>(order)));
  while (static_cast<u128>(n) * n < order) ++n;
  if (n == 0) n = 1;
  std::vector<std::pair<u64, u64>> baby;
  baby.reserve(n);
  u64 v = 1;
  for (u64 j = 0; j < n; ++j) {
    baby.emplace_back(v, j);
    v = mul_mod(v, base, m);
  }
  std::sort(baby.begin(), baby.end());
  const u64 giant = mod_pow(base, (order - n % order) % order, m);
  u64 gamma = target;
  const u64 giant_steps = (order + n - 1) / n;
  for (u64 i = 0; i < giant_steps; ++i) {
    auto it = std::lower_bound(baby.begin(), baby.end(),
                               std::pair<u64, u64>{gamma, 0});
    if (it != baby.end() && it->first == gamma) return (i * n + it->second) % order;
    gamma = mul_mod(gamma, giant, m);
  }
  return std::nullopt;
}

inline std::optional<u64> dlog_small_order(u64 base, u64 target, u64 m,
                                           u64 order) {
  return order < kEnumerateBelow ? dlog_enumerate(base, target, m, order)
                                 : dlog_bsgs(base, target, m, order);
}

// Inverse of a modulo n (gcd(a, n) = 1).
inline u64 inverse_mod(u64 a, u64 n) {
  __int128 t = 0, new_t = 1;
  __int128 r = n, new_r = a % n;
  while (new_r != 0) {
    __int128 q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (t < 0) t += n;
  return static_cast<u64>(t);
}

inline std::optional<u64> dlog_pohlig_hellman(u64 base, u64 target, u64 m,
                                              u64 order) {
  const Factorization order_factors = order == 1 ? Factorization{} : factorize(order);
  u64 x = 0, modulus = 1;
  for (const auto& f : order_factors.factors) {
    u64 qe = 1;
    for (unsigned i = 0; i < f.exponent; ++i) qe *= f.prime;
    const u64 g = mod_pow(base, order / qe, m);
    const u64 h = mod_pow(target, order / qe, m);
    const u64 gamma = mod_pow(g, qe / f.prime, m);  // order q
    u64 xq = 0, qi = 1;
    for (unsigned i = 0; i < f.exponent; ++i) {
      const u64 g_inv_x = mod_pow(g, (qe - xq % qe) % qe, m);
      u64 hk = mul_mod(g_inv_x, h, m);
      hk = mod_pow(hk, qe / (qi * f.prime), m);
      auto d = dlog_small_order(gamma, hk, m, f.prime);
      if (!d) return std::nullopt;
      xq += *d * qi;
      qi *= f.prime;
    }
    // Chinese remainder step: x (mod modulus) and xq (mod qe).
    const u64 diff = (xq + qe - x % qe) % qe;
    const u64 t = mul_mod(diff, inverse_mod(modulus % qe, qe), qe);
    x += static_cast<u64>(static_cast<u128>(modulus) * t);
    modulus *= qe;
  }
  x %= order;
  if (mod_pow(base, x, m) != target) return std::nullopt;
  return x;
}

}  // namespace detail

/// Exponent x_r in [0, order) with base^x_r = target (mod m), or nullopt when
/// the target lies outside the cycle generated by base.
inline std::optional<u64> cycle_discrete_log(u64 base, u64 target, u64 m,
                                             DlogStrategy strategy = DlogStrategy::Auto) {
  const CycleDescriptor cycle = multiplicative_order(base, m);
  target %= m;
  if (std::gcd(target, m) != 1) return std::nullopt;
  const u64 b = base % m;
  switch (strategy) {
    case DlogStrategy::Enumerate:
      return detail::dlog_enumerate(b, target, m, cycle.order);
    case DlogStrategy::BabyStepGiantStep:
      return detail::dlog_bsgs(b, target, m, cycle.order);
    case DlogStrategy::PohligHellman:
      return detail::dlog_pohlig_hellman(b, target, m, cycle.order);
    case DlogStrategy::Auto:
      break;
  }
  if (cycle.order < kEnumerateBelow)
    return detail::dlog_enumerate(b, target, m, cycle.order);
  if (cycle.order <= kBabyStepLimit)
    return detail::dlog_bsgs(b, target, m, cycle.order);
  return detail::dlog_pohlig_hellman(b, target, m, cycle.order);
}

// ---------------------------------------------------------------------------
// Primes of the form nK + 1

class PrimesInProgression {
 public:
  PrimesInProgression(u64 period, u64 start_index = 1)
      : period_(period), n_(start_index) {
    if (period == 0) throw InvalidInput("progression period must be positive");
    if (start_index == 0) throw InvalidInput("start index must be positive");
  }

  /// Next prime nK+1 in ascending order, or nullopt once candidates would
  /// pass `limit`.
  std::optional<u64> next(u64 limit = kModulusCap) {
    while (true) {
      const u128 candidate = static_cast<u128>(n_) * period_ + 1;
      if (candidate > limit) return std::nullopt;
      ++n_;
      if (is_prime(static_cast<u64>(candidate))) return static_cast<u64>(candidate);
    }
  }

  u64 period() const { return period_; }
  u64 next_index() const { return n_; }

 private:
  u64 period_;
  u64 n_;
};

inline std::vector<u64> primes_in_progression(u64 period, u64 start_index,
                                              std::size_t count) {
  PrimesInProgression stream(period, start_index);
  std::vector<u64> out;
  while (out.size() < count) {
    auto p = stream.next();
    if (!p) break;
    out.push_back(*p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact powers

inline BigInt big_pow(u64 base, u64 exp) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp));
}

/// x >= 1 with a^x == n exactly, else nullopt.
inline std::optional<u64> exact_power_decompose(const BigInt& n, u64 a) {
  if (a < 2) throw InvalidInput("exact_power_decompose: base must be >= 2");
  if (n < 1) return std::nullopt;
  BigInt rest = n;
  BigInt q, r;
  const BigInt base(a);
  u64 x = 0;
  while (rest > 1) {
    boost::multiprecision::divide_qr(rest, base, q, r);
    if (r != 0) return std::nullopt;
    rest = q;
    ++x;
  }
  if (x == 0) return std::nullopt;
  return x;
}

}  // namespace expodio::arith
