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

// Independent certificate checker.
//
// Every claim is re-established from the instance (a, b, c) and the claim's
// own parameters by direct computation. The checker deliberately does not
// include the solver, the classifier or their enumeration helpers; it shares
// only the arithmetic kernel and the certificate data model.

#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expodio/arith.hpp"
#include "expodio/certificate.hpp"
#include "expodio/types.hpp"

namespace expodio {

struct Verdict {
  bool accepted = false;
  std::string reason;
  std::optional<std::size_t> claim_index;

  static Verdict accept() { return {true, {}, std::nullopt}; }
  static Verdict reject(std::string why, std::optional<std::size_t> at = std::nullopt) {
    return {false, std::move(why), at};
  }
};

namespace verifier {

using arith::BigInt;
using arith::u128;

// Cycles are enumerated outright up to this many steps; beyond it the
// checker falls back to the kernel's order and discrete-log routines.
inline constexpr u64 kEnumerationSteps = u64{1} << 24;
// Largest strict bound a certificate may ask the checker to enumerate.
inline constexpr u64 kMaxEnumerationBound = 4096;
inline constexpr std::size_t kMaxListLength = std::size_t{1} << 20;

/// The powers base^j (j >= 1) modulo m of a unit base.
class PowerCycle {
 public:
  PowerCycle(u64 base, u64 m) : base_(base % m), m_(m) {
    u64 v = base_;
    for (u64 j = 1; j <= kEnumerationSteps; ++j) {
      members_.push_back(v);
      if (v == 1) {
        order_ = j;
        std::sort(members_.begin(), members_.end());
        return;
      }
      v = arith::mul_mod(v, base_, m_);
    }
    members_.clear();
    members_.shrink_to_fit();
    order_ = arith::multiplicative_order(base_, m_).order;
    enumerated_ = false;
  }

  u64 order() const { return order_; }

  bool contains(u64 r) const {
    if (r >= m_) return false;
    if (enumerated_) return std::binary_search(members_.begin(), members_.end(), r);
    return arith::cycle_discrete_log(base_, r, m_).has_value();
  }

 private:
  u64 base_;
  u64 m_;
  u64 order_ = 0;
  bool enumerated_ = true;
  std::vector<u64> members_;
};

struct Failure {
  std::string reason;
};

inline void check(bool ok, std::string_view why) {
  if (!ok) throw Failure{std::string(why)};
}

inline bool is_unit(u64 base, u64 m) { return m >= 2 && std::gcd(base % m, m) == 1; }

inline u64 base_for(const EquationInstance& e, Variable v) { return v == Variable::X ? e.a : e.c; }

/// Residue the surviving side must take once the other side vanishes mod m.
inline u64 surviving_residue(const EquationInstance& e, Variable surviving, u64 m) {
  const u64 b = e.b % m;
  return surviving == Variable::X ? (m - b) % m : b;
}

inline bool satisfies(const EquationInstance& e, const Solution& s) {
  if (s.x == 0 || s.y == 0 || s.x > 4096 || s.y > 4096) return false;
  return arith::big_pow(e.a, s.x) + e.b == arith::big_pow(e.c, s.y);
}

// The checker's own enumeration of all solutions with the bounded variable
// below `bound`.
inline SolutionList enumerate_below(const EquationInstance& e, BoundVariable v, u64 bound) {
  SolutionList out;
  if (v == BoundVariable::Y || v == BoundVariable::Either) {
    BigInt cy = 1;
    for (u64 y = 1; y < bound; ++y) {
      cy *= e.c;
      if (cy <= e.b) continue;
      BigInt rest = cy - e.b;
      u64 x = 0;
      while (rest % e.a == 0) {
        rest /= e.a;
        ++x;
      }
      if (rest == 1 && x >= 1) out.push_back({x, y});
    }
  }
  if (v == BoundVariable::X || v == BoundVariable::Either) {
    BigInt ax = 1;
    for (u64 x = 1; x < bound; ++x) {
      ax *= e.a;
      BigInt rest = ax + e.b;
      u64 y = 0;
      while (rest % e.c == 0) {
        rest /= e.c;
        ++y;
      }
      if (rest == 1 && y >= 1) out.push_back({x, y});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- per-claim revalidators -------------------------------------------------

inline void check_pow_mod_eq_zero(const EquationInstance& e, const PowModEqZero& p) {
  check(p.base == base_for(e, p.variable), "base does not match the instance");
  check(p.modulus >= 2 && p.modulus <= arith::kModulusCap, "modulus out of range");
  check(p.threshold >= 1, "threshold must be positive");
  for (const auto& f : arith::factorize(p.modulus).factors) {
    const u128 have = static_cast<u128>(arith::p_adic_valuation(p.base, f.prime)) * p.threshold;
    check(have >= f.exponent, "base^threshold is not divisible by the modulus");
  }
  check(arith::mod_pow(p.base, p.threshold, p.modulus) == 0, "base^threshold is nonzero modulo modulus");
}

inline void check_observe(const EquationInstance& e, const ObserveModCycle& o, const PowModEqZero& premise) {
  check(o.equation == e, "equation does not match the instance");
  check(premise.variable == other(o.variable), "premise vanishes on the wrong side");
  check(premise.modulus == o.modulus, "premise modulus differs");
  check(o.base == base_for(e, o.variable), "base does not match the instance");
  check(o.target == surviving_residue(e, o.variable, o.modulus), "target is not the residue forced by the equation");
  check(is_unit(o.base, o.modulus), "base is not a unit modulo modulus");
  const PowerCycle cycle(o.base, o.modulus);
  if (o.contradiction) {
    check(!o.residue && !o.period, "contradiction claim carries a residue class");
    check(!cycle.contains(o.target), "target is reachable by the power cycle");
    return;
  }
  check(o.residue && o.period, "constraint claim without residue class");
  check(*o.period == cycle.order(), "period is not the cycle length");
  check(*o.residue < *o.period, "residue not reduced");
  check(arith::mod_pow(o.base, *o.residue, o.modulus) == o.target, "residue does not reach the target");
}

inline void check_utilize(const UtilizeModCycle& u, const ObserveModCycle& premise) {
  check(!premise.contradiction && premise.residue && premise.period, "premise is not a constraint");
  check(u.variable == premise.variable && u.base == premise.base, "premise concerns another power");
  check(u.residue == *premise.residue && u.period == *premise.period, "residue class differs from premise");
  check(u.prime >= 2 && u.prime <= arith::kModulusCap, "modulus out of range");
  check(is_unit(u.base, u.prime), "base is not a unit modulo prime");
  const PowerCycle cycle(u.base, u.prime);
  check(u.lifted_period == arith::lcm(u.period, cycle.order()), "lifted period is not lcm(period, order)");
  const u64 count = u.lifted_period / u.period;
  check(count <= kMaxListLength && u.lifted_residues.size() == count, "wrong number of lifted residues");
  check(u.values.size() == count, "wrong number of values");
  for (u64 j = 0; j < count; ++j) {
    check(u.lifted_residues[j] == u.residue + j * u.period, "lifted residue mismatch");
    check(u.values[j] == arith::mod_pow(u.base, u.lifted_residues[j], u.prime), "power value mismatch");
  }
}

inline void check_compute(const EquationInstance& e, ClaimKind kind, const ComputeModShift& c,
                          const UtilizeModCycle& premise) {
  check(c.equation == e, "equation does not match the instance");
  check(c.variable == other(premise.variable), "shift lands on the wrong side");
  check(c.base == base_for(e, c.variable), "base does not match the instance");
  check(c.prime == premise.prime, "prime differs from premise");
  check(c.shift == e.b, "shift is not b");
  const bool add = premise.variable == Variable::X;
  check(kind == (add ? ClaimKind::ComputeModAdd : ClaimKind::ComputeModSub), "shift direction does not match the equation");
  check(c.values.size() == premise.values.size(), "value count differs from premise");
  const u64 b = e.b % c.prime;
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const u64 expect = add ? (premise.values[i] + b) % c.prime : (premise.values[i] + c.prime - b) % c.prime;
    check(c.values[i] == expect, "shifted value mismatch");
  }
}

inline void check_exhaust(const ExhaustModCycle& x, const ComputeModShift& premise) {
  check(x.variable == premise.variable && x.base == premise.base && x.prime == premise.prime,
        "premise concerns another power");
  check(x.values == premise.values, "values differ from premise");
  check(is_unit(x.base, x.prime), "base is not a unit modulo prime");
  const PowerCycle cycle(x.base, x.prime);
  for (u64 v : x.values) check(!cycle.contains(v), "value is reachable by the power cycle");
}

inline void check_enumeration(const EquationInstance& e, const Enumeration& en) {
  check(en.equation == e, "equation does not match the instance");
  check(en.bound >= 1 && en.bound <= kMaxEnumerationBound, "enumeration bound out of range");
  check(en.solutions == enumerate_below(e, en.variable, en.bound), "solution list is not the enumerated set");
}

// --- chain ------------------------------------------------------------------

template <typename T>
const T& params_as(const Certificate& cert, std::size_t i, ClaimKind kind) {
  check(i < cert.claims.size(), "missing claim");
  const ClaimRecord& c = cert.claims[i];
  check(c.kind == kind, std::string("expected ") + std::string(to_string(kind)));
  const T* p = std::get_if<T>(&c.params);
  check(p != nullptr, "claim parameters do not match its kind");
  return *p;
}

inline void expect_premises(const Certificate& cert, std::size_t i, std::vector<std::size_t> want) {
  check(cert.claims[i].premises == want, "unexpected premises");
}

inline std::vector<ClaimKind> expected_kinds(const Certificate& cert) {
  switch (cert.shape) {
    case Shape::DivisibilityNoSolution:
      return {ClaimKind::PowModEqZero, ClaimKind::ObserveModCycle};
    case Shape::CommonFactorBound:
      return {ClaimKind::PowModEqZero, ClaimKind::PowModEqZero, ClaimKind::Enumeration};
    case Shape::DirectModularExclusion:
      return {ClaimKind::PowModEqZero, ClaimKind::ObserveModCycle, ClaimKind::Enumeration};
    case Shape::MagicPrimeExclusion: {
      const auto* mp = std::get_if<ModularPayload>(&cert.payload);
      const bool forward = mp && mp->candidate.mode == Mode::Forward;
      return {ClaimKind::PowModEqZero, ClaimKind::ObserveModCycle, ClaimKind::UtilizeModCycle,
              forward ? ClaimKind::ComputeModAdd : ClaimKind::ComputeModSub,
              ClaimKind::ExhaustModCycle, ClaimKind::Enumeration};
    }
  }
  return {};
}

/// Checks one claim in isolation (plus its direct premises). Throws Failure.
inline void check_claim(const Certificate& cert, std::size_t i) {
  const EquationInstance& e = cert.instance;
  const ClaimRecord& c = cert.claims[i];
  for (auto p : c.premises) check(p < i, "premise does not precede the claim");
  switch (c.kind) {
    case ClaimKind::PowModEqZero:
      check(c.premises.empty(), "unexpected premises");
      check_pow_mod_eq_zero(e, params_as<PowModEqZero>(cert, i, c.kind));
      break;
    case ClaimKind::ObserveModCycle:
      check(c.premises.size() == 1, "observe_mod_cycle needs one premise");
      check_observe(e, params_as<ObserveModCycle>(cert, i, c.kind),
                    params_as<PowModEqZero>(cert, c.premises[0], ClaimKind::PowModEqZero));
      break;
    case ClaimKind::UtilizeModCycle:
      check(c.premises.size() == 1, "utilize_mod_cycle needs one premise");
      check_utilize(params_as<UtilizeModCycle>(cert, i, c.kind),
                    params_as<ObserveModCycle>(cert, c.premises[0], ClaimKind::ObserveModCycle));
      break;
    case ClaimKind::ComputeModAdd:
    case ClaimKind::ComputeModSub:
      check(c.premises.size() == 1, "compute claim needs one premise");
      check_compute(e, c.kind, params_as<ComputeModShift>(cert, i, c.kind),
                    params_as<UtilizeModCycle>(cert, c.premises[0], ClaimKind::UtilizeModCycle));
      break;
    case ClaimKind::ExhaustModCycle:
      check(c.premises.size() == 1, "exhaust_mod_cycle needs one premise");
      check_exhaust(params_as<ExhaustModCycle>(cert, i, c.kind),
                    [&]() -> const ComputeModShift& {
                      const std::size_t p = c.premises[0];
                      const ClaimKind k = cert.claims[p].kind;
                      check(k == ClaimKind::ComputeModAdd || k == ClaimKind::ComputeModSub,
                            "premise is not a compute claim");
                      return params_as<ComputeModShift>(cert, p, k);
                    }());
      break;
    case ClaimKind::Enumeration:
      check_enumeration(e, params_as<Enumeration>(cert, i, c.kind));
      break;
    case ClaimKind::Unknown:
      check(false, "unknown revalidator '" + c.unknown_kind + "'");
      break;
  }
}

inline void check_divisibility(const Certificate& cert, const DivisibilityPayload& p) {
  const EquationInstance& e = cert.instance;
  check(p.tag == ClassTag::TypeI_i || p.tag == ClassTag::TypeI_ii, "tag does not fit the shape");
  check(arith::is_prime(p.prime), "witness is not prime");
  const bool type_i = p.tag == ClassTag::TypeI_i;
  check(e.b % p.prime == 0 && (type_i ? e.c : e.a) % p.prime == 0, "witness does not divide the shared parameters");
  const auto& pow = params_as<PowModEqZero>(cert, 0, ClaimKind::PowModEqZero);
  check(pow.variable == (type_i ? Variable::Y : Variable::X), "vanishing side does not match the tag");
  check(pow.modulus == p.prime && pow.threshold == 1, "vanishing claim does not use the witness prime");
  const auto& obs = params_as<ObserveModCycle>(cert, 1, ClaimKind::ObserveModCycle);
  check(obs.contradiction, "divisibility case must end in a contradiction");
  expect_premises(cert, 1, {0});
  check(!cert.enumeration_bound, "divisibility case has no enumeration");
  check(cert.solutions.empty(), "divisibility case admits no solutions");
}

inline void check_common_factor(const Certificate& cert, const CommonFactorPayload& p) {
  const EquationInstance& e = cert.instance;
  const u64 d = std::gcd(e.a, e.c);
  check(d > 1 && p.common_divisor == d, "common divisor is not gcd(a, c)");
  const bool divides = e.b % d == 0;
  check(p.tag == (divides ? ClassTag::TypeI_iii_Bounded : ClassTag::TypeI_iii_NoSolution),
        "tag does not match divisibility of b");
  check(arith::is_prime(p.prime) && d % p.prime == 0, "witness prime does not divide gcd(a, c)");
  check(p.exponent == arith::p_adic_valuation(e.b, p.prime) + 1, "exponent is not v_p(b) + 1");
  check(p.threshold == (divides ? p.exponent : 1), "threshold does not match the tag");
  const auto m = arith::checked_pow(p.prime, p.exponent, arith::kModulusCap);
  check(m.has_value(), "modulus out of range");
  check(e.b % *m != 0, "b vanishes modulo the witness power");
  const auto& px = params_as<PowModEqZero>(cert, 0, ClaimKind::PowModEqZero);
  const auto& py = params_as<PowModEqZero>(cert, 1, ClaimKind::PowModEqZero);
  check(px.variable == Variable::X && py.variable == Variable::Y, "vanishing claims out of order");
  check(px.modulus == *m && py.modulus == *m, "vanishing claims do not use the witness power");
  check(px.threshold == p.threshold && py.threshold == p.threshold, "vanishing thresholds differ");
  const auto& en = params_as<Enumeration>(cert, 2, ClaimKind::Enumeration);
  check(en.variable == BoundVariable::Either && en.bound == p.threshold, "enumeration bound does not follow");
  expect_premises(cert, 2, {0, 1});
}

inline void check_modular(const Certificate& cert, const ModularPayload& p) {
  const EquationInstance& e = cert.instance;
  const ModulusCandidate& cand = p.candidate;
  const Variable vanishing = bounded_variable(cand.mode);
  const Variable surviving = other(vanishing);
  const u64 zero_base = base_for(e, vanishing);
  check(arith::is_prime(cand.prime) && zero_base % cand.prime == 0, "modulus prime does not divide the vanishing base");
  check(cand.bound >= 1, "bound must be positive");
  check(static_cast<u128>(cand.bound) * arith::p_adic_valuation(zero_base, cand.prime) == cand.exponent,
        "exponent is not bound * v_p(base)");
  const auto m = arith::checked_pow(cand.prime, cand.exponent, arith::kModulusCap);
  check(m && *m == cand.modulus, "modulus is not prime^exponent");

  const auto& pow = params_as<PowModEqZero>(cert, 0, ClaimKind::PowModEqZero);
  check(pow.variable == vanishing && pow.modulus == cand.modulus && pow.threshold == cand.bound,
        "vanishing claim does not match the payload");
  const auto& obs = params_as<ObserveModCycle>(cert, 1, ClaimKind::ObserveModCycle);
  check(obs.variable == surviving, "congruence on the wrong side");
  expect_premises(cert, 1, {0});

  const bool magic = cert.shape == Shape::MagicPrimeExclusion;
  check(obs.contradiction != magic, "observe claim mode does not fit the shape");
  check(p.constraint.has_value() == magic && p.witness.has_value() == magic, "payload does not fit the shape");
  const std::size_t last = magic ? 5 : 2;
  const auto& en = params_as<Enumeration>(cert, last, ClaimKind::Enumeration);
  check(en.variable == bound_variable_of(vanishing) && en.bound == cand.bound, "enumeration bound does not follow");
  expect_premises(cert, last, {last - 1});
  if (!magic) return;

  const Constraint& con = *p.constraint;
  check(con.variable == surviving && con.residue == obs.residue && con.period == obs.period &&
            con.source_modulus == obs.modulus && con.source_target == obs.target,
        "constraint does not match the observed cycle");
  const MagicPrimeWitness& w = *p.witness;
  const auto& ut = params_as<UtilizeModCycle>(cert, 2, ClaimKind::UtilizeModCycle);
  const ClaimKind shift_kind = cand.mode == Mode::Forward ? ClaimKind::ComputeModAdd : ClaimKind::ComputeModSub;
  const auto& cm = params_as<ComputeModShift>(cert, 3, shift_kind);
  const auto& ex = params_as<ExhaustModCycle>(cert, 4, ClaimKind::ExhaustModCycle);
  expect_premises(cert, 2, {1});
  expect_premises(cert, 3, {2});
  expect_premises(cert, 4, {3});
  check(arith::is_prime(w.prime), "magic modulus is not prime");
  check(w.prime % con.period == 1, "magic prime is not 1 mod the period");
  check(e.a % w.prime != 0 && e.b % w.prime != 0 && e.c % w.prime != 0, "magic prime divides a parameter");
  check(w.prime == ut.prime && w.lifted_period == ut.lifted_period && w.lifted_residues == ut.lifted_residues &&
            w.power_values == ut.values,
        "witness lift does not match the utilize claim");
  check(w.shifted_values == cm.values && w.shifted_values == ex.values, "witness values do not match the claims");
  check(w.constrained_order == PowerCycle(base_for(e, surviving), w.prime).order(), "constrained order is wrong");
  check(w.other_side_order == PowerCycle(zero_base, w.prime).order(), "other side order is wrong");
  check(w.disjoint, "witness is not marked disjoint");
}

}  // namespace verifier

inline Verdict verify_certificate(const Certificate& cert) {
  using namespace verifier;
  const EquationInstance& e = cert.instance;
  if (e.a < 2 || e.c < 2 || e.b < 1 || e.a >= kMaxParameter || e.b >= kMaxParameter || e.c >= kMaxParameter)
    return Verdict::reject("malformed: invalid instance");

  const auto kinds = expected_kinds(cert);
  if (cert.claims.size() != kinds.size())
    return Verdict::reject("claim count does not fit the shape", std::min(cert.claims.size(), kinds.size()));
  for (std::size_t i = 0; i < kinds.size(); ++i)
    if (cert.claims[i].kind != kinds[i])
      return Verdict::reject("claim kind '" + std::string(to_string(cert.claims[i].kind)) +
                                 "' does not fit the shape",
                             i);

  const bool shape_fits = std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DivisibilityPayload>) return cert.shape == Shape::DivisibilityNoSolution;
        if constexpr (std::is_same_v<P, CommonFactorPayload>) return cert.shape == Shape::CommonFactorBound;
        if constexpr (std::is_same_v<P, ModularPayload>)
          return cert.shape == Shape::DirectModularExclusion || cert.shape == Shape::MagicPrimeExclusion;
      },
      cert.payload);
  if (!shape_fits) return Verdict::reject("malformed: payload does not fit the shape");

  for (std::size_t i = 0; i < cert.claims.size(); ++i) {
    try {
      check_claim(cert, i);
    } catch (const Failure& f) {
      return Verdict::reject(f.reason, i);
    } catch (const std::exception& ex) {
      return Verdict::reject(std::string("claim could not be evaluated: ") + ex.what(), i);
    }
  }

  try {
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, DivisibilityPayload>) check_divisibility(cert, p);
          if constexpr (std::is_same_v<P, CommonFactorPayload>) check_common_factor(cert, p);
          if constexpr (std::is_same_v<P, ModularPayload>) check_modular(cert, p);
        },
        cert.payload);
  } catch (const Failure& f) {
    return Verdict::reject(f.reason);
  } catch (const std::exception& ex) {
    return Verdict::reject(std::string("certificate could not be evaluated: ") + ex.what());
  }

  try {
    if (cert.shape != Shape::DivisibilityNoSolution) {
      const auto& en = std::get<Enumeration>(cert.claims.back().params);
      check(cert.enumeration_bound && cert.enumeration_bound->variable == en.variable &&
                cert.enumeration_bound->bound == en.bound,
            "enumeration bound differs from the final claim");
      check(cert.solutions == en.solutions, "solution list differs from the final claim");
    }
    for (const auto& s : cert.solutions) check(satisfies(e, s), "listed solution does not satisfy the equation");
  } catch (const Failure& f) {
    return Verdict::reject(f.reason, cert.claims.size() - 1);
  } catch (const std::exception& ex) {
    return Verdict::reject(std::string("certificate could not be evaluated: ") + ex.what());
  }
  return Verdict::accept();
}

/// Parses and verifies a serialized certificate. Syntax and schema errors are
/// rejections with a "malformed" reason.
/// Digests are taken over the canonical text, so anything that does not
/// re-serialize byte for byte is rejected before the claims are checked.
inline Verdict verify_serialized(std::string_view text) {
  try {
    const Certificate cert = parse_certificate(text);
    if (serialize(cert) != text) return Verdict::reject("non-canonical serialization");
    return verify_certificate(cert);
  } catch (const MalformedCertificate& e) {
    return Verdict::reject(std::string("malformed: ") + e.what());
  }
}

}  // namespace expodio
