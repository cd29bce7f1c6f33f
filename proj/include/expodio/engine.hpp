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

// Modular exclusion solver for pairwise coprime instances.
//
// After a bounded initial search, the solver tries to refute "y >= t" (Forward,
// modulo p^k for p | c) or "x >= t" (Backward, modulo q^k for q | a) with the
// smallest available modulus first. Modulo p^k the vanishing side drops out
// and the other side must hit a fixed residue. Either that residue is outside
// the power cycle (direct exclusion), or it pins the other exponent to a
// residue class mod K, and a prime P = nK + 1 may rule out every value the
// class allows (a magic prime). On success the bounded variable is enumerated
// exactly and a certificate is assembled.
//
// Termination is not guaranteed in general, so every loop is budgeted and
// exhaustion yields an Unresolved result instead of an error.

#pragma once

#include <chrono>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "expodio/arith.hpp"
#include "expodio/certificate.hpp"
#include "expodio/classify.hpp"
#include "expodio/enumerate.hpp"
#include "expodio/types.hpp"

namespace expodio {

using arith::BigInt;

struct SolverConfig {
  BigInt ceiling = BigInt(1) << 64;          // initial search covers c^y <= ceiling
  u64 prime_budget = 64;                     // primes tried per constraint
  u64 prime_cap = u64{1} << 40;              // largest magic prime candidate
  u64 max_modulus = arith::kModulusCap;
  u64 max_pops = 10000;
  std::optional<std::chrono::milliseconds> wall_clock_limit;
  u64 min_period = 8;                        // shorter constraints skip the prime search
};

struct SearchBudget {
  u64 max_primes = 64;
  u64 prime_cap = u64{1} << 40;
};

enum class SolveStatus { Solved, Unresolved };

inline constexpr std::string_view to_string(SolveStatus s) {
  return s == SolveStatus::Solved ? "Solved" : "Unresolved";
}

struct Effort {
  u64 moduli_tried = 0;
  u64 primes_tried = 0;
  std::chrono::microseconds wall_time{0};
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unresolved;
  SolutionList solutions;
  std::optional<Certificate> certificate;
  Classification classification;
  Effort effort;
  std::vector<ModulusCandidate> attempts;  // in pop order
  std::vector<std::string> trace;
};

struct DirectExclusion {};
struct Conditional {
  Constraint constraint;
};
struct Degenerate {};
using ExclusionResult = std::variant<DirectExclusion, Conditional, Degenerate>;

namespace detail {

inline u64 power_base(const EquationInstance& e, Variable v) { return v == Variable::X ? e.a : e.c; }

}  // namespace detail

/// All solutions with c^y <= ceiling, sorted by y.
inline SolutionList initial_search(const EquationInstance& e, const BigInt& ceiling) {
  SolutionList out;
  BigInt cy = e.c;
  for (u64 y = 1; cy <= ceiling; ++y, cy *= e.c) {
    if (cy <= e.b) continue;
    if (auto x = arith::exact_power_decompose(cy - e.b, e.a)) out.push_back({*x, y});
  }
  return out;
}

/// Queue entry attacking "bounded variable >= bound" with prime p; nullopt
/// when p^k would exceed max_modulus.
inline std::optional<ModulusCandidate> make_candidate(const EquationInstance& e, Mode mode, u64 p,
                                                      u64 bound, u64 max_modulus = arith::kModulusCap) {
  const u64 zero_base = detail::power_base(e, bounded_variable(mode));
  const unsigned v = arith::p_adic_valuation(zero_base, p);
  if (v == 0 || bound == 0 || bound > 62) return std::nullopt;
  const u64 k = bound * v;
  if (k > 62) return std::nullopt;
  const auto m = arith::checked_pow(p, k, std::min(max_modulus, arith::kModulusCap));
  if (!m) return std::nullopt;
  return ModulusCandidate{mode, p, bound, static_cast<unsigned>(k), *m};
}

inline ExclusionResult exclusion_step(const EquationInstance& e, const ModulusCandidate& cand,
                                      u64 max_modulus = arith::kModulusCap) {
  if (cand.modulus > max_modulus || cand.modulus > arith::kModulusCap || cand.modulus < 2)
    return Degenerate{};
  const Variable surviving = constrained_variable(cand.mode);
  const u64 base = detail::power_base(e, surviving);
  const u64 m = cand.modulus;
  const u64 target = surviving == Variable::X ? (m - e.b % m) % m : e.b % m;
  const auto xr = arith::cycle_discrete_log(base, target, m);
  if (!xr) return DirectExclusion{};
  const u64 period = arith::multiplicative_order(base, m).order;
  return Conditional{Constraint{surviving, *xr, period, m, target}};
}

/// Tests a single candidate prime against a constraint. Returns the witness
/// when the shifted value set misses the other side's power cycle.
inline std::optional<MagicPrimeWitness> try_magic_prime(const EquationInstance& e,
                                                        const Constraint& con, u64 prime) {
  if (prime < 3 || e.a % prime == 0 || e.b % prime == 0 || e.c % prime == 0) return std::nullopt;
  const Variable surviving = con.variable;
  const u64 cbase = detail::power_base(e, surviving);
  const u64 obase = detail::power_base(e, other(surviving));
  const u64 corder = arith::multiplicative_order(cbase, prime).order;
  const u64 lifted = arith::lcm(con.period, corder);
  const u64 count = lifted / con.period;
  if (count > (u64{1} << 20)) return std::nullopt;
  const u64 oorder = arith::multiplicative_order(obase, prime).order;
  const u64 b = e.b % prime;
  const bool add = surviving == Variable::X;

  // (Z/PZ)* is cyclic, so the subgroup generated by obase is exactly the set
  // of units whose oorder-th power is 1.
  MagicPrimeWitness w;
  w.prime = prime;
  w.lifted_period = lifted;
  w.constrained_order = corder;
  w.other_side_order = oorder;
  const u64 step = arith::mod_pow(cbase, con.period, prime);
  u64 value = arith::mod_pow(cbase, con.residue, prime);
  for (u64 j = 0; j < count; ++j) {
    const u64 shifted = add ? (value + b) % prime : (value + prime - b) % prime;
    if (shifted != 0 && arith::mod_pow(shifted, oorder, prime) == 1) return std::nullopt;
    w.lifted_residues.push_back(con.residue + j * con.period);
    w.power_values.push_back(value);
    w.shifted_values.push_back(shifted);
    value = arith::mul_mod(value, step, prime);
  }
  w.disjoint = true;
  return w;
}

/// Walks primes P = nK + 1 (K the constraint period) until one is magic or
/// the budget runs out. Candidates dividing a, b or c are skipped without
/// counting against the budget. `tried`, when given, receives every prime
/// actually tested.
inline std::optional<MagicPrimeWitness> magic_prime_search(const EquationInstance& e,
                                                           const Constraint& con,
                                                           const SearchBudget& budget,
                                                           std::vector<u64>* tried = nullptr) {
  arith::PrimesInProgression primes(con.period);
  u64 used = 0;
  while (used < budget.max_primes) {
    const auto p = primes.next(budget.prime_cap);
    if (!p) break;
    if (e.a % *p == 0 || e.b % *p == 0 || e.c % *p == 0) continue;
    ++used;
    if (tried) tried->push_back(*p);
    if (auto w = try_magic_prime(e, con, *p)) return w;
  }
  return std::nullopt;
}

/// Complete solution list given a proof that `bounded` < bound.
inline SolutionList final_enumeration(const EquationInstance& e, Variable bounded, u64 bound) {
  SolutionList out = bounded == Variable::Y ? solutions_with_y_below(e, bound)
                                            : solutions_with_x_below(e, bound);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

struct QueueOrder {
  // std::priority_queue pops the largest element, so invert: smaller modulus
  // first, then Forward before Backward, then smaller prime.
  bool operator()(const ModulusCandidate& l, const ModulusCandidate& r) const {
    const auto key = [](const ModulusCandidate& c) {
      return std::tuple(c.modulus, c.mode == Mode::Forward ? 0 : 1, c.prime);
    };
    return key(l) > key(r);
  }
};

inline std::string attempt_line(const EquationInstance& e, const ModulusCandidate& c) {
  const Variable v = bounded_variable(c.mode);
  return "Trying to disprove " + std::string(to_string(v)) + " >= " + std::to_string(c.bound) +
         " with prime factor " + std::to_string(c.prime) + " of " +
         std::to_string(v == Variable::Y ? e.c : e.a) + " ...";
}

}  // namespace detail

inline SolveResult solve(const EquationInstance& e, const SolverConfig& cfg = {}) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  SolveResult result;
  const auto finish_timing = [&] {
    result.effort.wall_time = std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - start);
  };

  result.classification = classify(e);
  const Classification& cls = result.classification;
  if (cls.tag != ClassTag::ClassII) {
    const bool bounded = cls.tag == ClassTag::TypeI_iii_Bounded || cls.tag == ClassTag::TypeI_iii_NoSolution;
    result.solutions = bounded ? bounded_case_solutions(e, cls) : SolutionList{};
    result.certificate = build_certificate(e, cls, std::nullopt, result.solutions);
    result.status = SolveStatus::Solved;
    finish_timing();
    return result;
  }

  const SolutionList known = initial_search(e, cfg.ceiling);
  u64 x_max = 0, y_max = 0;
  for (const auto& s : known) {
    x_max = std::max(x_max, s.x);
    y_max = std::max(y_max, s.y);
  }

  std::priority_queue<ModulusCandidate, std::vector<ModulusCandidate>, detail::QueueOrder> queue;
  for (u64 p : arith::factorize(e.c).primes())
    if (auto c = make_candidate(e, Mode::Forward, p, y_max + 1, cfg.max_modulus)) queue.push(*c);
  for (u64 q : arith::factorize(e.a).primes())
    if (auto c = make_candidate(e, Mode::Backward, q, x_max + 1, cfg.max_modulus)) queue.push(*c);

  const SearchBudget budget{cfg.prime_budget, cfg.prime_cap};
  while (!queue.empty()) {
    if (result.effort.moduli_tried >= cfg.max_pops) break;
    if (cfg.wall_clock_limit && clock::now() - start > *cfg.wall_clock_limit) break;
    const ModulusCandidate cand = queue.top();
    queue.pop();
    ++result.effort.moduli_tried;
    result.attempts.push_back(cand);
    result.trace.push_back(detail::attempt_line(e, cand));

    const ExclusionResult step = exclusion_step(e, cand, cfg.max_modulus);
    if (std::holds_alternative<Degenerate>(step)) continue;

    std::optional<ExclusionOutcome> outcome;
    if (std::holds_alternative<DirectExclusion>(step)) {
      outcome = ExclusionOutcome{cand, std::nullopt, std::nullopt};
    } else {
      const Constraint& con = std::get<Conditional>(step).constraint;
      if (con.period >= cfg.min_period) {
        std::vector<u64> tried;
        auto w = magic_prime_search(e, con, budget, &tried);
        result.effort.primes_tried += tried.size();
        for (u64 p : tried) result.trace.push_back("Trying prime " + std::to_string(p) + "...");
        if (w) outcome = ExclusionOutcome{cand, con, std::move(w)};
      }
    }

    if (outcome) {
      const Variable bounded = bounded_variable(cand.mode);
      SolutionList sols = final_enumeration(e, bounded, cand.bound);
      for (const auto& s : known)
        if (!std::binary_search(sols.begin(), sols.end(), s))
          throw CertificateInconsistency("exclusion contradicts a solution found by the initial search");
      result.trace.push_back("Succeeded.");
      result.certificate = build_certificate(e, cls, outcome, sols);
      result.solutions = std::move(sols);
      result.status = SolveStatus::Solved;
      finish_timing();
      return result;
    }

    if (auto next = make_candidate(e, cand.mode, cand.prime, cand.bound + 1, cfg.max_modulus))
      queue.push(*next);
  }

  result.status = SolveStatus::Unresolved;
  result.solutions = known;
  finish_timing();
  return result;
}

}  // namespace expodio
