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

// Elementary divisibility analysis for instances whose parameters are not
// pairwise coprime.
//
// Priority: a common factor of a and c is handled first (it bounds
// min(x, y) through a prime power that divides both sides but not b), then a
// prime shared by b and c (a^x would vanish modulo it), then a prime shared by
// a and b (c^y would vanish). Everything else is pairwise coprime.

#pragma once

#include <numeric>
#include <stdexcept>

#include "expodio/arith.hpp"
#include "expodio/enumerate.hpp"
#include "expodio/types.hpp"

namespace expodio {

namespace detail {

inline u64 smallest_prime_factor(u64 n) { return arith::factorize(n).factors.front().prime; }

}  // namespace detail

inline Classification classify(const EquationInstance& e) {
  e.validate();
  Classification out;

  if (const u64 d = std::gcd(e.a, e.c); d > 1) {
    out.common_divisor = d;
    if (e.b % d != 0) {
      // Some p^k with k <= v_p(d) does not divide b, and it divides a^x and
      // c^y for every x, y >= 1.
      out.tag = ClassTag::TypeI_iii_NoSolution;
      for (const auto& f : arith::factorize(d).factors) {
        const unsigned vb = arith::p_adic_valuation(e.b, f.prime);
        if (vb < f.exponent) {
          out.witness_prime = f.prime;
          out.modulus_exponent = vb + 1;
          break;
        }
      }
      out.bound = 0;
    } else {
      out.tag = ClassTag::TypeI_iii_Bounded;
      const u64 p = detail::smallest_prime_factor(d);
      const unsigned k = arith::p_adic_valuation(e.b, p) + 1;
      out.witness_prime = p;
      out.modulus_exponent = k;
      out.bound = k - 1;
    }
    return out;
  }
  if (const u64 g = std::gcd(e.b, e.c); g > 1) {
    out.tag = ClassTag::TypeI_i;
    out.witness_prime = detail::smallest_prime_factor(g);
    return out;
  }
  if (const u64 g = std::gcd(e.a, e.b); g > 1) {
    out.tag = ClassTag::TypeI_ii;
    out.witness_prime = detail::smallest_prime_factor(g);
    return out;
  }
  out.tag = ClassTag::ClassII;
  return out;
}

/// Complete solution list for a common-factor instance: min(x, y) <= bound,
/// so enumerate each variable up to the bound against the other side.
inline SolutionList bounded_case_solutions(const EquationInstance& e,
                                           const Classification& cls) {
  if (cls.tag != ClassTag::TypeI_iii_Bounded && cls.tag != ClassTag::TypeI_iii_NoSolution)
    throw std::invalid_argument("bounded_case_solutions needs a common-factor classification");
  const u64 m = cls.bound.value_or(0);
  return merge_solutions(solutions_with_x_below(e, m + 1), solutions_with_y_below(e, m + 1));
}

}  // namespace expodio
