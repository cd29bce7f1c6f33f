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

// Finite enumeration of solutions once one variable is bounded.

#pragma once

#include <algorithm>
#include <iterator>

#include "expodio/arith.hpp"
#include "expodio/types.hpp"

namespace expodio {

/// Solutions with 1 <= y < bound, found by testing c^y - b for a power of a.
inline SolutionList solutions_with_y_below(const EquationInstance& e, u64 bound) {
  SolutionList out;
  arith::BigInt cy = 1;
  for (u64 y = 1; y < bound; ++y) {
    cy *= e.c;
    if (cy <= e.b) continue;
    if (auto x = arith::exact_power_decompose(cy - e.b, e.a)) out.push_back({*x, y});
  }
  return out;
}

/// Solutions with 1 <= x < bound, found by testing a^x + b for a power of c.
inline SolutionList solutions_with_x_below(const EquationInstance& e, u64 bound) {
  SolutionList out;
  arith::BigInt ax = 1;
  for (u64 x = 1; x < bound; ++x) {
    ax *= e.a;
    if (auto y = arith::exact_power_decompose(ax + e.b, e.c)) out.push_back({x, *y});
  }
  return out;
}

/// Sorted union without duplicates.
inline SolutionList merge_solutions(SolutionList lhs, const SolutionList& rhs) {
  lhs.insert(lhs.end(), rhs.begin(), rhs.end());
  std::sort(lhs.begin(), lhs.end());
  lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
  return lhs;
}

}  // namespace expodio
