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

// Value types shared by the solver, the certificate model and the verifier.
// Nothing in here performs any search.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace expodio {

using u64 = std::uint64_t;

/// Parameters are capped so that sums such as a^x + b reduced modulo a
/// 62-bit modulus never overflow.
inline constexpr u64 kMaxParameter = u64{1} << 32;

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The equation a^x + b = c^y over positive integers x, y.
struct EquationInstance {
  u64 a = 2;
  u64 b = 1;
  u64 c = 2;

  static EquationInstance make(u64 a, u64 b, u64 c) {
    EquationInstance e{a, b, c};
    e.validate();
    return e;
  }

  void validate() const {
    if (a < 2) throw InvalidInstance("a must be >= 2");
    if (c < 2) throw InvalidInstance("c must be >= 2");
    if (b < 1) throw InvalidInstance("b must be >= 1");
    if (a >= kMaxParameter || b >= kMaxParameter || c >= kMaxParameter)
      throw InvalidInstance("parameters must be below 2^32");
  }

  std::string to_string() const {
    return std::to_string(a) + " ^ x + " + std::to_string(b) + " = " +
           std::to_string(c) + " ^ y";
  }

  friend auto operator<=>(const EquationInstance&, const EquationInstance&) = default;
};

struct Solution {
  u64 x = 0;
  u64 y = 0;

  friend auto operator<=>(const Solution&, const Solution&) = default;
};

using SolutionList = std::vector<Solution>;

enum class Variable { X, Y };

inline constexpr std::string_view to_string(Variable v) {
  return v == Variable::X ? "x" : "y";
}

inline Variable other(Variable v) { return v == Variable::X ? Variable::Y : Variable::X; }

/// Forward works modulo powers of a prime of c (assumes y large, constrains
/// x); Backward works modulo powers of a prime of a.
enum class Mode { Forward, Backward };

inline constexpr std::string_view to_string(Mode m) {
  return m == Mode::Forward ? "Forward" : "Backward";
}

/// Variable whose power vanishes modulo p^k under the mode's assumption.
inline Variable bounded_variable(Mode m) {
  return m == Mode::Forward ? Variable::Y : Variable::X;
}

/// Variable constrained by the congruence that remains.
inline Variable constrained_variable(Mode m) { return other(bounded_variable(m)); }

enum class ClassTag { TypeI_i, TypeI_ii, TypeI_iii_NoSolution, TypeI_iii_Bounded, ClassII };

inline constexpr std::string_view to_string(ClassTag t) {
  switch (t) {
    case ClassTag::TypeI_i: return "TypeI_i";
    case ClassTag::TypeI_ii: return "TypeI_ii";
    case ClassTag::TypeI_iii_NoSolution: return "TypeI_iii_NoSolution";
    case ClassTag::TypeI_iii_Bounded: return "TypeI_iii_Bounded";
    case ClassTag::ClassII: return "ClassII";
  }
  return "?";
}

inline std::optional<ClassTag> class_tag_from_string(std::string_view s) {
  for (auto t : {ClassTag::TypeI_i, ClassTag::TypeI_ii, ClassTag::TypeI_iii_NoSolution,
                 ClassTag::TypeI_iii_Bounded, ClassTag::ClassII})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

struct Classification {
  ClassTag tag = ClassTag::ClassII;
  std::optional<u64> witness_prime;
  std::optional<u64> common_divisor;
  std::optional<unsigned> modulus_exponent;
  std::optional<u64> bound;  // bound on min(x, y)
};

/// variable = residue (mod period), derived from base^variable = source_target
/// (mod source_modulus).
struct Constraint {
  Variable variable = Variable::X;
  u64 residue = 0;
  u64 period = 1;
  u64 source_modulus = 0;
  u64 source_target = 0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct MagicPrimeWitness {
  u64 prime = 0;
  u64 lifted_period = 0;
  std::vector<u64> lifted_residues;
  std::vector<u64> power_values;
  std::vector<u64> shifted_values;
  u64 constrained_order = 0;  // order of the constrained base modulo prime
  u64 other_side_order = 0;
  bool disjoint = false;

  friend bool operator==(const MagicPrimeWitness&, const MagicPrimeWitness&) = default;
};

/// One queue entry: disprove (bounded variable) >= bound modulo prime^exponent.
struct ModulusCandidate {
  Mode mode = Mode::Forward;
  u64 prime = 2;
  u64 bound = 1;
  unsigned exponent = 1;
  u64 modulus = 2;

  friend bool operator==(const ModulusCandidate&, const ModulusCandidate&) = default;
};

}  // namespace expodio
