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

// Proof certificates.
//
// A certificate is a list of claims, each naming the revalidator that
// re-establishes it by direct computation ("pow_mod_eq_zero",
// "observe_mod_cycle", ...), its parameters and the indices of earlier claims
// it depends on. The hypotheses x >= 1, y >= 1 and the equation itself are
// implicit premises of every claim. Claims that consume the equation restate
// it, so a certificate cannot be silently re-targeted at another instance.
//
// The canonical serialized form is a JSON document with a fixed key order;
// re-serializing a parsed certificate is byte-identical.

#pragma once

#include <array>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <openssl/evp.h>

#include "expodio/arith.hpp"
#include "expodio/types.hpp"
#include "json.hpp"

namespace expodio {

using Json = nlohmann::ordered_json;

enum class ClaimKind {
  PowModEqZero,
  ObserveModCycle,
  UtilizeModCycle,
  ComputeModAdd,
  ComputeModSub,
  ExhaustModCycle,
  Enumeration,
  Unknown,
};

inline constexpr std::string_view to_string(ClaimKind k) {
  switch (k) {
    case ClaimKind::PowModEqZero: return "pow_mod_eq_zero";
    case ClaimKind::ObserveModCycle: return "observe_mod_cycle";
    case ClaimKind::UtilizeModCycle: return "utilize_mod_cycle";
    case ClaimKind::ComputeModAdd: return "compute_mod_add";
    case ClaimKind::ComputeModSub: return "compute_mod_sub";
    case ClaimKind::ExhaustModCycle: return "exhaust_mod_cycle";
    case ClaimKind::Enumeration: return "diophantine1_enumeration";
    case ClaimKind::Unknown: return "unknown";
  }
  return "unknown";
}

inline ClaimKind claim_kind_from_string(std::string_view s) {
  for (auto k : {ClaimKind::PowModEqZero, ClaimKind::ObserveModCycle, ClaimKind::UtilizeModCycle,
                 ClaimKind::ComputeModAdd, ClaimKind::ComputeModSub, ClaimKind::ExhaustModCycle,
                 ClaimKind::Enumeration})
    if (to_string(k) == s) return k;
  return ClaimKind::Unknown;
}

/// variable >= threshold  ==>  base^variable = 0 (mod modulus)
struct PowModEqZero {
  Variable variable = Variable::X;
  u64 base = 0;
  u64 modulus = 0;
  u64 threshold = 1;

  friend bool operator==(const PowModEqZero&, const PowModEqZero&) = default;
};

/// base^variable = target (mod modulus), read off the equation once the other
/// side vanishes. Either impossible (contradiction) or equivalent to
/// variable = residue (mod period).
struct ObserveModCycle {
  Variable variable = Variable::X;
  u64 base = 0;
  u64 modulus = 0;
  u64 target = 0;
  bool contradiction = true;
  std::optional<u64> residue;
  std::optional<u64> period;
  EquationInstance equation;

  friend bool operator==(const ObserveModCycle&, const ObserveModCycle&) = default;
};

/// variable = residue (mod period)  ==>  base^variable mod prime is in values.
struct UtilizeModCycle {
  Variable variable = Variable::X;
  u64 base = 0;
  u64 residue = 0;
  u64 period = 1;
  u64 prime = 0;
  u64 lifted_period = 0;
  std::vector<u64> lifted_residues;
  std::vector<u64> values;

  friend bool operator==(const UtilizeModCycle&, const UtilizeModCycle&) = default;
};

/// Shifts the premise's value list by b through the equation (add for
/// c^y = a^x + b, sub for a^x = c^y - b).
struct ComputeModShift {
  Variable variable = Variable::Y;
  u64 base = 0;
  u64 prime = 0;
  u64 shift = 0;
  std::vector<u64> values;
  EquationInstance equation;

  friend bool operator==(const ComputeModShift&, const ComputeModShift&) = default;
};

/// base^variable mod prime in values is impossible for variable >= 1.
struct ExhaustModCycle {
  Variable variable = Variable::Y;
  u64 base = 0;
  u64 prime = 0;
  std::vector<u64> values;

  friend bool operator==(const ExhaustModCycle&, const ExhaustModCycle&) = default;
};

enum class BoundVariable { X, Y, Either };

inline constexpr std::string_view to_string(BoundVariable v) {
  switch (v) {
    case BoundVariable::X: return "x";
    case BoundVariable::Y: return "y";
    case BoundVariable::Either: return "either";
  }
  return "?";
}

inline BoundVariable bound_variable_of(Variable v) {
  return v == Variable::X ? BoundVariable::X : BoundVariable::Y;
}

/// variable < bound (for Either: min(x, y) < bound)  ==>  (x, y) in solutions.
struct Enumeration {
  EquationInstance equation;
  BoundVariable variable = BoundVariable::Y;
  u64 bound = 1;
  SolutionList solutions;

  friend bool operator==(const Enumeration&, const Enumeration&) = default;
};

using ClaimParams = std::variant<std::monostate, PowModEqZero, ObserveModCycle, UtilizeModCycle,
                                 ComputeModShift, ExhaustModCycle, Enumeration>;

struct ClaimRecord {
  ClaimKind kind = ClaimKind::Unknown;
  ClaimParams params;
  std::vector<std::size_t> premises;
  std::string unknown_kind;  // original name when kind == Unknown

  friend bool operator==(const ClaimRecord&, const ClaimRecord&) = default;
};

enum class Shape {
  DivisibilityNoSolution,
  CommonFactorBound,
  DirectModularExclusion,
  MagicPrimeExclusion,
};

inline constexpr std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::DivisibilityNoSolution: return "DivisibilityNoSolution";
    case Shape::CommonFactorBound: return "CommonFactorBound";
    case Shape::DirectModularExclusion: return "DirectModularExclusion";
    case Shape::MagicPrimeExclusion: return "MagicPrimeExclusion";
  }
  return "?";
}

/// Class I types i and ii.
struct DivisibilityPayload {
  ClassTag tag = ClassTag::TypeI_i;
  u64 prime = 0;

  friend bool operator==(const DivisibilityPayload&, const DivisibilityPayload&) = default;
};

/// Class I type iii: prime^exponent divides a^x and c^y once both are at
/// least threshold, but not b.
struct CommonFactorPayload {
  ClassTag tag = ClassTag::TypeI_iii_Bounded;
  u64 common_divisor = 0;
  u64 prime = 0;
  unsigned exponent = 0;
  u64 threshold = 0;

  friend bool operator==(const CommonFactorPayload&, const CommonFactorPayload&) = default;
};

/// Class II, with or without a magic prime.
struct ModularPayload {
  ModulusCandidate candidate;
  std::optional<Constraint> constraint;
  std::optional<MagicPrimeWitness> witness;

  friend bool operator==(const ModularPayload&, const ModularPayload&) = default;
};

using ShapePayload = std::variant<DivisibilityPayload, CommonFactorPayload, ModularPayload>;

struct EnumerationBound {
  BoundVariable variable = BoundVariable::Y;
  u64 bound = 1;  // strict

  friend bool operator==(const EnumerationBound&, const EnumerationBound&) = default;
};

struct Certificate {
  EquationInstance instance;
  Shape shape = Shape::DivisibilityNoSolution;
  ShapePayload payload;
  std::optional<EnumerationBound> enumeration_bound;
  SolutionList solutions;
  std::vector<ClaimRecord> claims;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

class CertificateInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class MalformedCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Construction

/// Result of a successful modular exclusion in the solver.
struct ExclusionOutcome {
  ModulusCandidate candidate;
  std::optional<Constraint> constraint;
  std::optional<MagicPrimeWitness> witness;
};

namespace detail {

inline u64 base_of(const EquationInstance& e, Variable v) { return v == Variable::X ? e.a : e.c; }

/// Residue of the surviving side once the other side vanishes mod m.
inline u64 residual_target(const EquationInstance& e, Variable surviving, u64 m) {
  const u64 b = e.b % m;
  return surviving == Variable::X ? (m - b) % m : b;
}

inline void require(bool ok, const char* what) {
  if (!ok) throw CertificateInconsistency(what);
}

inline void check_solutions_below(const SolutionList& sols, BoundVariable v, u64 bound) {
  for (const auto& s : sols) {
    const bool ok = v == BoundVariable::X   ? s.x < bound
                    : v == BoundVariable::Y ? s.y < bound
                                            : std::min(s.x, s.y) < bound;
    require(ok, "known solution violates the exclusion bound");
  }
}

}  // namespace detail

/// Assembles the claim chain for a finished solve. `exclusion` is required for
/// Class II and ignored otherwise; `solutions` is the complete solution list.
inline Certificate build_certificate(const EquationInstance& e, const Classification& cls,
                                     const std::optional<ExclusionOutcome>& exclusion,
                                     const SolutionList& solutions) {
  using detail::require;
  Certificate cert;
  cert.instance = e;
  cert.solutions = solutions;

  switch (cls.tag) {
    case ClassTag::TypeI_i:
    case ClassTag::TypeI_ii: {
      require(cls.witness_prime.has_value(), "divisibility case without witness prime");
      require(solutions.empty(), "divisibility case cannot have solutions");
      const u64 p = *cls.witness_prime;
      const Variable vanishing = cls.tag == ClassTag::TypeI_i ? Variable::Y : Variable::X;
      const Variable surviving = other(vanishing);
      cert.shape = Shape::DivisibilityNoSolution;
      cert.payload = DivisibilityPayload{cls.tag, p};
      cert.claims.push_back({ClaimKind::PowModEqZero,
                             PowModEqZero{vanishing, detail::base_of(e, vanishing), p, 1},
                             {}, {}});
      cert.claims.push_back(
          {ClaimKind::ObserveModCycle,
           ObserveModCycle{surviving, detail::base_of(e, surviving), p,
                           detail::residual_target(e, surviving, p), true, std::nullopt,
                           std::nullopt, e},
           {0}, {}});
      return cert;
    }
    case ClassTag::TypeI_iii_NoSolution:
    case ClassTag::TypeI_iii_Bounded: {
      require(cls.witness_prime && cls.modulus_exponent && cls.common_divisor && cls.bound,
              "common-factor case missing witness data");
      const u64 p = *cls.witness_prime;
      const unsigned k = *cls.modulus_exponent;
      const u64 threshold = *cls.bound + 1;
      const auto m = arith::checked_pow(p, k, arith::kModulusCap);
      require(m.has_value(), "common-factor modulus exceeds cap");
      detail::check_solutions_below(solutions, BoundVariable::Either, threshold);
      cert.shape = Shape::CommonFactorBound;
      cert.payload = CommonFactorPayload{cls.tag, *cls.common_divisor, p, k, threshold};
      cert.enumeration_bound = EnumerationBound{BoundVariable::Either, threshold};
      cert.claims.push_back({ClaimKind::PowModEqZero, PowModEqZero{Variable::X, e.a, *m, threshold}, {}, {}});
      cert.claims.push_back({ClaimKind::PowModEqZero, PowModEqZero{Variable::Y, e.c, *m, threshold}, {}, {}});
      cert.claims.push_back({ClaimKind::Enumeration,
                             Enumeration{e, BoundVariable::Either, threshold, solutions},
                             {0, 1}, {}});
      return cert;
    }
    case ClassTag::ClassII:
      break;
  }

  require(exclusion.has_value(), "Class II certificate needs an exclusion outcome");
  const ModulusCandidate& cand = exclusion->candidate;
  const Variable vanishing = bounded_variable(cand.mode);
  const Variable surviving = other(vanishing);
  const u64 m = cand.modulus;
  const u64 target = detail::residual_target(e, surviving, m);
  const BoundVariable bv = bound_variable_of(vanishing);
  detail::check_solutions_below(solutions, bv, cand.bound);

  cert.payload = ModularPayload{cand, exclusion->constraint, exclusion->witness};
  cert.enumeration_bound = EnumerationBound{bv, cand.bound};
  cert.claims.push_back({ClaimKind::PowModEqZero,
                         PowModEqZero{vanishing, detail::base_of(e, vanishing), m, cand.bound},
                         {}, {}});

  if (!exclusion->constraint) {
    require(!exclusion->witness.has_value(), "witness without constraint");
    cert.shape = Shape::DirectModularExclusion;
    cert.claims.push_back({ClaimKind::ObserveModCycle,
                           ObserveModCycle{surviving, detail::base_of(e, surviving), m, target, true,
                                           std::nullopt, std::nullopt, e},
                           {0}, {}});
    cert.claims.push_back({ClaimKind::Enumeration, Enumeration{e, bv, cand.bound, solutions}, {1}, {}});
    return cert;
  }

  require(exclusion->witness.has_value(), "constraint without magic prime witness");
  const Constraint& con = *exclusion->constraint;
  const MagicPrimeWitness& w = *exclusion->witness;
  require(con.variable == surviving, "constraint on the wrong variable");
  require(con.source_modulus == m && con.source_target == target, "constraint source mismatch");
  require(w.disjoint, "witness is not disjoint");

  cert.shape = Shape::MagicPrimeExclusion;
  const u64 cbase = detail::base_of(e, surviving);
  const u64 obase = detail::base_of(e, vanishing);
  cert.claims.push_back({ClaimKind::ObserveModCycle,
                         ObserveModCycle{surviving, cbase, m, target, false, con.residue, con.period, e},
                         {0}, {}});
  cert.claims.push_back({ClaimKind::UtilizeModCycle,
                         UtilizeModCycle{surviving, cbase, con.residue, con.period, w.prime,
                                         w.lifted_period, w.lifted_residues, w.power_values},
                         {1}, {}});
  cert.claims.push_back({surviving == Variable::X ? ClaimKind::ComputeModAdd : ClaimKind::ComputeModSub,
                         ComputeModShift{vanishing, obase, w.prime, e.b, w.shifted_values, e},
                         {2}, {}});
  cert.claims.push_back({ClaimKind::ExhaustModCycle,
                         ExhaustModCycle{vanishing, obase, w.prime, w.shifted_values}, {3}, {}});
  cert.claims.push_back({ClaimKind::Enumeration, Enumeration{e, bv, cand.bound, solutions}, {4}, {}});
  return cert;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline Json instance_json(const EquationInstance& e) {
  Json j;
  j["a"] = e.a;
  j["b"] = e.b;
  j["c"] = e.c;
  return j;
}

inline Json solutions_json(const SolutionList& sols) {
  Json arr = Json::array();
  for (const auto& s : sols) arr.push_back(Json::array({s.x, s.y}));
  return arr;
}

inline Json list_json(const std::vector<u64>& v) {
  Json arr = Json::array();
  for (u64 x : v) arr.push_back(x);
  return arr;
}

struct ParamsToJson {
  Json operator()(const std::monostate&) const { return Json::object(); }
  Json operator()(const PowModEqZero& p) const {
    Json j;
    j["variable"] = to_string(p.variable);
    j["base"] = p.base;
    j["modulus"] = p.modulus;
    j["threshold"] = p.threshold;
    return j;
  }
  Json operator()(const ObserveModCycle& p) const {
    Json j;
    j["variable"] = to_string(p.variable);
    j["base"] = p.base;
    j["modulus"] = p.modulus;
    j["target"] = p.target;
    j["contradiction"] = p.contradiction;
    if (p.residue) j["residue"] = *p.residue;
    if (p.period) j["period"] = *p.period;
    j["equation"] = instance_json(p.equation);
    return j;
  }
  Json operator()(const UtilizeModCycle& p) const {
    Json j;
    j["variable"] = to_string(p.variable);
    j["base"] = p.base;
    j["residue"] = p.residue;
    j["period"] = p.period;
    j["prime"] = p.prime;
    j["lifted_period"] = p.lifted_period;
    j["lifted_residues"] = list_json(p.lifted_residues);
    j["values"] = list_json(p.values);
    return j;
  }
  Json operator()(const ComputeModShift& p) const {
    Json j;
    j["variable"] = to_string(p.variable);
    j["base"] = p.base;
    j["prime"] = p.prime;
    j["shift"] = p.shift;
    j["values"] = list_json(p.values);
    j["equation"] = instance_json(p.equation);
    return j;
  }
  Json operator()(const ExhaustModCycle& p) const {
    Json j;
    j["variable"] = to_string(p.variable);
    j["base"] = p.base;
    j["prime"] = p.prime;
    j["values"] = list_json(p.values);
    return j;
  }
  Json operator()(const Enumeration& p) const {
    Json j;
    j["equation"] = instance_json(p.equation);
    j["variable"] = to_string(p.variable);
    j["bound"] = p.bound;
    j["solutions"] = solutions_json(p.solutions);
    return j;
  }
};

struct PayloadToJson {
  Json operator()(const DivisibilityPayload& p) const {
    Json j;
    j["tag"] = to_string(p.tag);
    j["prime"] = p.prime;
    return j;
  }
  Json operator()(const CommonFactorPayload& p) const {
    Json j;
    j["tag"] = to_string(p.tag);
    j["common_divisor"] = p.common_divisor;
    j["prime"] = p.prime;
    j["exponent"] = p.exponent;
    j["threshold"] = p.threshold;
    return j;
  }
  Json operator()(const ModularPayload& p) const {
    Json j;
    j["mode"] = to_string(p.candidate.mode);
    j["prime"] = p.candidate.prime;
    j["bound"] = p.candidate.bound;
    j["exponent"] = p.candidate.exponent;
    j["modulus"] = p.candidate.modulus;
    if (p.constraint) {
      Json c;
      c["variable"] = to_string(p.constraint->variable);
      c["residue"] = p.constraint->residue;
      c["period"] = p.constraint->period;
      c["source_modulus"] = p.constraint->source_modulus;
      c["source_target"] = p.constraint->source_target;
      j["constraint"] = c;
    }
    if (p.witness) {
      const auto& w = *p.witness;
      Json m;
      m["prime"] = w.prime;
      m["lifted_period"] = w.lifted_period;
      m["lifted_residues"] = list_json(w.lifted_residues);
      m["power_values"] = list_json(w.power_values);
      m["shifted_values"] = list_json(w.shifted_values);
      m["constrained_order"] = w.constrained_order;
      m["other_side_order"] = w.other_side_order;
      m["disjoint"] = w.disjoint;
      j["witness"] = m;
    }
    return j;
  }
};

}  // namespace detail

inline Json to_json(const Certificate& cert) {
  Json j;
  j["instance"] = detail::instance_json(cert.instance);
  j["shape"] = to_string(cert.shape);
  j["payload"] = std::visit(detail::PayloadToJson{}, cert.payload);
  if (cert.enumeration_bound) {
    Json eb;
    eb["variable"] = to_string(cert.enumeration_bound->variable);
    eb["bound"] = cert.enumeration_bound->bound;
    j["enumeration_bound"] = eb;
  } else {
    j["enumeration_bound"] = nullptr;
  }
  j["solutions"] = detail::solutions_json(cert.solutions);
  Json claims = Json::array();
  for (const auto& c : cert.claims) {
    Json cj;
    cj["kind"] = c.kind == ClaimKind::Unknown ? c.unknown_kind : std::string(to_string(c.kind));
    cj["params"] = std::visit(detail::ParamsToJson{}, c.params);
    Json prem = Json::array();
    for (auto i : c.premises) prem.push_back(i);
    cj["premises"] = prem;
    claims.push_back(cj);
  }
  j["claims"] = claims;
  return j;
}

inline std::string serialize(const Certificate& cert) { return to_json(cert).dump(2) + "\n"; }

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw MalformedCertificate(std::string("expected object around '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw MalformedCertificate(std::string("missing field '") + key + "'");
  return *it;
}

inline u64 as_u64(const Json& j, const char* what) {
  if (!j.is_number_unsigned()) throw MalformedCertificate(std::string("field '") + what + "' must be a nonnegative integer");
  return j.get<u64>();
}

inline u64 u64_field(const Json& j, const char* key) { return as_u64(field(j, key), key); }

inline bool bool_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_boolean()) throw MalformedCertificate(std::string("field '") + key + "' must be boolean");
  return v.get<bool>();
}

inline std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw MalformedCertificate(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<u64> list_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw MalformedCertificate(std::string("field '") + key + "' must be a list");
  std::vector<u64> out;
  for (const auto& x : v) out.push_back(as_u64(x, key));
  return out;
}

inline Variable variable_field(const Json& j, const char* key) {
  const auto s = string_field(j, key);
  if (s == "x") return Variable::X;
  if (s == "y") return Variable::Y;
  throw MalformedCertificate("bad variable '" + s + "'");
}

inline BoundVariable bound_variable_field(const Json& j, const char* key) {
  const auto s = string_field(j, key);
  if (s == "x") return BoundVariable::X;
  if (s == "y") return BoundVariable::Y;
  if (s == "either") return BoundVariable::Either;
  throw MalformedCertificate("bad bound variable '" + s + "'");
}

inline ClassTag tag_field(const Json& j, const char* key) {
  const auto s = string_field(j, key);
  if (auto t = class_tag_from_string(s)) return *t;
  throw MalformedCertificate("bad class tag '" + s + "'");
}

inline EquationInstance instance_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  return {u64_field(v, "a"), u64_field(v, "b"), u64_field(v, "c")};
}

inline SolutionList solutions_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw MalformedCertificate("solutions must be a list");
  SolutionList out;
  for (const auto& s : v) {
    if (!s.is_array() || s.size() != 2) throw MalformedCertificate("solution must be a pair");
    out.push_back({as_u64(s[0], "x"), as_u64(s[1], "y")});
  }
  return out;
}

inline ClaimParams params_from_json(ClaimKind kind, const Json& j) {
  switch (kind) {
    case ClaimKind::PowModEqZero:
      return PowModEqZero{variable_field(j, "variable"), u64_field(j, "base"),
                          u64_field(j, "modulus"), u64_field(j, "threshold")};
    case ClaimKind::ObserveModCycle: {
      ObserveModCycle p;
      p.variable = variable_field(j, "variable");
      p.base = u64_field(j, "base");
      p.modulus = u64_field(j, "modulus");
      p.target = u64_field(j, "target");
      p.contradiction = bool_field(j, "contradiction");
      if (j.contains("residue")) p.residue = u64_field(j, "residue");
      if (j.contains("period")) p.period = u64_field(j, "period");
      p.equation = instance_field(j, "equation");
      return p;
    }
    case ClaimKind::UtilizeModCycle:
      return UtilizeModCycle{variable_field(j, "variable"), u64_field(j, "base"),
                             u64_field(j, "residue"),      u64_field(j, "period"),
                             u64_field(j, "prime"),        u64_field(j, "lifted_period"),
                             list_field(j, "lifted_residues"), list_field(j, "values")};
    case ClaimKind::ComputeModAdd:
    case ClaimKind::ComputeModSub:
      return ComputeModShift{variable_field(j, "variable"), u64_field(j, "base"),
                             u64_field(j, "prime"),        u64_field(j, "shift"),
                             list_field(j, "values"),      instance_field(j, "equation")};
    case ClaimKind::ExhaustModCycle:
      return ExhaustModCycle{variable_field(j, "variable"), u64_field(j, "base"),
                             u64_field(j, "prime"), list_field(j, "values")};
    case ClaimKind::Enumeration:
      return Enumeration{instance_field(j, "equation"), bound_variable_field(j, "variable"),
                         u64_field(j, "bound"), solutions_field(j, "solutions")};
    case ClaimKind::Unknown:
      break;
  }
  return std::monostate{};
}

inline unsigned exponent_field(const Json& j, const char* key) {
  const u64 v = u64_field(j, key);
  if (v > 64) throw MalformedCertificate("exponent out of range");
  return static_cast<unsigned>(v);
}

}  // namespace detail

inline Certificate certificate_from_json(const Json& j) {
  using namespace detail;
  Certificate cert;
  cert.instance = instance_field(j, "instance");
  const auto shape = string_field(j, "shape");
  const Json& payload = field(j, "payload");
  if (shape == "DivisibilityNoSolution") {
    cert.shape = Shape::DivisibilityNoSolution;
    cert.payload = DivisibilityPayload{tag_field(payload, "tag"), u64_field(payload, "prime")};
  } else if (shape == "CommonFactorBound") {
    cert.shape = Shape::CommonFactorBound;
    cert.payload = CommonFactorPayload{tag_field(payload, "tag"), u64_field(payload, "common_divisor"),
                                       u64_field(payload, "prime"), exponent_field(payload, "exponent"),
                                       u64_field(payload, "threshold")};
  } else if (shape == "DirectModularExclusion" || shape == "MagicPrimeExclusion") {
    cert.shape = shape == "DirectModularExclusion" ? Shape::DirectModularExclusion
                                                   : Shape::MagicPrimeExclusion;
    ModularPayload mp;
    const auto mode = string_field(payload, "mode");
    if (mode != "Forward" && mode != "Backward") throw MalformedCertificate("bad mode '" + mode + "'");
    mp.candidate.mode = mode == "Forward" ? Mode::Forward : Mode::Backward;
    mp.candidate.prime = u64_field(payload, "prime");
    mp.candidate.bound = u64_field(payload, "bound");
    mp.candidate.exponent = exponent_field(payload, "exponent");
    mp.candidate.modulus = u64_field(payload, "modulus");
    if (payload.contains("constraint")) {
      const Json& c = payload["constraint"];
      mp.constraint = Constraint{variable_field(c, "variable"), u64_field(c, "residue"),
                                 u64_field(c, "period"), u64_field(c, "source_modulus"),
                                 u64_field(c, "source_target")};
    }
    if (payload.contains("witness")) {
      const Json& w = payload["witness"];
      mp.witness = MagicPrimeWitness{u64_field(w, "prime"),
                                     u64_field(w, "lifted_period"),
                                     list_field(w, "lifted_residues"),
                                     list_field(w, "power_values"),
                                     list_field(w, "shifted_values"),
                                     u64_field(w, "constrained_order"),
                                     u64_field(w, "other_side_order"),
                                     bool_field(w, "disjoint")};
    }
    cert.payload = mp;
  } else {
    throw MalformedCertificate("unknown shape '" + shape + "'");
  }

  const Json& eb = field(j, "enumeration_bound");
  if (!eb.is_null())
    cert.enumeration_bound = EnumerationBound{bound_variable_field(eb, "variable"), u64_field(eb, "bound")};
  cert.solutions = solutions_field(j, "solutions");

  const Json& claims = field(j, "claims");
  if (!claims.is_array()) throw MalformedCertificate("claims must be a list");
  for (const auto& cj : claims) {
    ClaimRecord rec;
    const auto kind = string_field(cj, "kind");
    rec.kind = claim_kind_from_string(kind);
    if (rec.kind == ClaimKind::Unknown) rec.unknown_kind = kind;
    rec.params = params_from_json(rec.kind, field(cj, "params"));
    const Json& prem = field(cj, "premises");
    if (!prem.is_array()) throw MalformedCertificate("premises must be a list");
    for (const auto& p : prem) rec.premises.push_back(static_cast<std::size_t>(as_u64(p, "premises")));
    cert.claims.push_back(std::move(rec));
  }
  return cert;
}

/// Parses the canonical text form; throws MalformedCertificate on any
/// syntax or schema error.
inline Certificate parse_certificate(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedCertificate(std::string("not a JSON document: ") + e.what());
  }
  return certificate_from_json(j);
}

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::string out;
  out.reserve(len * 2);
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

/// Hex SHA-256 of the canonical serialization.
inline std::string digest(const Certificate& cert) { return sha256_hex(serialize(cert)); }

}  // namespace expodio
