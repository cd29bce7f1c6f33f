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

// Rendering of verified certificates as prose and as Lean-syntax scripts in
// which each claim becomes an invocation of the `Claim` axiom, named by its
// revalidator. Output is a pure function of the certificate.

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "expodio/certificate.hpp"
#include "expodio/types.hpp"
#include "expodio/verify.hpp"

namespace expodio {

class EmitRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RenderedProof {
  std::string comment_block;
  std::string theorem_name;
  std::string script_body;
  std::size_t claim_count = 0;

  /// Contents of <theorem_name>.lean.
  std::string file_contents() const { return comment_block + script_body; }
};

inline constexpr std::string_view kLeanPreludeModule = "DiophantineClaim";

/// Shared declarations every emitted script imports.
inline std::string lean_prelude() {
  return "-- Claim Structure\n"
         "structure VerifiedFact where\n"
         "  prop : Prop\n"
         "  proof : prop\n"
         "\n"
         "axiom Claim (prop_to_claim : Prop)\n"
         "  (verified_facts : List VerifiedFact)\n"
         "  (revalidator : String)\n"
         "  : prop_to_claim\n";
}

inline std::string theorem_name(const EquationInstance& e) {
  return "diophantine1_" + std::to_string(e.a) + "_" + std::to_string(e.b) + "_" + std::to_string(e.c);
}

namespace emit_detail {

inline std::string join(const std::vector<u64>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::string pow_of(u64 base, Variable v) {
  return std::to_string(base) + " ^ " + std::string(to_string(v));
}

inline std::string var(Variable v) { return std::string(to_string(v)); }

inline std::string pair_list(const SolutionList& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += "(" + std::to_string(s[i].x) + ", " + std::to_string(s[i].y) + ")";
  }
  return out;
}

inline void require_verified(const Certificate& cert) {
  const Verdict v = verify_certificate(cert);
  if (!v.accepted) throw EmitRefused("refusing to render an unverified certificate: " + v.reason);
}

inline std::string header(const Certificate& cert) {
  std::string label;
  switch (cert.shape) {
    case Shape::DivisibilityNoSolution: {
      const auto& p = std::get<DivisibilityPayload>(cert.payload);
      label = p.tag == ClassTag::TypeI_i ? "Class I, Type i" : "Class I, Type ii";
      break;
    }
    case Shape::CommonFactorBound:
      label = "Class I, Type iii";
      break;
    case Shape::DirectModularExclusion:
    case Shape::MagicPrimeExclusion: {
      const auto& p = std::get<ModularPayload>(cert.payload);
      label = std::string("Class II, ") + (p.candidate.mode == Mode::Forward ? "Front" : "Back") + " Mode, ";
      label += p.witness ? "with magic prime " + std::to_string(p.witness->prime) : "no magic prime";
      break;
    }
  }
  return "(" + label + ")   " + cert.instance.to_string();
}

inline std::string conclusion(const Certificate& cert, u64 threshold) {
  if (!cert.solutions.empty())
    return "Further examination shows that (x, y) = " + pair_list(cert.solutions) + ".";
  if (threshold <= 1) return "So " + cert.instance.to_string() + " is impossible.";
  return "Further examination shows that " + cert.instance.to_string() + " is impossible.";
}

}  // namespace emit_detail

/// Prose proof, one statement per line.
inline std::string emit_text(const Certificate& cert) {
  using namespace emit_detail;
  require_verified(cert);
  const EquationInstance& e = cert.instance;
  std::ostringstream out;
  out << header(cert) << "\n";
  out << "For positive integers x, y satisfying " << e.to_string() << ",\n";

  switch (cert.shape) {
    case Shape::DivisibilityNoSolution: {
      const auto& obs = std::get<ObserveModCycle>(cert.claims[1].params);
      out << "this is impossible, because it implies that " << pow_of(obs.base, obs.variable) << " = "
          << obs.target << " (mod " << obs.modulus << ").\n";
      return out.str();
    }
    case Shape::CommonFactorBound: {
      const auto& p = std::get<CommonFactorPayload>(cert.payload);
      const auto& pow = std::get<PowModEqZero>(cert.claims[0].params);
      out << "if x >= " << p.threshold << " and y >= " << p.threshold << ",\n";
      out << e.b << " = 0 (mod " << pow.modulus << "), which is impossible.\n";
      out << "Therefore, x < " << p.threshold << " or y < " << p.threshold << ".\n";
      out << conclusion(cert, p.threshold) << "\n";
      return out.str();
    }
    case Shape::DirectModularExclusion:
    case Shape::MagicPrimeExclusion:
      break;
  }

  const auto& mp = std::get<ModularPayload>(cert.payload);
  const Variable bounded = bounded_variable(mp.candidate.mode);
  const Variable constrained = other(bounded);
  const u64 t = mp.candidate.bound;
  const auto& obs = std::get<ObserveModCycle>(cert.claims[1].params);
  out << "if " << var(bounded) << " >= " << t << ", " << pow_of(obs.base, constrained) << " = " << obs.target
      << " (mod " << obs.modulus << ").\n";

  if (!mp.witness) {
    out << "However, this is impossible.\n";
  } else {
    const Constraint& con = *mp.constraint;
    const MagicPrimeWitness& w = *mp.witness;
    const auto& ex = std::get<ExhaustModCycle>(cert.claims[4].params);
    out << "So " << var(constrained) << " = " << con.residue << " (mod " << con.period << ")";
    if (w.constrained_order != con.period) {
      std::vector<u64> reduced;
      for (u64 r : w.lifted_residues) reduced.push_back(r % w.constrained_order);
      out << ",\nwhich implies " << var(constrained) << " = " << join(reduced) << " (mod " << w.constrained_order
          << ")";
    }
    out << ".\n";
    out << "Therefore, " << pow_of(obs.base, constrained) << " = " << join(w.power_values) << " (mod " << w.prime
        << ").\n";
    out << "So " << pow_of(ex.base, bounded) << " = " << join(w.shifted_values) << " (mod " << w.prime << "),"
        << (w.shifted_values.size() > 4 ? "\n" : " ") << "but this is impossible.\n";
  }
  out << "Therefore, " << var(bounded) << " < " << t << ".\n";
  out << conclusion(cert, t) << "\n";
  return out.str();
}

namespace emit_detail {

/// Accumulates the tactic block and counts the claims it invokes.
class ScriptWriter {
 public:
  void line(const std::string& s) { out_ << "  " << s << "\n"; }

  static std::string fact(const std::string& prop, const std::string& proof, bool pad = false) {
    return std::string("  {prop := ") + (pad ? " " : "") + prop + ", proof := " + proof + "},";
  }

  // Facts about a single variable: its trivial residue and its positivity.
  std::string mod_fact(Variable v, bool pad = false) const {
    return fact(var(v) + " % 1 = 0", v == Variable::X ? "h4" : "h5", pad);
  }
  std::string positive_fact(Variable v, bool pad = false) const {
    return fact(var(v) + " >= 1", v == Variable::X ? "h1" : "h2", pad);
  }

  void claim(const std::string& name, const std::string& prop, const std::vector<std::string>& facts,
             ClaimKind kind) {
    line("have " + name + " := Claim " + prop + " [");
    for (const auto& f : facts) line(f);
    line("] \"" + std::string(to_string(kind)) + "\"");
    ++claims_;
  }

  std::string str() const { return out_.str(); }
  std::size_t claims() const { return claims_; }

 private:
  std::size_t claims_ = 0;
  std::ostringstream out_;
};

inline std::string list_fact(const std::string& lhs, const std::vector<u64>& values) {
  return "List.Mem (" + lhs + ") [" + join(values) + "]";
}

inline std::string list_prop(const std::string& lhs, const std::vector<u64>& values) {
  // Long lists go on their own line.
  return "(List.Mem (" + lhs + ")" + (values.size() > 4 ? "\n  [" : " [") + join(values) + "])";
}

}  // namespace emit_detail

inline RenderedProof emit_lean(const Certificate& cert) {
  using namespace emit_detail;
  require_verified(cert);
  const EquationInstance& e = cert.instance;
  const std::string eq = e.to_string();
  const bool no_solutions = cert.solutions.empty();
  const std::string goal = no_solutions ? "False" : "List.Mem (x, y) [" + pair_list(cert.solutions) + "]";
  const std::string goal_claim = no_solutions ? "False" : "(" + goal + ")";

  RenderedProof r;
  r.theorem_name = theorem_name(e);
  {
    std::ostringstream c;
    c << "/-\n" << emit_text(cert) << "-/\n";
    r.comment_block = c.str();
  }

  ScriptWriter w;
  const std::string eq_fact = ScriptWriter::fact(eq, "h3");

  auto enumeration = [&](const std::string& bound_prop) {
    w.line("have h7 : " + bound_prop + " := by omega");
    w.claim("h8", goal_claim,
            {w.mod_fact(Variable::X, true), w.positive_fact(Variable::X, true), w.mod_fact(Variable::Y, true),
             w.positive_fact(Variable::Y, true), eq_fact, ScriptWriter::fact(bound_prop, "h7")},
            ClaimKind::Enumeration);
    w.line("exact h8");
  };

  switch (cert.shape) {
    case Shape::DivisibilityNoSolution: {
      const auto& pow = std::get<PowModEqZero>(cert.claims[0].params);
      const auto& obs = std::get<ObserveModCycle>(cert.claims[1].params);
      const std::string vanish = pow_of(pow.base, pow.variable) + " % " + std::to_string(pow.modulus) + " = 0";
      const std::string congr = pow_of(obs.base, obs.variable) + " % " + std::to_string(obs.modulus) + " = " +
                                std::to_string(obs.target);
      w.claim("h6", "(" + vanish + ")", {w.mod_fact(pow.variable), w.positive_fact(pow.variable)},
              ClaimKind::PowModEqZero);
      w.line("have h7 : " + congr + " := by omega");
      w.claim("h8", "False",
              {w.mod_fact(obs.variable), w.positive_fact(obs.variable), ScriptWriter::fact(congr, "h7")},
              ClaimKind::ObserveModCycle);
      w.line("exact h8");
      break;
    }
    case Shape::CommonFactorBound: {
      const auto& p = std::get<CommonFactorPayload>(cert.payload);
      const auto& px = std::get<PowModEqZero>(cert.claims[0].params);
      const std::string t = std::to_string(p.threshold);
      const std::string m = std::to_string(px.modulus);
      w.line("by_cases h6 : And (x >= " + t + ") (y >= " + t + ")");
      w.claim("h7", "(" + pow_of(e.a, Variable::X) + " % " + m + " = 0)",
              {w.mod_fact(Variable::X), ScriptWriter::fact("x >= " + t, "h6.left")}, ClaimKind::PowModEqZero);
      w.claim("h8", "(" + pow_of(e.c, Variable::Y) + " % " + m + " = 0)",
              {w.mod_fact(Variable::Y), ScriptWriter::fact("y >= " + t, "h6.right")}, ClaimKind::PowModEqZero);
      w.line("omega");
      const std::string below = std::to_string(p.threshold - 1);
      enumeration("Or (x <= " + below + ") (y <= " + below + ")");
      break;
    }
    case Shape::DirectModularExclusion:
    case Shape::MagicPrimeExclusion: {
      const auto& mp = std::get<ModularPayload>(cert.payload);
      const Variable bounded = bounded_variable(mp.candidate.mode);
      const Variable constrained = other(bounded);
      const std::string t = std::to_string(mp.candidate.bound);
      const auto& pow = std::get<PowModEqZero>(cert.claims[0].params);
      const auto& obs = std::get<ObserveModCycle>(cert.claims[1].params);
      const std::string congr = pow_of(obs.base, constrained) + " % " + std::to_string(obs.modulus) + " = " +
                                std::to_string(obs.target);
      w.line("by_cases h6 : " + var(bounded) + " >= " + t);
      w.claim("h7", "(" + pow_of(pow.base, bounded) + " % " + std::to_string(pow.modulus) + " = 0)",
              {w.mod_fact(bounded), ScriptWriter::fact(var(bounded) + " >= " + t, "h6")}, ClaimKind::PowModEqZero);
      w.line("have h8 : " + congr + " := by omega");
      const std::vector<std::string> constrained_facts = {w.mod_fact(constrained), w.positive_fact(constrained)};
      std::string last = "h9";
      if (!mp.witness) {
        auto facts = constrained_facts;
        facts.push_back(ScriptWriter::fact(congr, "h8"));
        w.claim("h9", "False", facts, ClaimKind::ObserveModCycle);
      } else {
        const Constraint& con = *mp.constraint;
        const MagicPrimeWitness& mw = *mp.witness;
        const std::string P = std::to_string(mw.prime);
        const std::string residue_prop =
            var(constrained) + " % " + std::to_string(con.period) + " = " + std::to_string(con.residue);
        auto facts = constrained_facts;
        facts.push_back(ScriptWriter::fact(congr, "h8"));
        w.claim("h9", "(" + residue_prop + ")", facts, ClaimKind::ObserveModCycle);

        const std::string values_lhs = pow_of(obs.base, constrained) + " % " + P;
        const std::string values_prop = list_prop(values_lhs, mw.power_values);
        const std::string values_fact = list_fact(values_lhs, mw.power_values);
        facts = constrained_facts;
        facts.push_back(ScriptWriter::fact(residue_prop, "h9"));
        w.claim("h10", values_prop, facts, ClaimKind::UtilizeModCycle);

        const auto& ex = std::get<ExhaustModCycle>(cert.claims[4].params);
        const std::string shifted_lhs = pow_of(ex.base, bounded) + " % " + P;
        const std::string shifted_prop = list_prop(shifted_lhs, mw.shifted_values);
        const std::string shifted_fact = list_fact(shifted_lhs, mw.shifted_values);
        w.claim("h11", shifted_prop, {ScriptWriter::fact(values_fact, "h10"), eq_fact}, cert.claims[3].kind);

        w.claim("h12", "False",
                {w.mod_fact(bounded), w.positive_fact(bounded), ScriptWriter::fact(shifted_fact, "h11")},
                ClaimKind::ExhaustModCycle);
        last = "h12";
      }
      w.line("apply False.elim " + last);
      enumeration(var(bounded) + " <= " + std::to_string(mp.candidate.bound - 1));
      break;
    }
  }

  std::ostringstream s;
  s << "import " << kLeanPreludeModule << "\n\n";
  s << "theorem " << r.theorem_name << " (x : Nat) (y : Nat) (h1 : x >= 1) (h2 : y >= 1)\n";
  s << "(h3 : " << eq << ") :\n";
  s << "  " << goal << "\n";
  s << "  := by\n";
  s << "  have h4 : x % 1 = 0 := Nat.mod_one x\n";
  s << "  have h5 : y % 1 = 0 := Nat.mod_one y\n";
  s << w.str();
  r.script_body = s.str();
  r.claim_count = w.claims();
  return r;
}

}  // namespace expodio
