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

#include "expodio/verify.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

#include "expodio/engine.hpp"
#include "support/goldens.hpp"

namespace expodio {
namespace {

Certificate golden_certificate(u64 a, u64 b, u64 c) { return *solve(EquationInstance::make(a, b, c)).certificate; }

TEST(VerifyTest, AcceptsEveryGolden) {
  for (const auto& g : golden::cases()) {
    const Certificate cert = golden_certificate(g.a, g.b, g.c);
    const Verdict v = verify_certificate(cert);
    EXPECT_TRUE(v.accepted) << golden::label(g) << ": " << v.reason;
    EXPECT_TRUE(verify_serialized(serialize(cert)).accepted) << golden::label(g);
  }
}

TEST(VerifyTest, RejectsEverySingleFieldMutation) {
  std::mt19937_64 rng(2026);
  for (const auto& g : golden::cases()) {
    const Json doc = to_json(golden_certificate(g.a, g.b, g.c));
    for (int i = 0; i < 1000; ++i) {
      const std::string mutated = golden::mutate(doc, rng);
      ASSERT_FALSE(verify_serialized(mutated).accepted) << golden::label(g) << "\n" << mutated;
    }
  }
}

TEST(VerifyTest, RejectsNonCanonicalText) {
  const std::string text = serialize(golden_certificate(7, 3, 10));
  EXPECT_TRUE(verify_serialized(text).accepted);
  EXPECT_FALSE(verify_serialized(to_json(parse_certificate(text)).dump()).accepted);
  EXPECT_FALSE(verify_serialized(text + "\n").accepted);
  const Verdict empty = verify_serialized("");
  EXPECT_FALSE(empty.accepted);
  EXPECT_NE(empty.reason.find("malformed"), std::string::npos);
}

// A witness prime that is not actually magic: 2^y lands on 5 modulo 19, and
// 5 - 7 = 17 is a power of 3 modulo 19. The chain is internally consistent
// up to the exhaustion step, which must fail.
TEST(VerifyTest, RejectsForgedWitnessAtExhaustion) {
  const auto e = EquationInstance::make(3, 7, 2);
  const ModulusCandidate cand{Mode::Backward, 3, 3, 3, 27};
  const Constraint con{Variable::Y, 16, 18, 27, 7};
  MagicPrimeWitness w;
  w.prime = 19;
  w.lifted_period = 18;
  w.lifted_residues = {16};
  w.power_values = {5};
  w.shifted_values = {17};
  w.constrained_order = 18;
  w.other_side_order = 18;
  w.disjoint = true;
  const Certificate forged = build_certificate(e, classify(e), ExclusionOutcome{cand, con, w}, {{2, 4}});
  const Verdict v = verify_certificate(forged);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.claim_index, 4u) << v.reason;
}

TEST(VerifyTest, RejectsIncompleteSolutionList) {
  Certificate cert = golden_certificate(5, 3, 2);
  cert.solutions = {{1, 3}};
  std::get<Enumeration>(cert.claims.back().params).solutions = {{1, 3}};
  const Verdict v = verify_certificate(cert);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.claim_index, cert.claims.size() - 1) << v.reason;
}

TEST(VerifyTest, RejectsUnknownRevalidator) {
  Certificate cert = golden_certificate(7, 3, 10);
  cert.claims[1].kind = ClaimKind::Unknown;
  cert.claims[1].unknown_kind = "trust_me";
  const Verdict v = verify_certificate(cert);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.claim_index, 1u);
}

TEST(VerifyTest, RejectsFalseVanishingClaim) {
  Certificate cert = golden_certificate(2, 6, 9);
  std::get<PowModEqZero>(cert.claims[0].params).modulus = 2;
  EXPECT_FALSE(verify_certificate(cert).accepted);
}

// The checker must stand alone: its include closure never reaches the search
// code.
TEST(VerifyTest, SharesNoSolverCode) {
  const std::filesystem::path root = std::filesystem::path(EXPODIO_SOURCE_DIR) / "include";
  const std::regex include_re(R"re(#include\s+"(expodio/[a-z_]+\.hpp)")re");
  std::set<std::string> seen;
  std::vector<std::string> pending = {"expodio/verify.hpp"};
  while (!pending.empty()) {
    const std::string cur = pending.back();
    pending.pop_back();
    if (!seen.insert(cur).second) continue;
    std::ifstream in(root / cur);
    ASSERT_TRUE(in) << cur;
    for (std::string line; std::getline(in, line);) {
      std::smatch m;
      if (std::regex_search(line, m, include_re)) pending.push_back(m[1]);
    }
  }
  EXPECT_TRUE(seen.count("expodio/arith.hpp"));
  for (const char* banned : {"expodio/engine.hpp", "expodio/classify.hpp", "expodio/enumerate.hpp",
                             "expodio/emit.hpp", "expodio/scan.hpp", "expodio/config.hpp"})
    EXPECT_FALSE(seen.count(banned)) << banned;
}

}  // namespace
}  // namespace expodio
