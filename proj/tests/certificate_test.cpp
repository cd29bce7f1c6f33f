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

#include "expodio/certificate.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "expodio/engine.hpp"
#include "support/goldens.hpp"

namespace expodio {
namespace {

std::string golden_path(const golden::Case& g) {
  return std::string(EXPODIO_TEST_DATA_DIR) + "/golden/cert_" + std::to_string(g.a) + "_" + std::to_string(g.b) +
         "_" + std::to_string(g.c) + ".json";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(CertificateTest, GoldenFilesRoundTripByteForByte) {
  for (const auto& g : golden::cases()) {
    const std::string text = slurp(golden_path(g));
    ASSERT_FALSE(text.empty()) << golden_path(g);
    EXPECT_EQ(serialize(parse_certificate(text)), text) << golden::label(g);
  }
}

TEST(CertificateTest, SolverReproducesGoldenFiles) {
  for (const auto& g : golden::cases()) {
    const auto r = solve(EquationInstance::make(g.a, g.b, g.c));
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_EQ(serialize(*r.certificate), slurp(golden_path(g))) << golden::label(g);
  }
}

TEST(CertificateTest, DigestIsHexSha256OfCanonicalText) {
  const auto r = solve(EquationInstance::make(2, 89, 91));
  const std::string d = digest(*r.certificate);
  EXPECT_EQ(d.size(), 64u);
  EXPECT_EQ(d.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(d, sha256_hex(serialize(*r.certificate)));
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CertificateTest, MalformedInputs) {
  EXPECT_THROW(parse_certificate(""), MalformedCertificate);
  EXPECT_THROW(parse_certificate("{"), MalformedCertificate);
  EXPECT_THROW(parse_certificate("[]"), MalformedCertificate);
  EXPECT_THROW(parse_certificate(R"({"instance": {"a": 2, "b": 1, "c": 3}})"), MalformedCertificate);
  EXPECT_THROW(parse_certificate(R"({"instance": {"a": 1, "b": 1, "c": 3}, "shape": "X"})"), MalformedCertificate);
}

TEST(CertificateTest, UnknownKindIsPreserved) {
  auto j = to_json(*solve(EquationInstance::make(7, 3, 10)).certificate);
  j["claims"][1]["kind"] = "mystery_claim";
  const Certificate cert = certificate_from_json(j);
  EXPECT_EQ(cert.claims[1].kind, ClaimKind::Unknown);
  EXPECT_EQ(cert.claims[1].unknown_kind, "mystery_claim");
}

TEST(CertificateTest, BuildRejectsInconsistentSolutions) {
  const auto e = EquationInstance::make(7, 3, 10);
  const auto cls = classify(e);
  const ModulusCandidate cand{Mode::Forward, 2, 3, 3, 8};
  EXPECT_NO_THROW(build_certificate(e, cls, ExclusionOutcome{cand, std::nullopt, std::nullopt}, {{1, 1}}));
  EXPECT_THROW(build_certificate(e, cls, ExclusionOutcome{cand, std::nullopt, std::nullopt}, {{1, 4}}),
               CertificateInconsistency);
  EXPECT_THROW(build_certificate(e, cls, std::nullopt, {}), CertificateInconsistency);
  EXPECT_THROW(build_certificate(EquationInstance::make(2, 6, 9), classify(EquationInstance::make(2, 6, 9)),
                                 std::nullopt, {{1, 1}}),
               CertificateInconsistency);
}

TEST(CertificateTest, ClaimLayouts) {
  for (const auto& g : golden::cases()) {
    const Certificate cert = *solve(EquationInstance::make(g.a, g.b, g.c)).certificate;
    ASSERT_EQ(golden::claim_kinds(cert), g.kinds) << golden::label(g);
    // Every claim except the leading power claims depends on earlier claims only.
    for (std::size_t i = 0; i < cert.claims.size(); ++i)
      for (std::size_t p : cert.claims[i].premises) EXPECT_LT(p, i);
  }
}

}  // namespace
}  // namespace expodio
