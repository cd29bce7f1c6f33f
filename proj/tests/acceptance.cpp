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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "expodio/arith.hpp"
#include "expodio/emit.hpp"
#include "expodio/engine.hpp"
#include "expodio/scan.hpp"
#include "expodio/verify.hpp"
#include "support/goldens.hpp"
#include "support/oracle.hpp"

using namespace expodio;
using clock_type = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(clock_type::time_point t) {
  return std::chrono::duration<double>(clock_type::now() - t).count();
}

// 1. Golden instances: exact solution sets, each within 60 s.
Outcome golden_suite() {
  Outcome o;
  double slowest = 0;
  for (const auto& g : golden::cases()) {
    const auto t = clock_type::now();
    const SolveResult r = solve(EquationInstance::make(g.a, g.b, g.c));
    const double s = seconds_since(t);
    slowest = std::max(slowest, s);
    if (r.status != SolveStatus::Solved) o.fail(golden::label(g) + " unresolved");
    else if (golden::pairs(r.solutions) != g.solutions) o.fail(golden::label(g) + " wrong solution set");
    if (s > 60.0) o.fail(golden::label(g) + " took longer than 60 s");
  }
  if (o.pass) {
    std::ostringstream d;
    d << golden::cases().size() << " instances, slowest " << slowest * 1000 << " ms";
    o.detail = d.str();
  }
  return o;
}

// 2. Subrange scan a, c <= 50, b <= 50.
Outcome two_solution_table() {
  Outcome o;
  const std::filesystem::path out = std::filesystem::temp_directory_path() / "expodio_acceptance_scan.jsonl";
  ScanOptions opt;
  opt.range = {50, 50, 50};
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  opt.out = out;
  const auto t = clock_type::now();
  const ScanSummary summary = run_scan(opt);
  const double secs = seconds_since(t);
  const ScanStats st = compute_stats(read_records(out));
  std::filesystem::remove(out);

  const std::vector<InstanceKey> expected = {{2, 1, 3},  {2, 4, 6}, {3, 5, 2},  {3, 10, 13}, {3, 13, 2},
                                             {3, 13, 4}, {3, 13, 16}, {5, 3, 2}, {6, 9, 15}};
  if (st.records != 49u * 50u * 49u) o.fail("record count " + std::to_string(st.records));
  if (st.max_count != 2) o.fail("max solution count " + std::to_string(st.max_count));
  if (st.attaining_max != expected) o.fail("instances attaining the maximum differ");
  if (summary.unresolved != 0 || !st.unresolved.empty()) o.fail(std::to_string(st.unresolved.size()) + " unresolved");
  if (secs > 1800) o.fail("runtime over 30 minutes");
  if (o.pass) {
    std::ostringstream d;
    d << st.records << " records, max 2 attained by 9 instances, 0 unresolved, " << secs << " s on " << opt.jobs
      << " jobs";
    o.detail = d.str();
  }
  return o;
}

// 3. Oracle equivalence over a, c <= 12, b <= 12.
Outcome oracle_equivalence() {
  Outcome o;
  u64 solved = 0;
  for (u64 a = 2; a <= 12; ++a)
    for (u64 b = 1; b <= 12; ++b)
      for (u64 c = 2; c <= 12; ++c) {
        const SolveResult r = solve(EquationInstance::make(a, b, c));
        if (r.status != SolveStatus::Solved) continue;
        ++solved;
        if (golden::pairs(r.solutions) != oracle::brute_solutions(a, b, c, 1000000000))
          o.fail("disagreement at (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");
      }
  if (solved != 11u * 12u * 11u) o.fail("only " + std::to_string(solved) + " instances solved");
  if (o.pass) o.detail = std::to_string(solved) + " solved instances, 0 disagreements";
  return o;
}

bool verifier_is_isolated(std::string& why) {
  const std::filesystem::path root = std::filesystem::path(EXPODIO_SOURCE_DIR) / "include";
  const std::regex include_re(R"re(#include\s+"(expodio/[a-z_]+\.hpp)")re");
  std::set<std::string> seen;
  std::vector<std::string> pending = {"expodio/verify.hpp"};
  while (!pending.empty()) {
    const std::string cur = pending.back();
    pending.pop_back();
    if (!seen.insert(cur).second) continue;
    std::ifstream in(root / cur);
    if (!in) {
      why = "cannot read " + cur;
      return false;
    }
    for (std::string line; std::getline(in, line);) {
      std::smatch m;
      if (std::regex_search(line, m, include_re)) pending.push_back(m[1]);
    }
  }
  for (const char* banned : {"expodio/engine.hpp", "expodio/classify.hpp", "expodio/enumerate.hpp"})
    if (seen.count(banned)) {
      why = std::string("verifier reaches ") + banned;
      return false;
    }
  return true;
}

// 4. Certificate soundness.
Outcome certificate_soundness() {
  Outcome o;
  constexpr int kMutations = 1000;
  std::mt19937_64 rng(20260501);
  u64 rejected = 0;
  for (const auto& g : golden::cases()) {
    const Certificate cert = *solve(EquationInstance::make(g.a, g.b, g.c)).certificate;
    const Verdict v = verify_serialized(serialize(cert));
    if (!v.accepted) o.fail(golden::label(g) + " rejected: " + v.reason);
    const Json doc = to_json(cert);
    for (int i = 0; i < kMutations; ++i) {
      if (verify_serialized(golden::mutate(doc, rng)).accepted) o.fail(golden::label(g) + " accepted a mutation");
      else ++rejected;
    }
  }
  std::string why;
  if (!verifier_is_isolated(why)) o.fail(why);
  if (o.pass)
    o.detail = std::to_string(golden::cases().size()) + " goldens accepted, " + std::to_string(rejected) +
               " mutations rejected, verifier isolated from solver code";
  return o;
}

// 5. Arithmetic properties.
Outcome arithmetic_properties() {
  Outcome o;
  std::mt19937_64 rng(5);
  u64 checks = 0;
  for (u64 m = 2; m <= 10000 && o.pass; ++m) {
    std::vector<u64> bases = {2, 3, 5, 7, m - 1, rng() % m, rng() % m};
    for (u64 base : bases) {
      base %= m;
      const auto cyc = oracle::cycle(base, m);
      if (cyc.empty()) {
        try {
          (void)arith::multiplicative_order(base, m);
          o.fail("order of non-unit accepted");
        } catch (const arith::NotAUnit&) {
        }
        continue;
      }
      if (arith::multiplicative_order(base, m).order != cyc.size()) o.fail("order mismatch mod " + std::to_string(m));
      for (int k = 0; k < 3; ++k) {
        const u64 j = rng() % cyc.size();
        for (auto s : {arith::DlogStrategy::Enumerate, arith::DlogStrategy::BabyStepGiantStep,
                       arith::DlogStrategy::PohligHellman}) {
          if (arith::cycle_discrete_log(base, cyc[j], m, s) != j) o.fail("dlog mismatch mod " + std::to_string(m));
          ++checks;
        }
      }
    }
  }

  const u64 limit = 1000000;
  const auto sieve = oracle::sieve(limit);
  for (u64 k : {1, 2, 6, 18, 64, 147, 1323, 8748}) {
    std::vector<u64> expected, got;
    for (u64 n = 1; n * k + 1 <= limit; ++n)
      if (sieve[n * k + 1]) expected.push_back(n * k + 1);
    arith::PrimesInProgression stream(k);
    while (auto p = stream.next(limit)) got.push_back(*p);
    if (got != expected) o.fail("progression mismatch for period " + std::to_string(k));
    checks += expected.size();
  }

  for (u64 a = 2; a <= 20; ++a)
    for (u64 x = 1; x <= 40; ++x) {
      const arith::BigInt n = arith::big_pow(a, x);
      if (arith::exact_power_decompose(n, a) != x) o.fail("exact power missed");
      if (arith::exact_power_decompose(n + 1, a).has_value()) o.fail("exact power false positive");
      checks += 2;
    }
  if (o.pass) o.detail = std::to_string(checks) + " exact checks";
  return o;
}

// 6. Magic-prime fidelity.
Outcome magic_prime_fidelity() {
  Outcome o;
  const auto sorted = [](std::vector<u64> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const std::vector<u64> shifted257 = sorted({17, 227, 246, 36});
  const std::vector<u64> values17497 = sorted({11616, 6486, 5881, 11011});

  // Which witness list the reference set describes.
  enum class List { Shifted, Powers };
  struct Spot {
    u64 a, b, c, prime;
    List list;
    std::vector<u64> expected;
  };
  const auto pick = [](const MagicPrimeWitness& w, List l) {
    return l == List::Shifted ? w.shifted_values : w.power_values;
  };
  for (const Spot& s : {Spot{5, 3, 2, 257, List::Shifted, shifted257},
                        Spot{3, 10, 13, 17497, List::Powers, values17497}}) {
    const auto e = EquationInstance::make(s.a, s.b, s.c);
    const SolveResult r = solve(e);
    if (!r.certificate || !verify_certificate(*r.certificate).accepted) {
      o.fail("default certificate does not verify");
      continue;
    }
    const auto& mp = std::get<ModularPayload>(r.certificate->payload);
    if (!mp.witness || !mp.constraint) {
      o.fail("no magic prime used");
      continue;
    }
    if (mp.witness->prime == s.prime && sorted(pick(*mp.witness, s.list)) != s.expected)
      o.fail("default witness at " + std::to_string(s.prime) + " differs");
    // Pinned: force the prime.
    const auto pinned = try_magic_prime(e, *mp.constraint, s.prime);
    if (!pinned || sorted(pick(*pinned, s.list)) != s.expected)
      o.fail("pinned witness at " + std::to_string(s.prime) + " differs");
  }
  if (o.pass) o.detail = "P = 257 and P = 17497 reproduce the reference sets";
  return o;
}

// 7. Emitter determinism and claim sequences.
Outcome emitter_determinism() {
  Outcome o;
  for (const auto& g : golden::cases()) {
    const auto e = EquationInstance::make(g.a, g.b, g.c);
    const RenderedProof first = emit_lean(*solve(e).certificate);
    const RenderedProof second = emit_lean(*solve(e).certificate);
    if (first.file_contents() != second.file_contents()) o.fail(golden::label(g) + " not byte-identical");
    if (emit_text(*solve(e).certificate) != emit_text(*solve(e).certificate)) o.fail(golden::label(g) + " text differs");
    if (golden::script_kinds(first.script_body) != g.kinds) o.fail(golden::label(g) + " claim kinds differ");
  }
  if (o.pass) o.detail = std::to_string(golden::cases().size()) + " scripts stable with expected claim kinds";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 golden instance suite", golden_suite},
      {"AC2 two-solution table on the 50 cube", two_solution_table},
      {"AC3 oracle equivalence on the 12 cube", oracle_equivalence},
      {"AC4 certificate soundness", certificate_soundness},
      {"AC5 arithmetic property suite", arithmetic_properties},
      {"AC6 magic-prime fidelity", magic_prime_fidelity},
      {"AC7 emitter determinism", emitter_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& ex) {
      o.fail(std::string("exception: ") + ex.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
