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

#include "expodio/scan.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "expodio/config.hpp"

namespace expodio {
namespace {

namespace fs = std::filesystem;

class ScanTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("expodio_scan_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  ScanOptions options(u64 a, u64 b, u64 c, u64 jobs, const std::string& name) const {
    ScanOptions opt;
    opt.range = {a, b, c};
    opt.jobs = jobs;
    opt.out = dir_ / name;
    return opt;
  }

  // Records without timing, as a sorted set of canonical lines.
  static std::multiset<std::string> contents(const fs::path& p) {
    std::multiset<std::string> out;
    std::ifstream in(p);
    for (std::string line; std::getline(in, line);) {
      auto j = nlohmann::json::parse(line);
      j.erase("elapsed_ms");
      out.insert(j.dump());
    }
    return out;
  }

  fs::path dir_;
};

TEST_F(ScanTest, RangeIndexingCoversTheCube) {
  const ScanRange r{4, 3, 5};
  std::set<std::tuple<u64, u64, u64>> seen;
  for (u64 i = 0; i < r.size(); ++i) {
    const auto e = r.at(i);
    seen.insert({e.a, e.b, e.c});
  }
  EXPECT_EQ(seen.size(), 3u * 3u * 4u);
  EXPECT_EQ(*seen.begin(), std::make_tuple(u64{2}, u64{1}, u64{2}));
  EXPECT_EQ(*seen.rbegin(), std::make_tuple(u64{4}, u64{3}, u64{5}));
  EXPECT_THROW((ScanRange{1, 3, 5}.validate()), std::invalid_argument);
}

TEST_F(ScanTest, SmallCubeStatistics) {
  const auto opt = options(12, 12, 12, 2, "s.jsonl");
  const ScanSummary s = run_scan(opt);
  EXPECT_EQ(s.total, 11u * 12u * 11u);
  EXPECT_EQ(s.unresolved, 0u);
  const ScanStats st = compute_stats(read_records(opt.out));
  EXPECT_EQ(st.records, s.total);
  EXPECT_EQ(st.malformed, 0u);
  EXPECT_EQ(st.max_count, 2u);
  const std::vector<InstanceKey> expected = {{2, 1, 3}, {2, 4, 6}, {3, 5, 2}, {5, 3, 2}};
  EXPECT_EQ(st.attaining_max, expected);
  u64 total = 0;
  for (const auto& [k, n] : st.histogram) total += n;
  EXPECT_EQ(total, s.total);
  EXPECT_GT(st.histogram.at(0), st.histogram.at(1));
  EXPECT_TRUE(st.unresolved.empty());
}

TEST_F(ScanTest, JobsCountDoesNotChangeRecords) {
  const auto one = options(8, 8, 8, 1, "one.jsonl");
  const auto four = options(8, 8, 8, 4, "four.jsonl");
  run_scan(one);
  run_scan(four);
  EXPECT_EQ(contents(one.out), contents(four.out));
}

TEST_F(ScanTest, ResumeAfterTruncation) {
  const auto full = options(9, 9, 9, 2, "full.jsonl");
  run_scan(full);
  const auto full_records = contents(full.out);

  // Cut the file mid-line, then resume.
  auto half = options(9, 9, 9, 3, "half.jsonl");
  fs::copy_file(full.out, half.out);
  fs::resize_file(half.out, fs::file_size(half.out) / 2);
  {
    const RecordFile partial = read_records(half.out);
    EXPECT_TRUE(partial.partial_tail);
  }
  half.resume = true;
  const ScanSummary s = run_scan(half);
  EXPECT_GT(s.skipped, 0u);
  EXPECT_EQ(contents(half.out), full_records);
  EXPECT_EQ(read_records(half.out).lines, full_records.size());
}

TEST_F(ScanTest, RetryUnresolvedSupersedesEarlierRecords) {
  auto opt = options(6, 6, 6, 2, "retry.jsonl");
  opt.config.max_pops = 1;
  opt.config.prime_budget = 1;
  const ScanSummary first = run_scan(opt);
  ASSERT_GT(first.unresolved, 0u);

  opt.retry_unresolved = true;
  opt.config = SolverConfig{};
  const ScanSummary second = run_scan(opt);
  EXPECT_EQ(second.retried, first.unresolved);
  EXPECT_EQ(second.unresolved, 0u);
  const RecordFile file = read_records(opt.out);
  EXPECT_EQ(file.lines, first.total + first.unresolved);
  EXPECT_TRUE(compute_stats(file).unresolved.empty());
}

TEST_F(ScanTest, KeepCertsWritesVerifiableFiles) {
  auto opt = options(3, 3, 3, 1, "k.jsonl");
  opt.keep_certs = dir_ / "certs";
  run_scan(opt);
  u64 files = 0;
  for (const auto& entry : fs::directory_iterator(*opt.keep_certs)) {
    (void)entry;
    ++files;
  }
  EXPECT_EQ(files, 2u * 3u * 2u);
  std::ifstream in(certificate_path(*opt.keep_certs, EquationInstance::make(2, 1, 3)));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto rec = read_records(opt.out).latest.at({2, 1, 3});
  EXPECT_EQ(sha256_hex(text), *rec.certificate_digest);
}

TEST_F(ScanTest, MalformedLinesAreCountedNotFatal) {
  const fs::path p = dir_ / "m.jsonl";
  {
    std::ofstream out(p);
    ScanRecord r;
    r.a = 2;
    r.b = 1;
    r.c = 3;
    r.status = SolveStatus::Solved;
    r.solutions = {{1, 1}, {3, 2}};
    r.certificate_digest = "00";
    out << record_to_line(r) << "\n";
    out << "not json\n";
    out << R"({"a":2,"b":2,"c":3,"status":"Solved","class_tag":"ClassII","solution_count":1,"solutions":[],"certificate_digest":"0","elapsed_ms":1})"
        << "\n";
    out << "{\"a\":";
  }
  const ScanStats st = compute_stats(read_records(p));
  EXPECT_EQ(st.records, 1u);
  EXPECT_EQ(st.malformed, 3u);
  EXPECT_EQ(st.max_count, 2u);
}

TEST_F(ScanTest, EmptyFileGivesZeroReport) {
  const fs::path p = dir_ / "empty.jsonl";
  std::ofstream(p).close();
  const ScanStats st = compute_stats(read_records(p));
  EXPECT_EQ(st.records, 0u);
  EXPECT_EQ(st.max_count, 0u);
  EXPECT_TRUE(st.histogram.empty());
  EXPECT_NE(render_stats(st).find("records: 0"), std::string::npos);
}

TEST(ConfigTest, PrecedenceFlagOverFileOverDefault) {
  const SettingsLayer file = parse_settings(nlohmann::json::parse(R"({"prime_budget": 10, "max_pops": 50, "jobs": 3})"));
  SettingsLayer flags;
  flags.prime_budget = 20;
  const SolverConfig cfg = resolve_config(file, flags);
  EXPECT_EQ(cfg.prime_budget, 20u);
  EXPECT_EQ(cfg.max_pops, 50u);
  EXPECT_EQ(cfg.prime_cap, SolverConfig{}.prime_cap);
  EXPECT_EQ(resolve_jobs(file, flags), 3u);
  flags.jobs = 5;
  EXPECT_EQ(resolve_jobs(file, flags), 5u);
}

TEST(ConfigTest, EnvironmentJobsFallback) {
  ::setenv("EXPODIO_JOBS", "7", 1);
  EXPECT_EQ(resolve_jobs({}, {}), 7u);
  SettingsLayer file;
  file.jobs = 2;
  EXPECT_EQ(resolve_jobs(file, {}), 2u);
  ::setenv("EXPODIO_JOBS", "zero", 1);
  EXPECT_THROW(resolve_jobs({}, {}), ConfigError);
  ::unsetenv("EXPODIO_JOBS");
  EXPECT_GE(resolve_jobs({}, {}), 1u);
}

TEST(ConfigTest, RejectsBadFiles) {
  EXPECT_THROW(parse_settings(nlohmann::json::parse(R"({"prime_budgt": 3})")), ConfigError);
  EXPECT_THROW(parse_settings(nlohmann::json::parse(R"({"max_pops": 0})")), ConfigError);
  EXPECT_THROW(parse_settings(nlohmann::json::parse(R"({"max_pops": -4})")), ConfigError);
  EXPECT_THROW(parse_settings(nlohmann::json::parse("[1]")), ConfigError);
  EXPECT_THROW(load_settings_file("/nonexistent/expodio.json"), ConfigError);
  SettingsLayer bad;
  bad.max_modulus = u64{1} << 63;
  EXPECT_THROW(resolve_config({}, bad), ConfigError);
  const SettingsLayer big = parse_settings(nlohmann::json::parse(R"({"ceiling": "340282366920938463463374607431768211456"})"));
  EXPECT_EQ(*big.ceiling, BigInt(1) << 128);
}

TEST(ConfigTest, EnlargedBudgetsGrow) {
  const SolverConfig base;
  const SolverConfig big = enlarged(base);
  EXPECT_GT(big.prime_budget, base.prime_budget);
  EXPECT_GT(big.prime_cap, base.prime_cap);
  EXPECT_GT(big.max_pops, base.max_pops);
  EXPECT_LE(big.prime_cap, arith::kModulusCap);
  EXPECT_NO_THROW(validate(enlarged(big)));
}

}  // namespace
}  // namespace expodio
