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

// Batch solving over a parameter cube with JSONL persistence.
//
// Instances are sharded statically over a pool of worker threads; finished
// records travel through a queue to one writer thread that appends a line and
// flushes it. A reader tolerates a partial trailing line, and when a key
// appears more than once the last record wins (this is how retried
// instances supersede their first attempt).

#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "expodio/certificate.hpp"
#include "expodio/config.hpp"
#include "expodio/engine.hpp"
#include "expodio/types.hpp"
#include "json.hpp"

namespace expodio {

class ScanIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using InstanceKey = std::tuple<u64, u64, u64>;

struct ScanRecord {
  u64 a = 0, b = 0, c = 0;
  SolveStatus status = SolveStatus::Unresolved;
  ClassTag class_tag = ClassTag::ClassII;
  SolutionList solutions;
  std::optional<std::string> certificate_digest;
  double elapsed_ms = 0.0;

  InstanceKey key() const { return {a, b, c}; }
  std::size_t solution_count() const { return solutions.size(); }
};

inline ScanRecord make_record(const EquationInstance& e, const SolveResult& r) {
  ScanRecord rec;
  rec.a = e.a;
  rec.b = e.b;
  rec.c = e.c;
  rec.status = r.status;
  rec.class_tag = r.classification.tag;
  rec.solutions = r.solutions;
  if (r.certificate) rec.certificate_digest = digest(*r.certificate);
  rec.elapsed_ms = static_cast<double>(r.effort.wall_time.count()) / 1000.0;
  return rec;
}

inline std::string record_to_line(const ScanRecord& r) {
  nlohmann::ordered_json j;
  j["a"] = r.a;
  j["b"] = r.b;
  j["c"] = r.c;
  j["status"] = std::string(to_string(r.status));
  j["class_tag"] = std::string(to_string(r.class_tag));
  j["solution_count"] = r.solution_count();
  auto sols = nlohmann::ordered_json::array();
  for (const auto& s : r.solutions) sols.push_back({s.x, s.y});
  j["solutions"] = std::move(sols);
  j["certificate_digest"] = r.certificate_digest ? nlohmann::ordered_json(*r.certificate_digest) : nullptr;
  j["elapsed_ms"] = r.elapsed_ms;
  return j.dump();
}

inline ScanRecord record_from_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    ScanRecord r;
    r.a = j.at("a").get<u64>();
    r.b = j.at("b").get<u64>();
    r.c = j.at("c").get<u64>();
    const std::string status = j.at("status").get<std::string>();
    if (status == "Solved") r.status = SolveStatus::Solved;
    else if (status == "Unresolved") r.status = SolveStatus::Unresolved;
    else throw MalformedRecord("unknown status " + status);
    const auto tag = class_tag_from_string(j.at("class_tag").get<std::string>());
    if (!tag) throw MalformedRecord("unknown class tag");
    r.class_tag = *tag;
    for (const auto& s : j.at("solutions")) {
      if (!s.is_array() || s.size() != 2) throw MalformedRecord("solution must be a pair");
      r.solutions.push_back({s[0].get<u64>(), s[1].get<u64>()});
    }
    if (j.at("solution_count").get<u64>() != r.solutions.size())
      throw MalformedRecord("solution_count disagrees with solutions");
    if (const auto& d = j.at("certificate_digest"); !d.is_null()) r.certificate_digest = d.get<std::string>();
    if (r.status == SolveStatus::Solved && !r.certificate_digest)
      throw MalformedRecord("solved record without certificate digest");
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    return r;
  } catch (const MalformedRecord&) {
    throw;
  } catch (const std::exception& ex) {
    throw MalformedRecord(ex.what());
  }
}

struct RecordFile {
  std::map<InstanceKey, ScanRecord> latest;
  u64 lines = 0;
  u64 malformed = 0;
  bool partial_tail = false;
};

/// Reads every complete line of a results file. A missing file reads as empty.
inline RecordFile read_records(const std::filesystem::path& path) {
  RecordFile out;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (std::filesystem::exists(path)) throw ScanIoError("cannot read " + path.string());
    return out;
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      out.partial_tail = true;
      break;
    }
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    ++out.lines;
    try {
      ScanRecord r = record_from_line(line);
      out.latest[r.key()] = std::move(r);
    } catch (const MalformedRecord&) {
      ++out.malformed;
    }
  }
  return out;
}

/// Drops an incomplete final line left behind by an interrupted writer.
inline void truncate_partial_tail(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  if (text.empty() || text.back() == '\n') return;
  const std::size_t keep = text.rfind('\n');
  std::filesystem::resize_file(path, keep == std::string::npos ? 0 : keep + 1);
}

struct ScanRange {
  u64 a_max = 2, b_max = 1, c_max = 2;

  void validate() const {
    if (a_max < 2 || c_max < 2 || b_max < 1) throw std::invalid_argument("scan ranges need a_max, c_max >= 2 and b_max >= 1");
    if (a_max > kMaxParameter || b_max > kMaxParameter || c_max > kMaxParameter)
      throw std::invalid_argument("scan ranges must not exceed 2^32");
  }
  u64 size() const { return (a_max - 1) * b_max * (c_max - 1); }
  EquationInstance at(u64 index) const {
    const u64 c = index % (c_max - 1) + 2;
    index /= c_max - 1;
    const u64 b = index % b_max + 1;
    const u64 a = index / b_max + 2;
    return EquationInstance::make(a, b, c);
  }
};

struct ScanOptions {
  ScanRange range;
  u64 jobs = 1;
  std::filesystem::path out;
  bool resume = false;
  bool retry_unresolved = false;
  std::optional<std::filesystem::path> keep_certs;
  SolverConfig config;
};

struct ScanSummary {
  u64 total = 0;
  u64 skipped = 0;
  u64 solved = 0;
  u64 unresolved = 0;
  u64 retried = 0;

  std::string line() const {
    std::ostringstream s;
    s << "scanned " << total << " instances: " << solved << " solved, " << unresolved << " unresolved, " << skipped
      << " already recorded";
    if (retried) s << ", " << retried << " retried";
    return s.str();
  }
};

inline std::filesystem::path certificate_path(const std::filesystem::path& dir, const EquationInstance& e) {
  return dir / ("cert_" + std::to_string(e.a) + "_" + std::to_string(e.b) + "_" + std::to_string(e.c) + ".json");
}

namespace scan_detail {

class LineWriter {
 public:
  explicit LineWriter(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::app) {
    if (!out_) throw ScanIoError("cannot open " + path.string() + " for appending");
    thread_ = std::thread([this] { run(); });
  }
  LineWriter(const LineWriter&) = delete;
  LineWriter& operator=(const LineWriter&) = delete;
  ~LineWriter() { close(); }

  void push(std::string line) {
    {
      std::lock_guard lock(mu_);
      queue_.push_back(std::move(line));
    }
    cv_.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      if (closed_) return;
      closed_ = true;
    }
    cv_.notify_one();
    if (thread_.joinable()) thread_.join();
  }

  bool failed() const { return failed_; }

 private:
  void run() {
    std::unique_lock lock(mu_);
    for (;;) {
      cv_.wait(lock, [this] { return closed_ || !queue_.empty(); });
      while (!queue_.empty()) {
        std::string line = std::move(queue_.front());
        queue_.pop_front();
        lock.unlock();
        out_ << line << '\n';
        out_.flush();
        if (!out_) failed_ = true;
        lock.lock();
      }
      if (closed_) return;
    }
  }

  std::ofstream out_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  bool closed_ = false;
  std::atomic<bool> failed_{false};
  std::thread thread_;
};

}  // namespace scan_detail

inline ScanSummary run_scan(const ScanOptions& opt) {
  opt.range.validate();
  if (opt.jobs == 0) throw std::invalid_argument("jobs must be positive");
  if (opt.keep_certs) std::filesystem::create_directories(*opt.keep_certs);

  const bool reuse = opt.resume || opt.retry_unresolved;
  std::map<InstanceKey, ScanRecord> existing;
  if (reuse) {
    truncate_partial_tail(opt.out);
    existing = read_records(opt.out).latest;
  } else {
    std::ofstream truncate(opt.out, std::ios::binary | std::ios::trunc);
    if (!truncate) throw ScanIoError("cannot write " + opt.out.string());
  }

  // Work list: (cube index, retry?) for every instance that needs solving.
  std::vector<std::pair<u64, bool>> work;
  ScanSummary summary;
  summary.total = opt.range.size();
  for (u64 i = 0; i < summary.total; ++i) {
    const auto e = opt.range.at(i);
    const auto it = existing.find({e.a, e.b, e.c});
    if (it == existing.end()) {
      work.emplace_back(i, false);
    } else if (opt.retry_unresolved && it->second.status == SolveStatus::Unresolved) {
      work.emplace_back(i, true);
    } else {
      ++summary.skipped;
      (it->second.status == SolveStatus::Solved ? summary.solved : summary.unresolved) += 1;
    }
  }

  const SolverConfig retry_config = enlarged(opt.config);
  std::mutex tally_mu;
  std::vector<std::string> failures;
  {
    scan_detail::LineWriter writer(opt.out);
    const u64 jobs = std::min<u64>(opt.jobs, std::max<std::size_t>(1, work.size()));
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (u64 w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < work.size(); k += jobs) {
          const auto [index, retry] = work[k];
          const EquationInstance e = opt.range.at(index);
          SolveResult r;
          try {
            r = solve(e, retry ? retry_config : opt.config);
          } catch (const std::exception& ex) {
            std::lock_guard lock(tally_mu);
            failures.push_back(e.to_string() + ": " + ex.what());
            r.classification = classify(e);
            r.status = SolveStatus::Unresolved;
          }
          if (opt.keep_certs && r.certificate) {
            std::ofstream cert(certificate_path(*opt.keep_certs, e), std::ios::binary);
            cert << serialize(*r.certificate);
          }
          writer.push(record_to_line(make_record(e, r)));
          std::lock_guard lock(tally_mu);
          (r.status == SolveStatus::Solved ? summary.solved : summary.unresolved) += 1;
          if (retry) ++summary.retried;
        }
      });
    }
    for (auto& t : pool) t.join();
    writer.close();
    if (writer.failed()) throw ScanIoError("write to " + opt.out.string() + " failed");
  }
  if (!failures.empty()) {
    std::string msg = "solver errors:";
    for (const auto& f : failures) msg += "\n  " + f;
    throw std::runtime_error(msg);
  }
  return summary;
}

struct ScanStats {
  u64 records = 0;
  u64 malformed = 0;
  std::map<std::size_t, u64> histogram;
  std::size_t max_count = 0;
  std::vector<InstanceKey> attaining_max;
  std::map<std::string, u64> class_breakdown;
  std::vector<InstanceKey> unresolved;
};

inline ScanStats compute_stats(const RecordFile& file) {
  ScanStats s;
  s.malformed = file.malformed + (file.partial_tail ? 1 : 0);
  s.records = file.latest.size();
  for (const auto& [key, r] : file.latest) {
    ++s.histogram[r.solution_count()];
    ++s.class_breakdown[std::string(to_string(r.class_tag))];
    if (r.status == SolveStatus::Unresolved) s.unresolved.push_back(key);
    if (r.solution_count() > s.max_count) {
      s.max_count = r.solution_count();
      s.attaining_max.clear();
    }
    if (r.solution_count() == s.max_count && s.max_count > 0) s.attaining_max.push_back(key);
  }
  return s;
}

inline std::string render_stats(const ScanStats& s) {
  const auto key_str = [](const InstanceKey& k) {
    return "(" + std::to_string(std::get<0>(k)) + "," + std::to_string(std::get<1>(k)) + "," +
           std::to_string(std::get<2>(k)) + ")";
  };
  std::ostringstream out;
  out << "records: " << s.records << "\n";
  out << "malformed lines: " << s.malformed << "\n";
  out << "solution count histogram:\n";
  for (const auto& [count, n] : s.histogram) out << "  " << count << ": " << n << "\n";
  out << "max solution count: " << s.max_count << "\n";
  out << "attained by (" << s.attaining_max.size() << "):";
  for (const auto& k : s.attaining_max) out << " " << key_str(k);
  out << "\n";
  out << "class tags:\n";
  for (const auto& [tag, n] : s.class_breakdown) out << "  " << tag << ": " << n << "\n";
  out << "unresolved (" << s.unresolved.size() << "):";
  for (const auto& k : s.unresolved) out << " " << key_str(k);
  out << "\n";
  return out.str();
}

}  // namespace expodio
