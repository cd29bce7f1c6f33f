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

// expodio: solve, scan, verify and summarize a^x + b = c^y instances.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "expodio/config.hpp"
#include "expodio/emit.hpp"
#include "expodio/engine.hpp"
#include "expodio/scan.hpp"
#include "expodio/verify.hpp"

namespace fs = std::filesystem;
using namespace expodio;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kUnresolved = 2, kRejected = 3 };

struct SolverFlags {
  std::string config_path;
  std::string ceiling;
  SettingsLayer layer;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "JSON file with solver settings")->check(CLI::ExistingFile);
    app.add_option("--ceiling", ceiling, "initial search covers c^y up to this value");
    app.add_option("--prime-budget", layer.prime_budget, "candidate primes per constraint");
    app.add_option("--prime-cap", layer.prime_cap, "largest candidate prime");
    app.add_option("--max-modulus", layer.max_modulus, "largest modulus popped from the queue");
    app.add_option("--max-pops", layer.max_pops, "queue pops before giving up");
    app.add_option("--wall-clock-ms", layer.wall_clock_ms, "per-instance time limit");
    app.add_option("--min-period", layer.min_period, "shortest constraint period worth a prime search");
  }

  SettingsLayer file_layer() const { return config_path.empty() ? SettingsLayer{} : load_settings_file(config_path); }

  SettingsLayer flag_layer() const {
    SettingsLayer out = layer;
    if (!ceiling.empty()) out.ceiling = config_detail::parse_ceiling(nlohmann::json(ceiling));
    return out;
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ScanIoError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw ScanIoError("cannot write " + p.string());
}

std::string solution_line(const SolutionList& sols) {
  if (sols.empty()) return "no solutions";
  std::string out;
  for (const auto& s : sols) {
    if (!out.empty()) out += " ";
    out += "(" + std::to_string(s.x) + "," + std::to_string(s.y) + ")";
  }
  return out;
}

struct SolveCommand {
  u64 a = 0, b = 0, c = 0;
  std::string emit_lean_dir, emit_text_dir, cert_path;
  bool json = false, trace = false;
  SolverFlags flags;

  int run() const {
    const EquationInstance e = EquationInstance::make(a, b, c);
    const SolverConfig cfg = resolve_config(flags.file_layer(), flags.flag_layer());
    const SolveResult r = solve(e, cfg);

    if (trace)
      for (const auto& line : r.trace) std::cerr << line << "\n";

    if (json) {
      nlohmann::ordered_json j = nlohmann::ordered_json::parse(record_to_line(make_record(e, r)));
      j["moduli_tried"] = r.effort.moduli_tried;
      j["primes_tried"] = r.effort.primes_tried;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << e.to_string() << "\n" << solution_line(r.solutions) << "\n" << to_string(r.status) << "\n";
    }

    if (!r.certificate) {
      if (!emit_lean_dir.empty() || !emit_text_dir.empty() || !cert_path.empty())
        std::cerr << "no certificate for an unresolved instance; nothing written\n";
      return kUnresolved;
    }
    if (!cert_path.empty()) write_file(cert_path, serialize(*r.certificate));
    if (!emit_lean_dir.empty()) {
      const RenderedProof p = emit_lean(*r.certificate);
      const fs::path dir = emit_lean_dir;
      const fs::path prelude = dir / (std::string(kLeanPreludeModule) + ".lean");
      if (!fs::exists(prelude)) write_file(prelude, lean_prelude());
      write_file(dir / (p.theorem_name + ".lean"), p.file_contents());
    }
    if (!emit_text_dir.empty())
      write_file(fs::path(emit_text_dir) / (theorem_name(e) + ".txt"), emit_text(*r.certificate));
    return kOk;
  }
};

struct ScanCommand {
  ScanRange range;
  std::optional<u64> jobs;
  std::string out, keep_certs;
  bool resume = false, retry = false;
  SolverFlags flags;

  int run() const {
    const SettingsLayer file = flags.file_layer();
    SettingsLayer cli = flags.flag_layer();
    cli.jobs = jobs;
    ScanOptions opt;
    opt.range = range;
    opt.jobs = resolve_jobs(file, cli);
    opt.out = out;
    opt.resume = resume;
    opt.retry_unresolved = retry;
    if (!keep_certs.empty()) opt.keep_certs = fs::path(keep_certs);
    opt.config = resolve_config(file, cli);
    const ScanSummary s = run_scan(opt);
    std::cout << s.line() << "\n";
    return kOk;
  }
};

int verify_command(const std::string& path) {
  const std::string text = read_file(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    std::cerr << path << ": empty certificate file\n";
    return kUsage;
  }
  if (!nlohmann::json::accept(text)) {
    std::cerr << path << ": not a JSON document\n";
    return kUsage;
  }
  const Verdict v = verify_serialized(text);
  if (v.accepted) {
    std::cout << "ACCEPT\n";
    return kOk;
  }
  std::cout << "REJECT";
  if (v.claim_index) std::cout << " at claim " << *v.claim_index;
  std::cout << ": " << v.reason << "\n";
  return kRejected;
}

int stats_command(const std::string& path) {
  if (!fs::exists(path)) throw ScanIoError("cannot read " + path);
  std::cout << render_stats(compute_stats(read_records(path)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and proof generator for a^x + b = c^y"};
  app.require_subcommand(1);

  SolveCommand solve_cmd;
  auto* solve_app = app.add_subcommand("solve", "solve one instance");
  solve_app->add_option("A", solve_cmd.a)->required();
  solve_app->add_option("B", solve_cmd.b)->required();
  solve_app->add_option("C", solve_cmd.c)->required();
  solve_app->add_option("--emit-lean", solve_cmd.emit_lean_dir, "write a Lean script into DIR");
  solve_app->add_option("--emit-text", solve_cmd.emit_text_dir, "write the prose proof into DIR");
  solve_app->add_option("--cert", solve_cmd.cert_path, "write the certificate to FILE");
  solve_app->add_flag("--json", solve_cmd.json, "print a JSON record instead of text");
  solve_app->add_flag("--trace", solve_cmd.trace, "print the search log to stderr");
  solve_cmd.flags.attach(*solve_app);

  ScanCommand scan_cmd;
  auto* scan_app = app.add_subcommand("scan", "solve every instance in a parameter cube");
  scan_app->add_option("--a-max", scan_cmd.range.a_max)->required()->check(CLI::Range(u64{2}, kMaxParameter));
  scan_app->add_option("--b-max", scan_cmd.range.b_max)->required()->check(CLI::Range(u64{1}, kMaxParameter));
  scan_app->add_option("--c-max", scan_cmd.range.c_max)->required()->check(CLI::Range(u64{2}, kMaxParameter));
  scan_app->add_option("--jobs", scan_cmd.jobs, "worker threads")->check(CLI::PositiveNumber);
  scan_app->add_option("--out", scan_cmd.out, "JSONL results file")->required();
  scan_app->add_flag("--resume", scan_cmd.resume, "skip instances already in the results file");
  scan_app->add_option("--keep-certs", scan_cmd.keep_certs, "also store certificates in DIR");
  scan_app->add_flag("--retry-unresolved", scan_cmd.retry, "rerun unresolved records with larger budgets");
  scan_cmd.flags.attach(*scan_app);

  std::string verify_path;
  auto* verify_app = app.add_subcommand("verify", "check a certificate");
  verify_app->add_option("FILE", verify_path)->required();

  std::string stats_path;
  auto* stats_app = app.add_subcommand("stats", "summarize a results file");
  stats_app->add_option("FILE", stats_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsage;
  }

  try {
    if (*solve_app) return solve_cmd.run();
    if (*scan_app) return scan_cmd.run();
    if (*verify_app) return verify_command(verify_path);
    if (*stats_app) return stats_command(stats_path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
