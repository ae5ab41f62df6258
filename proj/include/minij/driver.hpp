#pragma once

#include <map>
#include <string>
#include <vector>

#include "minij/config.hpp"
#include "minij/diag.hpp"

namespace minij {

struct RunOptions {
  CheckerConfig config;
  bool show_suppressed = false;
  std::string format = "text";  // or "json"
  std::string dump_method;      // "pkg.Cls.method[/arity]"; empty = off
};

struct RunReport {
  uint64_t files_analyzed = 0;
  uint64_t methods_analyzed = 0;  // bodies incl. lambdas in annotated code
  uint64_t dataflow_computations = 0;
  std::map<std::string, uint64_t> diagnostics_by_code;  // unsuppressed
  uint64_t suppressed = 0;
  uint64_t assertion_suppression_sites = 0;
  double parse_ms = 0;  // excluded from text/json output (determinism)
  double total_ms = 0;
};

struct RunResult {
  std::vector<Diagnostic> diagnostics;  // sorted + deduped, suppressed included
  std::vector<std::string> warnings;
  RunReport report;
  int exit_code = 0;  // 0 clean, 1 diagnostics, 2 config/IO/internal
  std::string text;
  std::string json_text;
};

/// Full pipeline: parse -> program table -> mini-JarInfer -> checks.
/// Paths may be .mj files or directories (recursed, sorted).
RunResult run_check(const std::vector<std::string>& paths, const RunOptions& opts);

struct ExpectFileResult {
  std::string file;
  bool passed = true;
  std::vector<std::string> deltas;
};

struct ExpectResult {
  std::vector<ExpectFileResult> files;
  bool all_passed = true;
  int exit_code = 0;
  std::string text;
};

/// Expected-diagnostics harness over a corpus directory: `//!ERROR:<CODE>`
/// marks lines that must be flagged, `//!NOERROR` lines that must not.
/// A `minij.config.json` in the directory is applied when present.
ExpectResult run_expect(const std::string& dir, RunOptions opts);

struct DiffResult {
  std::map<std::string, uint64_t> optimistic, pessimistic;
  uint64_t optimistic_total = 0, pessimistic_total = 0;
  bool monotone = false;  // pessimistic >= optimistic
  int exit_code = 0;
  std::string text;
};

/// Runs the default (optimistic) and pessimistic modes back to back.
DiffResult run_diff(const std::vector<std::string>& paths, RunOptions opts);

struct BenchResult {
  double parse_ms = 0;   // median of parse-only runs
  double full_ms = 0;    // median of full-check runs
  double overhead = 0;   // full / parse
  double dataflow_ratio = 0;  // computations per analyzed method, <= 1.0
  uint64_t methods = 0;
  uint64_t computations = 0;
  int exit_code = 0;
  std::string text;
};

BenchResult run_bench(const std::vector<std::string>& paths, RunOptions opts,
                      int repetitions);

/// .mj files under the given paths (files kept as-is, directories recursed);
/// sorted for determinism.  Throws ConfigError on missing paths.
std::vector<std::string> collect_sources(const std::vector<std::string>& paths);

}  // namespace minij
