#include "minij/driver.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "minij/boundary.hpp"
#include "minij/checks.hpp"
#include "minij/dataflow.hpp"
#include "minij/parser.hpp"

namespace minij {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string AccessPath::to_string(const Interner& names,
                                  const std::string& root_name) const {
  std::string s = root == Root::This ? "this" : root_name;
  for (uint32_t link : links) {
    s += "." + names.str(link >> 1);
    if (link & 1u) s += "()";
  }
  return s;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ParsedProgram {
  std::vector<std::unique_ptr<SourceFile>> files;
  std::vector<Diagnostic> parse_errors;
};

ParsedProgram parse_all(const std::vector<std::string>& sources) {
  ParsedProgram p;
  DiagSink prelude_sink;
  p.files.push_back(builtin_prelude(prelude_sink));
  for (const std::string& path : sources) {
    ParseResult r = parse_file(read_file(path), path);
    for (auto& e : r.errors) p.parse_errors.push_back(std::move(e));
    p.files.push_back(std::move(r.file));
  }
  return p;
}

void sort_dedup(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), diag_less);
  std::vector<Diagnostic> out;
  std::set<std::tuple<DiagCode, std::string, uint32_t, uint32_t>> seen;
  for (auto& d : diags) {
    auto key = std::make_tuple(d.code, d.file, d.span.begin, d.span.end);
    if (seen.insert(key).second) out.push_back(std::move(d));
  }
  diags = std::move(out);
}

int exit_code_for(const std::vector<Diagnostic>& diags) {
  bool any_internal = false;
  bool any_unsuppressed = false;
  for (const auto& d : diags) {
    if (d.code == DiagCode::Internal) any_internal = true;
    if (!d.suppressed) any_unsuppressed = true;
  }
  if (any_internal) return 2;
  return any_unsuppressed ? 1 : 0;
}

// --- --dump-dataflow --------------------------------------------------------------

struct DumpTarget {
  uint32_t cls = kNoId;
  const MethodDecl* method = nullptr;
  const MethodInfo* info = nullptr;
};

std::optional<DumpTarget> find_dump_target(const ProgramTable& table,
                                           const std::string& spec) {
  std::string name = spec;
  int arity = -1;
  if (auto slash = spec.find('/'); slash != std::string::npos) {
    name = spec.substr(0, slash);
    arity = std::stoi(spec.substr(slash + 1));
  }
  auto dot = name.rfind('.');
  if (dot == std::string::npos) return std::nullopt;
  std::string cls_name = name.substr(0, dot);
  std::string method = name.substr(dot + 1);
  const ClassInfo* ci = table.find(cls_name);
  if (!ci) return std::nullopt;
  for (const auto& mi : ci->methods) {
    if (mi.decl->name != method) continue;
    if (arity >= 0 && static_cast<int>(mi.param_types.size()) != arity) continue;
    return DumpTarget{ci->id, mi.decl, &mi};
  }
  for (const auto& mi : ci->ctors) {
    if (method != "<init>") break;
    if (arity >= 0 && static_cast<int>(mi.param_types.size()) != arity) continue;
    return DumpTarget{ci->id, mi.decl, &mi};
  }
  return std::nullopt;
}

std::string render_store(const NullnessStore& store, const ProgramTable& table,
                         const MethodDecl& owner) {
  std::vector<std::string> parts;
  for (const auto& [path, n] : store.facts()) {
    std::string root = path.root == AccessPath::Root::This
                           ? "this"
                           : owner.symbols[path.root_sym].name;
    parts.push_back(path.to_string(table.names, root) + "=" +
                    nullness_name(n));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out.empty() ? "(empty)" : out;
}

std::string dump_dataflow(const Analysis& an, const std::string& spec) {
  auto target = find_dump_target(an.table, spec);
  if (!target) return "dump-dataflow: method '" + spec + "' not found\n";
  UnitRef unit = an.unit_for_method(target->cls, target->method, target->info);
  const DataflowResult& r = an.result_for(unit);
  std::ostringstream os;
  os << "dataflow for " << spec << ":\n";
  std::vector<std::pair<const Stmt*, const NullnessStore*>> points;
  for (const auto& [stmt, store] : r.before_stmt) points.push_back({stmt, &store});
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.first->span.begin < b.first->span.begin;
  });
  for (const auto& [stmt, store] : points) {
    os << stmt->span.line << ":" << stmt->span.col << ": "
       << render_store(*store, an.table, *target->method) << "\n";
  }
  os << "exit: " << render_store(r.exit_store, an.table, *target->method) << "\n";
  return os.str();
}

// --- rendering --------------------------------------------------------------------

std::string render_text(const RunResult& result, const RunOptions& opts,
                        const std::string& dump) {
  std::ostringstream os;
  for (const auto& d : result.diagnostics) {
    if (d.suppressed && !opts.show_suppressed) continue;
    os << render_diag(d) << "\n";
  }
  if (!dump.empty()) os << dump;
  const RunReport& r = result.report;
  os << "checked " << r.files_analyzed << " file(s), " << r.methods_analyzed
     << " method body(ies); dataflow computations: " << r.dataflow_computations
     << "\n";
  os << "diagnostics:";
  if (r.diagnostics_by_code.empty()) {
    os << " none";
  } else {
    bool first = true;
    for (const auto& [code, n] : r.diagnostics_by_code) {
      os << (first ? " " : ", ") << code << "=" << n;
      first = false;
    }
  }
  os << "; suppressed: " << r.suppressed
     << "; assertion-model sites: " << r.assertion_suppression_sites << "\n";
  return os.str();
}

std::string render_json(const RunResult& result) {
  ordered_json j;
  j["diagnostics"] = ordered_json::array();
  for (const auto& d : result.diagnostics) {
    ordered_json e;
    e["file"] = d.file;
    e["line"] = d.span.line;
    e["col"] = d.span.col;
    e["code"] = diag_code_name(d.code);
    e["message"] = d.message;
    e["suppressed"] = d.suppressed;
    if (d.suppressed)
      e["reason"] = d.reason == SuppressReason::AssertionModel
                        ? "assertion-model"
                        : "annotation";
    j["diagnostics"].push_back(std::move(e));
  }
  ordered_json rep;
  rep["files"] = result.report.files_analyzed;
  rep["methods"] = result.report.methods_analyzed;
  rep["dataflowComputations"] = result.report.dataflow_computations;
  ordered_json by_code = ordered_json::object();
  for (const auto& [code, n] : result.report.diagnostics_by_code) by_code[code] = n;
  rep["diagnostics"] = std::move(by_code);
  rep["suppressed"] = result.report.suppressed;
  rep["assertionSites"] = result.report.assertion_suppression_sites;
  j["report"] = std::move(rep);
  return j.dump(2) + "\n";
}

}  // namespace

std::vector<std::string> collect_sources(const std::vector<std::string>& paths) {
  std::vector<std::string> out;
  for (const std::string& p : paths) {
    fs::path path(p);
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".mj")
          out.push_back(entry.path().string());
      }
    } else if (fs::is_regular_file(path, ec)) {
      out.push_back(path.string());
    } else {
      throw ConfigError("no such file or directory: '" + p + "'");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RunResult run_check(const std::vector<std::string>& paths, const RunOptions& opts) {
  RunResult result;
  auto t0 = std::chrono::steady_clock::now();

  validate_boundary_regexes(opts.config);
  std::vector<std::string> sources = collect_sources(paths);

  ParsedProgram parsed = parse_all(sources);
  result.report.parse_ms = ms_since(t0);
  result.report.files_analyzed = sources.size();

  DiagSink sink;
  for (auto& e : parsed.parse_errors) sink.emit(std::move(e));

  ProgramTable table = build_program(std::move(parsed.files), opts.config, sink);
  Boundary boundary(opts.config, table);
  boundary.run_mini_jarinfer();
  Analysis analysis(table, opts.config, boundary);

  CheckStats stats;
  check_program(analysis, sink, &stats);

  std::string dump;
  if (!opts.dump_method.empty()) dump = dump_dataflow(analysis, opts.dump_method);

  sort_dedup(sink.diags);
  result.diagnostics = std::move(sink.diags);
  result.warnings = std::move(sink.warnings);

  for (const ClassInfo& ci : table.classes)
    result.report.methods_analyzed += count_units(table, ci.id);
  result.report.dataflow_computations = analysis.computations();
  for (const auto& d : result.diagnostics) {
    if (d.suppressed) {
      ++result.report.suppressed;
    } else {
      ++result.report.diagnostics_by_code[diag_code_name(d.code)];
    }
  }
  result.report.assertion_suppression_sites = stats.assertion_sites.size();
  result.report.total_ms = ms_since(t0);

  result.exit_code = exit_code_for(result.diagnostics);
  result.text = render_text(result, opts, dump);
  result.json_text = render_json(result);
  return result;
}

// --- expect harness -----------------------------------------------------------------

namespace {

struct Expectations {
  std::set<std::pair<uint32_t, DiagCode>> expected;  // (line, code)
  std::set<uint32_t> noerror_lines;
};

Expectations parse_expectations(const std::string& path, bool* harness_error,
                                std::string* harness_msg) {
  Expectations ex;
  LexResult lx = lex(read_file(path), path);
  for (const auto& c : lx.comments) {
    std::string_view text = c.text;
    if (text.rfind("//!", 0) != 0) continue;
    std::string_view directive = text.substr(3);
    while (!directive.empty() && directive.back() == '\r') directive.remove_suffix(1);
    if (directive == "NOERROR") {
      ex.noerror_lines.insert(c.span.line);
    } else if (directive.rfind("ERROR:", 0) == 0) {
      std::string_view code_name = directive.substr(6);
      auto code = diag_code_from_name(code_name);
      if (!code) {
        *harness_error = true;
        *harness_msg = path + ":" + std::to_string(c.span.line) +
                       ": unknown diagnostic code '" + std::string(code_name) +
                       "' in expectation comment";
        continue;
      }
      ex.expected.insert({c.span.line, *code});
    } else {
      *harness_error = true;
      *harness_msg = path + ":" + std::to_string(c.span.line) +
                     ": bad expectation comment '" + std::string(text) + "'";
    }
  }
  return ex;
}

}  // namespace

ExpectResult run_expect(const std::string& dir, RunOptions opts) {
  ExpectResult result;
  fs::path config_path = fs::path(dir) / "minij.config.json";
  if (fs::exists(config_path))
    apply_config_json(opts.config, read_file(config_path.string()),
                      config_path.string());

  RunResult run = run_check({dir}, opts);
  std::vector<std::string> sources = collect_sources({dir});

  // Unsuppressed diagnostics per file as (line, code) sets.
  std::map<std::string, std::set<std::pair<uint32_t, DiagCode>>> actual;
  for (const auto& d : run.diagnostics)
    if (!d.suppressed) actual[d.file].insert({d.span.line, d.code});

  std::ostringstream os;
  bool harness_error = false;
  for (const std::string& path : sources) {
    std::string harness_msg;
    Expectations ex = parse_expectations(path, &harness_error, &harness_msg);
    if (!harness_msg.empty()) {
      os << "HARNESS ERROR: " << harness_msg << "\n";
      continue;
    }
    ExpectFileResult fr;
    fr.file = path;
    const auto& got = actual[path];
    for (const auto& [line, code] : ex.expected) {
      if (!got.count({line, code})) {
        fr.passed = false;
        fr.deltas.push_back("missing expected " +
                            std::string(diag_code_name(code)) + " at line " +
                            std::to_string(line));
      }
    }
    for (const auto& [line, code] : got) {
      if (!ex.expected.count({line, code})) {
        fr.passed = false;
        fr.deltas.push_back("unexpected " + std::string(diag_code_name(code)) +
                            " at line " + std::to_string(line));
      }
      if (ex.noerror_lines.count(line)) {
        fr.passed = false;
        fr.deltas.push_back("line " + std::to_string(line) +
                            " is marked //!NOERROR but got " +
                            diag_code_name(code));
      }
    }
    os << (fr.passed ? "PASS " : "FAIL ") << path << "\n";
    for (const auto& d : fr.deltas) os << "  " << d << "\n";
    result.all_passed = result.all_passed && fr.passed;
    result.files.push_back(std::move(fr));
  }
  if (harness_error) {
    result.all_passed = false;
    result.exit_code = 2;
  } else {
    result.exit_code = result.all_passed ? 0 : 1;
  }
  os << (result.all_passed ? "all files passed" : "some files FAILED") << "\n";
  result.text = os.str();
  return result;
}

DiffResult run_diff(const std::vector<std::string>& paths, RunOptions opts) {
  DiffResult result;
  RunOptions optimistic = opts;
  optimistic.config.pessimistic_mode = false;
  RunOptions pessimistic = opts;
  pessimistic.config.pessimistic_mode = true;

  RunResult a = run_check(paths, optimistic);
  RunResult b = run_check(paths, pessimistic);
  result.optimistic = a.report.diagnostics_by_code;
  result.pessimistic = b.report.diagnostics_by_code;
  for (const auto& [code, n] : result.optimistic) result.optimistic_total += n;
  for (const auto& [code, n] : result.pessimistic) result.pessimistic_total += n;
  result.monotone = result.pessimistic_total >= result.optimistic_total;

  std::ostringstream os;
  os << "mode comparison (unsuppressed diagnostics):\n";
  std::set<std::string> codes;
  for (const auto& [c, n] : result.optimistic) codes.insert(c);
  for (const auto& [c, n] : result.pessimistic) codes.insert(c);
  for (const auto& c : codes) {
    uint64_t o = result.optimistic.count(c) ? result.optimistic.at(c) : 0;
    uint64_t p = result.pessimistic.count(c) ? result.pessimistic.at(c) : 0;
    os << "  " << c << ": optimistic=" << o << " pessimistic=" << p << "\n";
  }
  os << "total: optimistic=" << result.optimistic_total
     << " pessimistic=" << result.pessimistic_total
     << " delta=" << (static_cast<int64_t>(result.pessimistic_total) -
                      static_cast<int64_t>(result.optimistic_total))
     << "\n";
  if (!result.monotone) {
    os << "MODE MONOTONICITY VIOLATED: pessimistic < optimistic\n";
    result.exit_code = 2;
  }
  result.text = os.str();
  return result;
}

BenchResult run_bench(const std::vector<std::string>& paths, RunOptions opts,
                      int repetitions) {
  if (repetitions < 3) throw ConfigError("bench requires at least 3 repetitions");
  BenchResult result;
  std::vector<std::string> sources = collect_sources(paths);

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };

  std::vector<double> parse_times;
  for (int i = 0; i < repetitions; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    ParsedProgram p = parse_all(sources);
    parse_times.push_back(ms_since(t0));
    if (p.files.empty()) break;
  }
  std::vector<double> full_times;
  RunResult last;
  for (int i = 0; i < repetitions; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    last = run_check(paths, opts);
    full_times.push_back(ms_since(t0));
  }

  result.parse_ms = median(parse_times);
  result.full_ms = median(full_times);
  result.overhead = result.parse_ms > 0 ? result.full_ms / result.parse_ms : 0;
  result.methods = last.report.methods_analyzed;
  result.computations = last.report.dataflow_computations;
  result.dataflow_ratio =
      result.methods ? static_cast<double>(result.computations) /
                           static_cast<double>(result.methods)
                     : 0.0;

  std::ostringstream os;
  os << "bench over " << sources.size() << " file(s), " << repetitions
     << " repetitions:\n";
  os << "  parse-only median: " << result.parse_ms << " ms\n";
  os << "  full check median: " << result.full_ms << " ms\n";
  os << "  overhead ratio: " << result.overhead << "\n";
  os << "  dataflow computations: " << result.computations << " over "
     << result.methods
     << " analyzed bodies (ratio " << result.dataflow_ratio << ")\n";
  if (result.dataflow_ratio > 1.0) {
    os << "CACHE DISCIPLINE VIOLATED: ratio > 1.0\n";
    result.exit_code = 2;
  }
  result.text = os.str();
  return result;
}

}  // namespace minij
