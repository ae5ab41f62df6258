#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "minij/driver.hpp"

namespace {

struct CommonFlags {
  std::string config_file;
  std::string annotated_packages;
  std::string unannotated_subpackages;
  std::vector<std::string> unannotated_classes;
  bool treat_generated = false;
  bool acknowledge_restrictive = false;
  bool jarinfer = false;
  bool pessimistic = false;
  std::vector<std::string> library_models;
  std::vector<std::string> stream_types;
  bool no_handlers = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "JSON config file");
  cmd->add_option("--annotated-packages", f.annotated_packages,
                  "regex over annotated package names");
  cmd->add_option("--unannotated-subpackages", f.unannotated_subpackages,
                  "regex over excluded subpackages");
  cmd->add_option("--unannotated-classes", f.unannotated_classes,
                  "qualified class names treated as unannotated");
  cmd->add_flag("--treat-generated-as-unannotated", f.treat_generated,
                "treat @Generated classes as unannotated");
  cmd->add_flag("--acknowledge-restrictive-annotations",
                f.acknowledge_restrictive,
                "honor restrictive annotations in unannotated code");
  cmd->add_flag("--jarinfer", f.jarinfer,
                "infer @NonNull parameters of unannotated methods");
  cmd->add_flag("--pessimistic", f.pessimistic,
                "pessimistic unannotated-code defaults (evaluation only)");
  cmd->add_option("--library-models", f.library_models,
                  "additional library model files");
  cmd->add_option("--stream-types", f.stream_types,
                  "stream classes for the filter/map handler");
  cmd->add_flag("--no-handlers", f.no_handlers,
                "disable contract/stream/restrictive handlers");
}

minij::CheckerConfig make_config(const CommonFlags& f) {
  minij::CheckerConfig cfg;
  std::string config_file = f.config_file;
  if (config_file.empty()) {
    if (const char* env = std::getenv("MINIJ_NULL_CONFIG")) config_file = env;
  }
  if (!config_file.empty()) cfg = minij::load_config_file(config_file);
  if (!f.annotated_packages.empty()) cfg.annotated_packages = f.annotated_packages;
  if (!f.unannotated_subpackages.empty())
    cfg.unannotated_subpackages = f.unannotated_subpackages;
  if (!f.unannotated_classes.empty()) cfg.unannotated_classes = f.unannotated_classes;
  if (f.treat_generated) cfg.treat_generated_as_unannotated = true;
  if (f.acknowledge_restrictive) cfg.acknowledge_restrictive = true;
  if (f.jarinfer) cfg.jarinfer_enabled = true;
  if (f.pessimistic) cfg.pessimistic_mode = true;
  if (!f.library_models.empty()) cfg.library_model_files = f.library_models;
  if (!f.stream_types.empty()) cfg.stream_types = f.stream_types;
  if (f.no_handlers) cfg.handlers_enabled = false;
  return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minij-null: a batch null-safety checker for MiniJ"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "check sources and report diagnostics");
  std::vector<std::string> check_paths;
  check->add_option("paths", check_paths, "files or directories")->required();
  CommonFlags check_flags;
  add_common(check, check_flags);
  std::string format = "text";
  check->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  bool show_suppressed = false;
  check->add_flag("--show-suppressed", show_suppressed,
                  "include suppressed diagnostics in output");
  std::string dump_method;
  check->add_option("--dump-dataflow", dump_method,
                    "print per-statement stores for pkg.Cls.method[/arity]");

  auto* expect = app.add_subcommand("expect", "run the expected-diagnostics harness");
  std::string expect_dir;
  expect->add_option("dir", expect_dir, "corpus directory")->required();
  CommonFlags expect_flags;
  add_common(expect, expect_flags);

  auto* diff = app.add_subcommand("diff", "compare optimistic vs pessimistic modes");
  std::vector<std::string> diff_paths;
  diff->add_option("paths", diff_paths, "files or directories")->required();
  CommonFlags diff_flags;
  add_common(diff, diff_flags);

  auto* bench = app.add_subcommand("bench", "measure parse-only vs full-check time");
  std::vector<std::string> bench_paths;
  bench->add_option("paths", bench_paths, "files or directories")->required();
  CommonFlags bench_flags;
  add_common(bench, bench_flags);
  int reps = 5;
  bench->add_option("--reps", reps, "repetitions (>= 3)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      minij::RunOptions opts;
      opts.config = make_config(check_flags);
      opts.format = format;
      opts.show_suppressed = show_suppressed;
      opts.dump_method = dump_method;
      minij::RunResult r = minij::run_check(check_paths, opts);
      print_warnings(r.warnings);
      std::cout << (opts.format == "json" ? r.json_text : r.text);
      return r.exit_code;
    }
    if (expect->parsed()) {
      minij::RunOptions opts;
      opts.config = make_config(expect_flags);
      minij::ExpectResult r = minij::run_expect(expect_dir, opts);
      std::cout << r.text;
      return r.exit_code;
    }
    if (diff->parsed()) {
      minij::RunOptions opts;
      opts.config = make_config(diff_flags);
      minij::DiffResult r = minij::run_diff(diff_paths, opts);
      std::cout << r.text;
      return r.exit_code;
    }
    if (bench->parsed()) {
      minij::RunOptions opts;
      opts.config = make_config(bench_flags);
      minij::BenchResult r = minij::run_bench(bench_paths, opts, reps);
      std::cout << r.text;
      return r.exit_code;
    }
  } catch (const minij::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
