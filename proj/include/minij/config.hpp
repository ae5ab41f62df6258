#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minij/nullness.hpp"

namespace minij {

/// Configuration / IO problems; the CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hand-written nullability record for one method in unannotated code.
struct LibraryModel {
  std::string cls;     // qualified class name
  std::string method;  // "<init>" for constructors
  int arity = 0;
  std::map<int, Nullness> params;
  std::optional<Nullness> ret;
  std::optional<int> assert_nonnull_arg;
  std::optional<std::string> contract;
};

struct CheckerConfig {
  std::string annotated_packages;       // regex over package names; required
  std::string unannotated_subpackages;  // regex; empty = matches nothing
  std::vector<std::string> unannotated_classes;  // qualified names
  bool treat_generated_as_unannotated = false;
  bool acknowledge_restrictive = false;
  bool jarinfer_enabled = false;
  bool pessimistic_mode = false;  // evaluation-only switch
  std::vector<std::string> library_model_files;
  std::vector<std::string> stream_types = {"std.Observable"};
  int max_access_path_depth = 5;
  uint64_t max_node_visits = 10000;
  bool handlers_enabled = true;
};

/// Parse a JSON config file (keys per README).  Throws ConfigError.
CheckerConfig load_config_file(const std::string& path);

/// Overlay JSON text onto an existing config.  Throws ConfigError.
void apply_config_json(CheckerConfig& cfg, const std::string& json_text,
                       const std::string& origin);

/// Library model files: a JSON list of
///   {class, method, arity, params:{"0":"nullable"|"nonnull"},
///    return:"...", behavior:{assertNonNull:0} | {contract:"..."}}
std::vector<LibraryModel> load_model_file(const std::string& path);

/// Models shipped with the checker (the tiny `std` package analog of the
/// paper's JDK models).
const std::vector<LibraryModel>& default_models();

}  // namespace minij
