#include "minij/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace minij {

namespace {

using json = nlohmann::json;

Nullness parse_nullness(const std::string& s, const std::string& origin) {
  if (s == "nullable" || s == "Nullable") return Nullness::Nullable;
  if (s == "nonnull" || s == "NonNull") return Nullness::NonNull;
  throw ConfigError(origin + ": bad nullness value '" + s +
                    "' (expected \"nullable\" or \"nonnull\")");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void apply_config_json(CheckerConfig& cfg, const std::string& json_text,
                       const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(origin + ": config must be an object");
  try {
    if (j.contains("annotatedPackages"))
      cfg.annotated_packages = j["annotatedPackages"].get<std::string>();
    if (j.contains("unannotatedSubPackages"))
      cfg.unannotated_subpackages = j["unannotatedSubPackages"].get<std::string>();
    if (j.contains("unannotatedClasses"))
      cfg.unannotated_classes =
          j["unannotatedClasses"].get<std::vector<std::string>>();
    if (j.contains("treatGeneratedAsUnannotated"))
      cfg.treat_generated_as_unannotated =
          j["treatGeneratedAsUnannotated"].get<bool>();
    if (j.contains("acknowledgeRestrictiveAnnotations"))
      cfg.acknowledge_restrictive =
          j["acknowledgeRestrictiveAnnotations"].get<bool>();
    if (j.contains("jarInferEnabled"))
      cfg.jarinfer_enabled = j["jarInferEnabled"].get<bool>();
    if (j.contains("pessimisticMode"))
      cfg.pessimistic_mode = j["pessimisticMode"].get<bool>();
    if (j.contains("libraryModelFiles"))
      cfg.library_model_files =
          j["libraryModelFiles"].get<std::vector<std::string>>();
    if (j.contains("streamTypes"))
      cfg.stream_types = j["streamTypes"].get<std::vector<std::string>>();
    if (j.contains("maxAccessPathDepth"))
      cfg.max_access_path_depth = j["maxAccessPathDepth"].get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

CheckerConfig load_config_file(const std::string& path) {
  CheckerConfig cfg;
  apply_config_json(cfg, read_file(path), path);
  return cfg;
}

std::vector<LibraryModel> load_model_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.is_array()) throw ConfigError(path + ": model file must be a list");
  std::vector<LibraryModel> models;
  for (const auto& item : j) {
    LibraryModel m;
    try {
      m.cls = item.at("class").get<std::string>();
      m.method = item.at("method").get<std::string>();
      m.arity = item.at("arity").get<int>();
      if (item.contains("params")) {
        for (const auto& [k, v] : item["params"].items())
          m.params[std::stoi(k)] = parse_nullness(v.get<std::string>(), path);
      }
      if (item.contains("return"))
        m.ret = parse_nullness(item["return"].get<std::string>(), path);
      if (item.contains("behavior")) {
        const auto& b = item["behavior"];
        if (b.contains("assertNonNull"))
          m.assert_nonnull_arg = b["assertNonNull"].get<int>();
        if (b.contains("contract"))
          m.contract = b["contract"].get<std::string>();
      }
    } catch (const json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
    models.push_back(std::move(m));
  }
  return models;
}

const std::vector<LibraryModel>& default_models() {
  static const std::vector<LibraryModel> models = [] {
    std::vector<LibraryModel> m;
    {
      LibraryModel requireNonNull;
      requireNonNull.cls = "std.Objects";
      requireNonNull.method = "requireNonNull";
      requireNonNull.arity = 1;
      requireNonNull.ret = Nullness::NonNull;
      requireNonNull.assert_nonnull_arg = 0;
      m.push_back(std::move(requireNonNull));
    }
    {
      LibraryModel mapGet;
      mapGet.cls = "std.Map";
      mapGet.method = "get";
      mapGet.arity = 1;
      mapGet.ret = Nullness::Nullable;
      m.push_back(std::move(mapGet));
    }
    {
      LibraryModel valueOf;
      valueOf.cls = "std.String";
      valueOf.method = "valueOf";
      valueOf.arity = 1;
      valueOf.ret = Nullness::NonNull;
      m.push_back(std::move(valueOf));
    }
    return m;
  }();
  return models;
}

}  // namespace minij
