#pragma once

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "minij/config.hpp"
#include "minij/contracts.hpp"
#include "minij/program.hpp"

namespace minij {

/// Where a boundary-resolved nullability came from (Fig. 4 pipeline stages).
enum class Provenance {
  Explicit,           // annotated code, explicit annotation
  NnelDefault,        // annotated code, NNEL default
  Model,              // library model entry
  Restrictive,        // acknowledged restrictive annotation in unannotated code
  JarInfer,           // mini-JarInfer inference
  OptimisticDefault,
  PessimisticDefault,
};

const char* provenance_name(Provenance p);

struct ResolvedNullness {
  Nullness nullness = Nullness::Nullable;
  Provenance provenance = Provenance::OptimisticDefault;
};

/// Call sites consume a foreign signature; overrides/lambdas implement it.
enum class BoundaryContext { CallSite, OverrideSuper };

/// Compiled boundary configuration + models + mini-JarInfer results.
class Boundary {
 public:
  Boundary(const CheckerConfig& config, const ProgramTable& table);

  /// The first four Fig. 4 steps, in order.  Pure function of its inputs.
  static AnnotationDecision classify(const std::string& package_name,
                                     const std::string& qualified_name,
                                     const std::vector<AnnotationUse>& anns,
                                     const CheckerConfig& config);

  /// Resolution for parameters/returns of *unannotated* methods.
  ResolvedNullness resolve_param(MethodRef m, bool is_ctor, size_t position,
                                 BoundaryContext ctx) const;
  ResolvedNullness resolve_return(MethodRef m, BoundaryContext ctx) const;
  /// Fields of unannotated classes, read from annotated code.
  ResolvedNullness resolve_field(FieldRef f) const;

  const LibraryModel* model_for(MethodRef m, bool is_ctor) const;

  /// Contract from a model's behavior entry (assert-nonnull, contract string).
  const Contract* contract_for(MethodRef m, bool is_ctor) const;

  /// Must-dereference parameter inference over unannotated classes with
  /// bodies; fills jarinfer_nonnull_.  Requires CFG machinery, so it runs
  /// from the driver after construction.
  void run_mini_jarinfer();

  bool jarinfer_nonnull(MethodRef m, bool is_ctor, size_t position) const;

  const CheckerConfig& config() const { return config_; }
  const ProgramTable& table() const { return table_; }

 private:
  std::string method_key(MethodRef m, bool is_ctor) const;

  const CheckerConfig& config_;
  const ProgramTable& table_;
  std::vector<LibraryModel> models_;                   // defaults + files
  std::map<std::string, const LibraryModel*> by_key_;  // "cls#method#arity"
  std::map<std::string, Contract> model_contracts_;
  std::map<std::string, bool> jarinfer_nonnull_;       // "cls#method#arity#pos"
};

/// Regex validation used by config loading; throws ConfigError.
void validate_boundary_regexes(const CheckerConfig& config);

}  // namespace minij
