#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "minij/accesspath.hpp"
#include "minij/boundary.hpp"
#include "minij/cfg.hpp"
#include "minij/diag.hpp"
#include "minij/handlers.hpp"
#include "minij/program.hpp"

namespace minij {

// An analyzable body: a method, constructor, initializer block, or lambda.
struct UnitRef {
  uint32_t cls = kNoId;
  const MethodDecl* method = nullptr;   // methods/ctors/init blocks
  const MethodInfo* info = nullptr;     // null for init blocks and lambdas
  const LambdaExpr* lambda = nullptr;
  const MethodDecl* symbol_owner = nullptr;     // symbol table holder
  const MethodInfo* enclosing_info = nullptr;   // lambdas: enclosing method
  bool is_static = false;

  const void* key() const {
    return lambda ? static_cast<const void*>(lambda)
                  : static_cast<const void*>(method);
  }
};

struct UnitContext {
  UnitRef ref;
  std::string file;
  bool seed_this = false;
  std::vector<std::pair<uint32_t, Nullness>> seeds;  // param symbol -> nullness
  std::vector<Refinement> entry_refinements;         // handler-injected facts
  bool return_is_ref = false;
  Nullness return_nullness = Nullness::Nullable;
  TypeRef return_type;
  const Block* body = nullptr;      // null for expression lambdas
  const Expr* body_expr = nullptr;  // expression-lambda body
};

struct DataflowResult {
  NullnessStore entry_store;
  std::unordered_map<const Stmt*, NullnessStore> before_stmt;
  NullnessStore exit_store;
  bool has_normal_exit = false;
  // Conditional exit stores for single-return-expression bodies (§6 streams).
  std::optional<NullnessStore> when_true, when_false, when_nonnull;
  bool internal_error = false;  // iteration bound exceeded; treat all-Nullable
  Span internal_span;
  uint64_t node_visits = 0;
};

struct LambdaSig {
  bool valid = false;
  std::vector<Nullness> params;
  Nullness ret = Nullness::Nullable;
  bool ret_is_ref = false;
};

/// Hooks threaded through expression evaluation during the checking walk;
/// null during plain dataflow.
struct InitReadHook {
  virtual ~InitReadHook() = default;
  virtual void on_field_read(FieldRef f, Span span, const NullnessStore&) = 0;
};

struct EvalHooks {
  DiagSink* sink = nullptr;
  InitReadHook* init = nullptr;
  std::vector<const LambdaExpr*>* lambdas = nullptr;  // literals encountered
  std::vector<Span>* assertion_sites = nullptr;
};

/// Orchestrates dataflow over a built program: boundary-aware nullability of
/// declarations, handler registry, and the run-at-most-once-per-unit cache.
class Analysis {
 public:
  Analysis(const ProgramTable& table, const CheckerConfig& config,
           const Boundary& boundary);

  const ProgramTable& table;
  const CheckerConfig& config;
  const Boundary& boundary;
  HandlerRegistry handlers;

  /// Cached fixpoint; at most one computation per unit, also under
  /// concurrent callers.  The counter observes computations.
  const DataflowResult& result_for(const UnitRef& unit) const;
  uint64_t computations() const { return computations_.load(); }

  // Declared / boundary-resolved nullability (no handler overlay).
  Nullness param_nullness(MethodRef m, bool is_ctor, size_t pos) const;
  Nullness return_nullness(MethodRef m) const;
  Nullness field_nullness(FieldRef f) const;
  ResolvedNullness override_param(MethodRef super_m, size_t pos) const;
  ResolvedNullness override_return(MethodRef super_m) const;

  LambdaSig lambda_signature(const LambdaExpr& l) const;
  std::pair<const Contract*, bool> contract_for(MethodRef m, bool is_ctor) const;

  UnitRef unit_for_method(uint32_t cls, const MethodDecl* m,
                          const MethodInfo* info) const;
  UnitRef unit_for_lambda(const UnitRef& enclosing, const LambdaExpr* l) const;
  UnitContext make_context(const UnitRef& unit) const;
  const std::string& file_of_class(uint32_t cls) const;

 private:
  DataflowResult run_dataflow(const UnitContext& ctx) const;
  std::vector<std::string> class_files_;

  struct CacheEntry {
    std::once_flag once;
    DataflowResult result;
  };
  mutable std::mutex mu_;
  mutable std::unordered_map<const void*, std::unique_ptr<CacheEntry>> cache_;
  mutable std::atomic<uint64_t> computations_{0};
};

struct EvalOut {
  Nullness value = Nullness::Nullable;
  std::optional<AccessPath> path;
};

struct CondStores {
  NullnessStore t, f;
};

/// Abstract evaluation of one expression; threads the store through
/// subexpressions, applies purity rules, consults handlers, and (when hooks
/// are present) emits check diagnostics.
EvalOut eval_expr(const Analysis& an, const UnitContext& ctx, const Expr& e,
                  NullnessStore& store, EvalHooks* hooks = nullptr);

/// Evaluation in condition position: true/false edge stores with null-test
/// and contract refinements applied.
CondStores eval_cond(const Analysis& an, const UnitContext& ctx, const Expr& e,
                     NullnessStore store, EvalHooks* hooks = nullptr);

/// Assignment semantics shared by real statements and desugared arms:
/// evaluates the target's receiver, kills extensions, stores the fact, and
/// (with hooks) reports ASSIGN_NULLABLE.
void apply_assign(const Analysis& an, const UnitContext& ctx, const Expr* lhs,
                  const LocalDeclStmt* decl, const EvalOut& value, Span value_span,
                  NullnessStore& store, EvalHooks* hooks = nullptr);

void check_field_assign(const Analysis& an, const UnitContext& ctx, FieldRef ref,
                        const EvalOut& value, Span value_span, EvalHooks* hooks);

void check_return_value(const Analysis& an, const UnitContext& ctx,
                        const EvalOut& out, Span span, EvalHooks* hooks);

/// Access path of an expression, when it forms one (no evaluation).
std::optional<AccessPath> path_of(const Analysis& an, const UnitContext& ctx,
                                  const Expr& e);

/// Fixpoint over a CFG from an explicit entry store (exposed for tests; the
/// cache calls this internally).
DataflowResult fixpoint(const Analysis& an, const UnitContext& ctx,
                        const Cfg& cfg, const NullnessStore& entry);

}  // namespace minij
