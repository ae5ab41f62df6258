#pragma once

#include <map>
#include <set>
#include <vector>

#include "minij/dataflow.hpp"

namespace minij {

/// Always-invoked helpers of a constructor/initializer/init block: calls that
/// appear as top-level statements of the body (not nested in any conditional)
/// targeting private-or-final methods of the same class.  Deliberately
/// ignores earlier returns and is never transitive.
std::vector<std::pair<const Stmt*, MethodRef>> compute_always_invoked(
    const ProgramTable& table, uint32_t cls, const MethodDecl& m);

struct InitClassFacts {
  std::set<uint32_t> decl_initialized;   // condition 1: field indices
  std::set<uint32_t> block_initialized;  // condition 2
  std::set<uint32_t> ctor_guaranteed;    // intersection over all constructors
  bool has_ctors = false;
  // Per constructor/initializer/init-block body.
  std::map<const MethodDecl*, std::set<uint32_t>> effective_initialized;
  std::map<const MethodDecl*, std::set<uint32_t>> directly_assigned;
  std::map<const MethodDecl*, std::vector<std::pair<const Stmt*, MethodRef>>>
      always_invoked;
};

/// Fields a body leaves non-null at its normal exit, per the shared dataflow
/// cache (stored fact `this.f` == NonNull at exit).
std::set<uint32_t> fields_assigned_at_exit(const Analysis& an, uint32_t cls,
                                           const MethodDecl& m,
                                           const MethodInfo* info);

InitClassFacts compute_init_facts(const Analysis& an, uint32_t cls);

/// Field-initialization conditions 1-4 (instance) and the static analog;
/// emits FIELD_NO_INIT.
void check_field_initialization(const Analysis& an, uint32_t cls,
                                const InitClassFacts& facts, DiagSink& sink);

/// Read-hook state for the use-before-init walk over one constructor /
/// initializer / init-block body.
class InitWalkState : public InitReadHook {
 public:
  InitWalkState(const Analysis& an, uint32_t cls, const InitClassFacts& facts,
                const MethodDecl& body, DiagSink& sink, std::string file);

  void on_field_read(FieldRef f, Span span, const NullnessStore& store) override;

  /// Called after each top-level statement; extends the preceding
  /// always-invoked set.
  void after_top_level(const Stmt* s);

 private:
  const Analysis& an_;
  uint32_t cls_;
  const InitClassFacts& facts_;
  const MethodDecl& body_;
  DiagSink& sink_;
  std::string file_;
  std::set<uint32_t> base_;       // decl/block initialized (+ ctor-guaranteed)
  std::set<uint32_t> preceding_;  // from already-passed always-invoked calls
};

}  // namespace minij
