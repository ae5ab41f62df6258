#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "minij/ast.hpp"
#include "minij/config.hpp"
#include "minij/contracts.hpp"
#include "minij/diag.hpp"
#include "minij/nullness.hpp"

namespace minij {

/// String interner; access paths key on the resulting ids.
class Interner {
 public:
  uint32_t intern(const std::string& s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(strings_.size());
    strings_.push_back(s);
    ids_.emplace(strings_.back(), id);
    return id;
  }
  const std::string& str(uint32_t id) const { return strings_[id]; }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, uint32_t> ids_;
};

/// Which step of the annotated/unannotated pipeline decided a class's side.
enum class AnnotationDecision {
  AnnotatedDefault,       // package matched, nothing excluded it
  NotInAnnotatedPackages, // first step said no
  UnannotatedSubpackage,
  UnannotatedClassList,
  GeneratedUnannotated,
};

struct FieldInfo {
  const FieldDecl* decl = nullptr;
  uint32_t owner = kNoId;
  uint32_t name_id = 0;
  TypeRef type;
  std::optional<Nullness> explicit_nullness;
  bool is_static = false;
  bool is_reference = false;
};

struct MethodInfo {
  const MethodDecl* decl = nullptr;
  uint32_t owner = kNoId;
  uint32_t name_id = 0;
  TypeRef return_type;  // Void for void methods; Infer never appears
  std::vector<TypeRef> param_types;
  std::vector<std::optional<Nullness>> explicit_params;
  std::optional<Nullness> explicit_return;
  bool is_initializer = false;
  std::optional<Contract> contract;
  std::optional<MethodRef> overrides;  // nearest overridden method
};

/// Per-class summary: declarations, effective members, override relations.
struct ClassInfo {
  const ClassDecl* decl = nullptr;
  uint32_t id = kNoId;
  std::string package;
  std::string qualified;
  std::optional<uint32_t> super;
  std::vector<FieldInfo> fields;
  std::vector<MethodInfo> methods;  // declared methods only
  std::vector<MethodInfo> ctors;
  bool annotated = false;
  AnnotationDecision decision = AnnotationDecision::NotInAnnotatedPackages;

  // Synthetic symbol owners for field-initializer expressions (lambdas in
  // them need a symbol table).
  std::unique_ptr<MethodDecl> field_init_owner;
  std::unique_ptr<MethodDecl> static_field_init_owner;
};

class ProgramTable {
 public:
  std::vector<std::unique_ptr<SourceFile>> files;
  std::vector<ClassInfo> classes;
  std::unordered_map<std::string, uint32_t> by_name;
  Interner names;

  const ClassInfo* find(const std::string& qualified) const {
    auto it = by_name.find(qualified);
    return it == by_name.end() ? nullptr : &classes[it->second];
  }
  const ClassInfo& cls(uint32_t id) const { return classes[id]; }

  const MethodInfo& method(MethodRef r) const { return classes[r.cls].methods[r.index]; }
  const MethodInfo& ctor(MethodRef r) const { return classes[r.cls].ctors[r.index]; }
  const FieldInfo& field(FieldRef r) const { return classes[r.cls].fields[r.index]; }

  /// Walks the hierarchy; returns the defining class's entry.
  const FieldInfo* lookup_field(uint32_t cls_id, const std::string& name,
                                FieldRef* out = nullptr) const;
  std::optional<MethodRef> lookup_method(uint32_t cls_id, const std::string& name,
                                         size_t arity) const;

  /// Total abstract-method count across the interface hierarchy (functional
  /// interfaces have exactly one).
  size_t abstract_method_count(uint32_t iface) const;
  std::optional<MethodRef> sole_abstract_method(uint32_t iface) const;

  /// Substitutes `owner`'s type variables in `t` using the receiver's
  /// written type arguments; leaves variables opaque when absent.
  TypeRef substitute(const TypeRef& t, const TypeRef& receiver) const;
};

/// Effective nullability under NNEL: explicit annotation if present, else
/// NonNull.  Only meaningful for reference-typed slots of annotated code.
inline Nullness effective(const std::optional<Nullness>& explicit_n) {
  return explicit_n.value_or(Nullness::NonNull);
}
enum class NullnessOrigin { Explicit, NnelDefault, BoundaryResolved };
inline NullnessOrigin origin_of(const std::optional<Nullness>& explicit_n) {
  return explicit_n ? NullnessOrigin::Explicit : NullnessOrigin::NnelDefault;
}

/// Builds the table: registers classes, resolves supers/members/bodies,
/// computes overrides, classifies annotatedness.  Resolution problems are
/// reported through `sink`; the table stays usable afterwards.
ProgramTable build_program(std::vector<std::unique_ptr<SourceFile>> files,
                           const CheckerConfig& config, DiagSink& sink);

/// MiniJ prelude (package `lang`: Object, String, Error) injected by the
/// driver before user files.
std::unique_ptr<SourceFile> builtin_prelude(DiagSink& sink);

bool has_annotation(const std::vector<AnnotationUse>& anns, AnnKind kind);
const AnnotationUse* find_annotation(const std::vector<AnnotationUse>& anns,
                                     AnnKind kind);

}  // namespace minij
