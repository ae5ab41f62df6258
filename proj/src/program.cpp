#include "minij/program.hpp"

#include <cassert>
#include <sstream>
#include <unordered_set>

#include "minij/boundary.hpp"
#include "minij/parser.hpp"

namespace minij {

bool has_annotation(const std::vector<AnnotationUse>& anns, AnnKind kind) {
  for (const auto& a : anns)
    if (a.kind == kind && !a.ignored) return true;
  return false;
}

const AnnotationUse* find_annotation(const std::vector<AnnotationUse>& anns,
                                     AnnKind kind) {
  for (const auto& a : anns)
    if (a.kind == kind && !a.ignored) return &a;
  return nullptr;
}

// --- ProgramTable lookups ----------------------------------------------------

const FieldInfo* ProgramTable::lookup_field(uint32_t cls_id,
                                            const std::string& name,
                                            FieldRef* out) const {
  uint32_t c = cls_id;
  while (c != kNoId) {
    const ClassInfo& ci = classes[c];
    for (uint32_t i = 0; i < ci.fields.size(); ++i) {
      if (ci.fields[i].decl->name == name) {
        if (out) *out = FieldRef{c, i};
        return &ci.fields[i];
      }
    }
    c = ci.super.value_or(kNoId);
  }
  return nullptr;
}

std::optional<MethodRef> ProgramTable::lookup_method(uint32_t cls_id,
                                                     const std::string& name,
                                                     size_t arity) const {
  uint32_t c = cls_id;
  while (c != kNoId) {
    const ClassInfo& ci = classes[c];
    for (uint32_t i = 0; i < ci.methods.size(); ++i) {
      const MethodInfo& m = ci.methods[i];
      if (m.decl->name == name && m.param_types.size() == arity)
        return MethodRef{c, i};
    }
    c = ci.super.value_or(kNoId);
  }
  return std::nullopt;
}

size_t ProgramTable::abstract_method_count(uint32_t iface) const {
  size_t n = 0;
  uint32_t c = iface;
  while (c != kNoId) {
    const ClassInfo& ci = classes[c];
    if (!ci.decl->is_interface) break;
    n += ci.methods.size();
    c = ci.super.value_or(kNoId);
  }
  return n;
}

std::optional<MethodRef> ProgramTable::sole_abstract_method(uint32_t iface) const {
  if (abstract_method_count(iface) != 1) return std::nullopt;
  uint32_t c = iface;
  while (c != kNoId) {
    const ClassInfo& ci = classes[c];
    if (!ci.methods.empty()) return MethodRef{c, 0};
    c = ci.super.value_or(kNoId);
  }
  return std::nullopt;
}

TypeRef ProgramTable::substitute(const TypeRef& t, const TypeRef& receiver) const {
  if (receiver.kind != TypeRef::Kind::Class || receiver.args.empty()) return t;
  if (t.kind == TypeRef::Kind::TypeVar && t.tv_owner == receiver.cls &&
      t.tv_index < receiver.args.size()) {
    return receiver.args[t.tv_index];
  }
  if (t.kind == TypeRef::Kind::Class && !t.args.empty()) {
    TypeRef out = t;
    for (auto& a : out.args) a = substitute(a, receiver);
    return out;
  }
  return t;
}

// --- builtin prelude -----------------------------------------------------------

namespace {
constexpr const char* kPrelude = R"(package lang;
class Object {
  public String toString() { return ""; }
  public boolean equals(@Nullable Object other) { return this == other; }
}
class String {
  public int length() { return 0; }
}
class Error {
  Error(@Nullable Object message) { }
}
)";
}  // namespace

std::unique_ptr<SourceFile> builtin_prelude(DiagSink& sink) {
  ParseResult r = parse_file(kPrelude, "<lang>");
  for (auto& e : r.errors) sink.emit(std::move(e));
  return std::move(r.file);
}

// --- build_program ---------------------------------------------------------------

namespace {

struct Builder {
  ProgramTable table;
  const CheckerConfig& config;
  DiagSink& sink;

  std::string file_of(uint32_t cls) const {
    // Walk files to find the owning path; classes are few, files fewer.
    for (const auto& f : table.files)
      for (const auto& c : f->classes)
        if (c.get() == table.classes[cls].decl) return f->path;
    return "<unknown>";
  }

  void err(const std::string& file, Span span, DiagCode code, std::string msg) {
    sink.emit(code, file, span, std::move(msg));
  }

  // Pass 1: register classes, classify annotatedness.
  void register_classes() {
    for (const auto& f : table.files) {
      std::string pkg = f->package_str();
      for (const auto& c : f->classes) {
        std::string qualified = pkg.empty() ? c->name : pkg + "." + c->name;
        if (table.by_name.count(qualified)) {
          err(f->path, c->name_span, DiagCode::Resolution,
              "duplicate class '" + qualified + "'");
          continue;
        }
        ClassInfo ci;
        ci.decl = c.get();
        ci.id = static_cast<uint32_t>(table.classes.size());
        ci.package = pkg;
        ci.qualified = qualified;
        ci.decision = Boundary::classify(pkg, qualified, c->anns, config);
        ci.annotated = ci.decision == AnnotationDecision::AnnotatedDefault;
        table.by_name.emplace(qualified, ci.id);
        table.classes.push_back(std::move(ci));
      }
    }
  }

  std::optional<uint32_t> resolve_class_name(const std::vector<std::string>& parts,
                                             const std::string& package) const {
    if (parts.size() == 1) {
      if (!package.empty()) {
        auto it = table.by_name.find(package + "." + parts[0]);
        if (it != table.by_name.end()) return it->second;
      }
      auto it = table.by_name.find("lang." + parts[0]);
      if (it != table.by_name.end()) return it->second;
      return std::nullopt;
    }
    std::string joined;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i) joined.push_back('.');
      joined += parts[i];
    }
    auto it = table.by_name.find(joined);
    if (it != table.by_name.end()) return it->second;
    return std::nullopt;
  }

  // Pass 2: supers (implicit lang.Object), kind agreement, cycles.
  void resolve_supers() {
    auto object_id = table.by_name.find("lang.Object");
    for (auto& ci : table.classes) {
      const ClassDecl& d = *ci.decl;
      if (!d.super_name.empty()) {
        auto s = resolve_class_name(d.super_name, ci.package);
        if (!s) {
          err(file_of(ci.id), d.super_span, DiagCode::Resolution,
              "unknown supertype of '" + ci.qualified + "'");
        } else if (table.classes[*s].decl->is_interface != d.is_interface) {
          err(file_of(ci.id), d.super_span, DiagCode::Resolution,
              "'" + ci.qualified + "' and its supertype disagree on class vs interface");
        } else {
          ci.super = *s;
        }
      } else if (!d.is_interface && object_id != table.by_name.end() &&
                 ci.qualified != "lang.Object") {
        ci.super = object_id->second;
      }
    }
    // Break inheritance cycles.
    for (auto& ci : table.classes) {
      std::unordered_set<uint32_t> seen;
      uint32_t c = ci.id;
      while (true) {
        if (!table.classes[c].super) break;
        uint32_t s = *table.classes[c].super;
        if (s == ci.id) {
          err(file_of(ci.id), ci.decl->name_span, DiagCode::Resolution,
              "inheritance cycle involving '" + ci.qualified + "'");
          table.classes[c].super.reset();
          break;
        }
        if (!seen.insert(s).second) break;
        c = s;
      }
    }
  }

  TypeRef resolve_type_use(const TypeUse& t, const ClassInfo& ctx,
                           const std::string& file) {
    switch (t.kind) {
      case TypeUse::Kind::Infer: return TypeRef::of(TypeRef::Kind::Unknown);
      case TypeUse::Kind::Void: return TypeRef::of(TypeRef::Kind::Void);
      case TypeUse::Kind::Int: return TypeRef::of(TypeRef::Kind::Int);
      case TypeUse::Kind::Boolean: return TypeRef::of(TypeRef::Kind::Boolean);
      case TypeUse::Kind::Named:
      case TypeUse::Kind::Generic:
      case TypeUse::Kind::Array: {
        if (t.name.size() == 1) {
          const auto& tp = ctx.decl->type_params;
          for (size_t i = 0; i < tp.size(); ++i) {
            if (tp[i] == t.name[0]) {
              TypeRef tv;
              tv.kind = TypeRef::Kind::TypeVar;
              tv.tv_owner = ctx.id;
              tv.tv_index = static_cast<uint32_t>(i);
              return tv;
            }
          }
        }
        auto c = resolve_class_name(t.name, ctx.package);
        if (!c) {
          err(file, t.span, DiagCode::Resolution,
              "unknown type '" + print_type_use(t) + "'");
          return TypeRef::of(TypeRef::Kind::Error);
        }
        if (t.kind == TypeUse::Kind::Array) {
          TypeRef a;
          a.kind = TypeRef::Kind::Array;
          a.cls = *c;
          return a;
        }
        TypeRef r = TypeRef::class_of(*c);
        for (const auto& arg : t.args)
          r.args.push_back(resolve_type_use(arg, ctx, file));
        return r;
      }
    }
    return TypeRef::of(TypeRef::Kind::Error);
  }

  // Explicit nullability from annotations; conflicts reported in annotated code.
  std::optional<Nullness> explicit_nullness(const std::vector<AnnotationUse>& anns,
                                            bool annotated, const std::string& file,
                                            Span span) {
    bool has_nullable = has_annotation(anns, AnnKind::Nullable);
    bool has_nonnull = has_annotation(anns, AnnKind::NonNull);
    if (has_nullable && has_nonnull) {
      if (annotated)
        err(file, span, DiagCode::ConflictingAnnot,
            "both @Nullable and @NonNull on one declaration site");
      return Nullness::Nullable;
    }
    if (has_nullable) return Nullness::Nullable;
    if (has_nonnull) return Nullness::NonNull;
    return std::nullopt;
  }

  MethodInfo make_method_info(ClassInfo& ci, const MethodDecl& m,
                              const std::string& file) {
    MethodInfo mi;
    mi.decl = &m;
    mi.owner = ci.id;
    mi.name_id = table.names.intern(m.name);
    mi.return_type = m.kind == MethodDecl::Kind::Method
                         ? resolve_type_use(m.return_type, ci, file)
                         : TypeRef::of(TypeRef::Kind::Void);
    for (const auto& p : m.params) {
      mi.param_types.push_back(resolve_type_use(p.type, ci, file));
      mi.explicit_params.push_back(
          explicit_nullness(p.anns, ci.annotated, file, p.span));
    }
    mi.explicit_return =
        explicit_nullness(m.anns, ci.annotated, file, m.name_span);
    mi.is_initializer = has_annotation(m.anns, AnnKind::Initializer);
    if (ci.annotated) {
      if (const auto* c = find_annotation(m.anns, AnnKind::Contract)) {
        std::string perr;
        auto parsed = parse_contract(*c->arg, static_cast<int>(m.params.size()), &perr);
        if (parsed) {
          mi.contract = std::move(*parsed);
        } else {
          std::ostringstream w;
          w << file << ":" << c->span.line << ":" << c->span.col
            << ": unsupported contract \"" << *c->arg << "\": " << perr;
          sink.warn(w.str());
        }
      }
    }
    return mi;
  }

  // Pass 3: member tables.
  void resolve_members() {
    for (auto& ci : table.classes) {
      const std::string file = file_of(ci.id);
      for (const auto& f : ci.decl->fields) {
        FieldInfo fi;
        fi.decl = &f;
        fi.owner = ci.id;
        fi.name_id = table.names.intern(f.name);
        fi.type = resolve_type_use(f.type, ci, file);
        fi.is_static = f.mods.is_static;
        fi.is_reference = fi.type.is_reference();
        fi.explicit_nullness =
            explicit_nullness(f.anns, ci.annotated, file, f.name_span);
        for (const auto& other : ci.fields)
          if (other.decl->name == f.name)
            err(file, f.name_span, DiagCode::Resolution,
                "duplicate field '" + f.name + "'");
        ci.fields.push_back(std::move(fi));
      }
      for (const auto& m : ci.decl->methods) {
        for (const auto& other : ci.methods)
          if (other.decl->name == m->name &&
              other.decl->params.size() == m->params.size())
            err(file, m->name_span, DiagCode::Resolution,
                "duplicate method '" + m->name + "' with the same arity");
        ci.methods.push_back(make_method_info(ci, *m, file));
      }
      for (const auto& c : ci.decl->ctors)
        ci.ctors.push_back(make_method_info(ci, *c, file));
    }
  }

  // Pass 4: override relations (acyclic by construction: supers only).
  void resolve_overrides() {
    for (auto& ci : table.classes) {
      for (auto& mi : ci.methods) {
        if (mi.decl->mods.is_static || mi.decl->mods.is_private) continue;
        uint32_t c = ci.super.value_or(kNoId);
        while (c != kNoId) {
          const ClassInfo& sc = table.classes[c];
          bool found = false;
          for (uint32_t i = 0; i < sc.methods.size(); ++i) {
            const MethodInfo& sm = sc.methods[i];
            if (sm.decl->name == mi.decl->name &&
                sm.param_types.size() == mi.param_types.size() &&
                !sm.decl->mods.is_static && !sm.decl->mods.is_private) {
              mi.overrides = MethodRef{c, i};
              found = true;
              break;
            }
          }
          if (found) break;
          c = sc.super.value_or(kNoId);
        }
      }
    }
  }
};

// --- body resolution ------------------------------------------------------------

struct Qual {
  enum class K { Value, Class, Package, Error } k = K::Error;
  TypeRef type;           // Value
  uint32_t cls = kNoId;   // Class
  std::string pkg;        // Package
};

struct BodyResolver {
  ProgramTable& table;
  const CheckerConfig& config;
  DiagSink& sink;
  ClassInfo& cls;
  MethodDecl& owner;  // symbol table holder
  std::string file;
  bool is_static = false;
  std::vector<std::unordered_map<std::string, uint32_t>> scopes;
  std::vector<TypeRef> return_stack;

  void err(Span span, std::string msg) {
    sink.emit(DiagCode::Resolution, file, span, std::move(msg));
  }

  uint32_t define(const std::string& name, TypeRef type, bool is_param, Span span) {
    for (const auto& scope : scopes) {
      if (scope.count(name)) {
        err(span, "duplicate local name '" + name + "'");
        break;
      }
    }
    uint32_t sym = static_cast<uint32_t>(owner.symbols.size());
    owner.symbols.push_back(MethodDecl::LocalSym{name, std::move(type), is_param, span});
    scopes.back()[name] = sym;
    return sym;
  }

  std::optional<uint32_t> lookup(const std::string& name) const {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return std::nullopt;
  }

  std::optional<uint32_t> find_class(const std::string& name) const {
    if (!cls.package.empty()) {
      auto it = table.by_name.find(cls.package + "." + name);
      if (it != table.by_name.end()) return it->second;
    }
    auto it = table.by_name.find("lang." + name);
    if (it != table.by_name.end()) return it->second;
    return std::nullopt;
  }

  TypeRef this_type() const { return TypeRef::class_of(cls.id); }

  Qual value(TypeRef t) {
    Qual q;
    q.k = Qual::K::Value;
    q.type = std::move(t);
    return q;
  }

  // Resolves an expression that may also be a class or package qualifier.
  Qual resolve_qualifier(Expr& e) {
    if (e.kind == Expr::Kind::Name) {
      auto& n = static_cast<NameExpr&>(e);
      if (auto sym = lookup(n.name)) {
        n.res = NameExpr::Res::Local;
        n.res_symbol = *sym;
        n.type = owner.symbols[*sym].type;
        return value(n.type);
      }
      FieldRef ref;
      if (const FieldInfo* fi = table.lookup_field(cls.id, n.name, &ref)) {
        if (is_static && !fi->is_static) {
          err(n.span, "instance field '" + n.name + "' used in a static context");
          n.res = NameExpr::Res::Error;
          n.type = TypeRef::of(TypeRef::Kind::Error);
          return Qual{};
        }
        n.res = NameExpr::Res::ImplicitField;
        n.res_field = ref;
        n.type = fi->type;
        return value(n.type);
      }
      if (auto c = find_class(n.name)) {
        n.res = NameExpr::Res::ClassName;
        n.res_class = *c;
        Qual q;
        q.k = Qual::K::Class;
        q.cls = *c;
        return q;
      }
      n.res = NameExpr::Res::PackagePrefix;
      Qual q;
      q.k = Qual::K::Package;
      q.pkg = n.name;
      return q;
    }
    if (e.kind == Expr::Kind::Field) {
      auto& f = static_cast<FieldExpr&>(e);
      Qual q = resolve_qualifier(*f.recv);
      switch (q.k) {
        case Qual::K::Package: {
          std::string full = q.pkg + "." + f.name;
          auto it = table.by_name.find(full);
          if (it != table.by_name.end()) {
            f.res = FieldExpr::Res::ClassName;
            f.res_class = it->second;
            Qual r;
            r.k = Qual::K::Class;
            r.cls = it->second;
            return r;
          }
          f.res = FieldExpr::Res::PackagePrefix;
          Qual r;
          r.k = Qual::K::Package;
          r.pkg = std::move(full);
          return r;
        }
        case Qual::K::Class: {
          FieldRef ref;
          const FieldInfo* fi = table.lookup_field(q.cls, f.name, &ref);
          if (fi && fi->is_static) {
            f.res = FieldExpr::Res::Static;
            f.res_field = ref;
            f.type = fi->type;
            return value(f.type);
          }
          err(f.name_span, "no static field '" + f.name + "' in '" +
                               table.cls(q.cls).qualified + "'");
          f.res = FieldExpr::Res::Error;
          f.type = TypeRef::of(TypeRef::Kind::Error);
          return Qual{};
        }
        case Qual::K::Value: {
          const TypeRef& t = q.type;
          if (t.kind == TypeRef::Kind::Class) {
            FieldRef ref;
            const FieldInfo* fi = table.lookup_field(t.cls, f.name, &ref);
            if (!fi) {
              err(f.name_span, "unknown field '" + f.name + "' in '" +
                                   table.cls(t.cls).qualified + "'");
              f.res = FieldExpr::Res::Error;
              f.type = TypeRef::of(TypeRef::Kind::Error);
              return Qual{};
            }
            f.res = fi->is_static ? FieldExpr::Res::Static : FieldExpr::Res::Instance;
            f.res_field = ref;
            f.type = table.substitute(fi->type, t);
            return value(f.type);
          }
          if (t.kind == TypeRef::Kind::TypeVar || t.kind == TypeRef::Kind::Unknown) {
            f.res = FieldExpr::Res::Opaque;
            f.type = TypeRef::of(TypeRef::Kind::Unknown);
            return value(f.type);
          }
          if (t.kind != TypeRef::Kind::Error)
            err(f.name_span, "cannot access field '" + f.name + "' on this value");
          f.res = FieldExpr::Res::Error;
          f.type = TypeRef::of(TypeRef::Kind::Error);
          return Qual{};
        }
        case Qual::K::Error:
          f.res = FieldExpr::Res::Error;
          f.type = TypeRef::of(TypeRef::Kind::Error);
          return Qual{};
      }
      return Qual{};
    }
    return value(resolve_expr(e, nullptr));
  }

  TypeRef resolve_expr(Expr& e, const TypeRef* expected) {
    switch (e.kind) {
      case Expr::Kind::Null:
        e.type = TypeRef::of(TypeRef::Kind::Null);
        return e.type;
      case Expr::Kind::Int:
        e.type = TypeRef::of(TypeRef::Kind::Int);
        return e.type;
      case Expr::Kind::Bool:
        e.type = TypeRef::of(TypeRef::Kind::Boolean);
        return e.type;
      case Expr::Kind::Str: {
        auto it = table.by_name.find("lang.String");
        e.type = it != table.by_name.end() ? TypeRef::class_of(it->second)
                                           : TypeRef::of(TypeRef::Kind::Unknown);
        return e.type;
      }
      case Expr::Kind::This:
        if (is_static) err(e.span, "'this' used in a static context");
        e.type = this_type();
        return e.type;
      case Expr::Kind::Name:
      case Expr::Kind::Field: {
        Qual q = resolve_qualifier(e);
        if (q.k == Qual::K::Value) return e.type = q.type;
        if (q.k == Qual::K::Class || q.k == Qual::K::Package)
          err(e.span, "expected a value, found a type or package name");
        e.type = TypeRef::of(TypeRef::Kind::Error);
        return e.type;
      }
      case Expr::Kind::Call: return resolve_call(static_cast<CallExpr&>(e));
      case Expr::Kind::New: return resolve_new(static_cast<NewExpr&>(e));
      case Expr::Kind::Lambda:
        return resolve_lambda(static_cast<LambdaExpr&>(e), expected);
      case Expr::Kind::Cond: {
        auto& c = static_cast<CondExpr&>(e);
        resolve_expr(*c.cond, nullptr);
        TypeRef a = resolve_expr(*c.then_e, expected);
        TypeRef b = resolve_expr(*c.else_e, expected);
        e.type = (a.kind == TypeRef::Kind::Null || a.kind == TypeRef::Kind::Unknown ||
                  a.kind == TypeRef::Kind::Error)
                     ? b
                     : a;
        return e.type;
      }
      case Expr::Kind::Binary: {
        auto& b = static_cast<BinaryExpr&>(e);
        resolve_expr(*b.lhs, nullptr);
        resolve_expr(*b.rhs, nullptr);
        e.type = TypeRef::of(TypeRef::Kind::Boolean);
        return e.type;
      }
      case Expr::Kind::Unary: {
        resolve_expr(*static_cast<UnaryExpr&>(e).operand, nullptr);
        e.type = TypeRef::of(TypeRef::Kind::Boolean);
        return e.type;
      }
    }
    e.type = TypeRef::of(TypeRef::Kind::Error);
    return e.type;
  }

  void resolve_args(std::vector<ExprPtr>& args, const MethodInfo* target,
                    const TypeRef* recv_type) {
    for (size_t i = 0; i < args.size(); ++i) {
      if (target && i < target->param_types.size()) {
        TypeRef expected = recv_type
                               ? table.substitute(target->param_types[i], *recv_type)
                               : target->param_types[i];
        resolve_expr(*args[i], &expected);
      } else {
        resolve_expr(*args[i], nullptr);
      }
    }
  }

  TypeRef resolve_call(CallExpr& c) {
    const MethodInfo* target = nullptr;
    TypeRef recv_type;
    bool have_recv_type = false;

    if (!c.recv) {
      auto m = table.lookup_method(cls.id, c.name, c.args.size());
      if (!m) {
        err(c.name_span, "unknown method '" + c.name + "' taking " +
                             std::to_string(c.args.size()) + " argument(s)");
        c.res = CallExpr::Res::Error;
      } else {
        target = &table.method(*m);
        c.res_method = *m;
        if (target->decl->mods.is_static) {
          c.res = CallExpr::Res::Static;
        } else {
          if (is_static)
            err(c.name_span,
                "instance method '" + c.name + "' called in a static context");
          c.res = CallExpr::Res::Instance;
          recv_type = this_type();
          have_recv_type = true;
        }
      }
    } else {
      Qual q = resolve_qualifier(*c.recv);
      switch (q.k) {
        case Qual::K::Package:
          err(c.span, "unresolved name before call to '" + c.name + "'");
          c.res = CallExpr::Res::Error;
          break;
        case Qual::K::Class: {
          c.recv_is_class = true;
          auto m = table.lookup_method(q.cls, c.name, c.args.size());
          if (!m) {
            err(c.name_span, "unknown method '" + c.name + "' in '" +
                                 table.cls(q.cls).qualified + "'");
            c.res = CallExpr::Res::Error;
          } else if (!table.method(*m).decl->mods.is_static) {
            err(c.name_span, "instance method '" + c.name +
                                 "' needs a receiver object");
            c.res = CallExpr::Res::Error;
          } else {
            target = &table.method(*m);
            c.res_method = *m;
            c.res = CallExpr::Res::Static;
          }
          break;
        }
        case Qual::K::Value: {
          const TypeRef& t = q.type;
          if (t.kind == TypeRef::Kind::Class) {
            auto m = table.lookup_method(t.cls, c.name, c.args.size());
            if (!m) {
              err(c.name_span, "unknown method '" + c.name + "' in '" +
                                   table.cls(t.cls).qualified + "'");
              c.res = CallExpr::Res::Error;
            } else {
              target = &table.method(*m);
              c.res_method = *m;
              c.res = target->decl->mods.is_static ? CallExpr::Res::Static
                                                   : CallExpr::Res::Instance;
              recv_type = t;
              have_recv_type = true;
            }
          } else if (t.kind == TypeRef::Kind::TypeVar ||
                     t.kind == TypeRef::Kind::Unknown) {
            c.res = CallExpr::Res::Opaque;
          } else {
            if (t.kind != TypeRef::Kind::Error)
              err(c.name_span, "cannot call '" + c.name + "' on this value");
            c.res = CallExpr::Res::Error;
          }
          break;
        }
        case Qual::K::Error:
          c.res = CallExpr::Res::Error;
          break;
      }
    }

    resolve_args(c.args, target, have_recv_type ? &recv_type : nullptr);
    if (target) {
      c.type = have_recv_type ? table.substitute(target->return_type, recv_type)
                              : target->return_type;
    } else {
      c.type = TypeRef::of(c.res == CallExpr::Res::Opaque ? TypeRef::Kind::Unknown
                                                          : TypeRef::Kind::Error);
    }
    detect_stream_chain(c);
    return c.type;
  }

  // Records filter(...).map(...) chain shapes for the stream handler: the map
  // lambda remembers the feeding filter lambda and every receiver class seen
  // along the chain.
  void detect_stream_chain(CallExpr& c) {
    if (c.name != "map" || c.args.size() != 1 ||
        c.args[0]->kind != Expr::Kind::Lambda || !c.recv)
      return;
    auto* l2 = static_cast<LambdaExpr*>(c.args[0].get());
    std::vector<std::string> recv_classes;
    const Expr* cur = c.recv.get();
    const LambdaExpr* source = nullptr;
    while (cur) {
      if (cur->type.kind == TypeRef::Kind::Class)
        recv_classes.push_back(table.cls(cur->type.cls).qualified);
      else
        return;
      if (cur->kind != Expr::Kind::Call) return;
      const auto* cc = static_cast<const CallExpr*>(cur);
      if (!cc->recv || cc->args.size() != 1 ||
          cc->args[0]->kind != Expr::Kind::Lambda)
        return;
      if (cc->name == "filter") {
        if (cc->recv->type.kind == TypeRef::Kind::Class)
          recv_classes.push_back(table.cls(cc->recv->type.cls).qualified);
        else
          return;
        source = static_cast<const LambdaExpr*>(cc->args[0].get());
        break;
      }
      if (cc->name == "map") {
        cur = cc->recv.get();
        continue;
      }
      return;
    }
    if (!source) return;
    l2->stream_source = source;
    l2->stream_recv_classes = std::move(recv_classes);
  }

  TypeRef resolve_new(NewExpr& n) {
    TypeRef t = resolve_sig_type(n.type_use);
    n.type = t;
    if (t.kind == TypeRef::Kind::TypeVar) {
      err(n.span, "cannot instantiate a type variable");
      n.type = TypeRef::of(TypeRef::Kind::Error);
    }
    if (n.type.kind != TypeRef::Kind::Class) {
      for (auto& a : n.args) resolve_expr(*a, nullptr);
      return n.type;
    }
    n.res_class = t.cls;
    const ClassInfo& ci = table.cls(t.cls);
    if (ci.decl->is_interface) {
      err(n.span, "cannot instantiate interface '" + ci.qualified + "'");
    } else if (ci.decl->is_abstract) {
      err(n.span, "cannot instantiate abstract class '" + ci.qualified + "'");
    }
    const MethodInfo* target = nullptr;
    if (ci.ctors.empty()) {
      if (!n.args.empty())
        err(n.span, "'" + ci.qualified + "' has no constructor taking " +
                        std::to_string(n.args.size()) + " argument(s)");
    } else {
      for (uint32_t i = 0; i < ci.ctors.size(); ++i) {
        if (ci.ctors[i].param_types.size() == n.args.size()) {
          n.res_ctor = MethodRef{t.cls, i};
          target = &ci.ctors[i];
          break;
        }
      }
      if (!target)
        err(n.span, "no constructor of '" + ci.qualified + "' takes " +
                        std::to_string(n.args.size()) + " argument(s)");
    }
    resolve_args(n.args, target, &t);
    return n.type;
  }

  TypeRef resolve_sig_type(const TypeUse& t);  // defined below (out of line)

  TypeRef resolve_lambda(LambdaExpr& l, const TypeRef* expected) {
    bool ok = expected && expected->kind == TypeRef::Kind::Class &&
              table.cls(expected->cls).decl->is_interface;
    std::optional<MethodRef> fm;
    if (ok) {
      fm = table.sole_abstract_method(expected->cls);
      if (!fm) {
        err(l.span, "'" + table.cls(expected->cls).qualified +
                        "' is not a functional interface");
        ok = false;
      }
    } else if (expected && expected->kind == TypeRef::Kind::Class) {
      err(l.span, "lambda target '" + table.cls(expected->cls).qualified +
                      "' is not an interface");
    } else {
      err(l.span, "lambda requires a functional interface context");
    }
    if (ok) {
      const MethodInfo& m = table.method(*fm);
      if (m.param_types.size() != l.params.size()) {
        err(l.span, "lambda arity does not match '" +
                        std::string(m.decl->name) + "'");
        ok = false;
      } else {
        l.res_iface = expected->cls;
        l.res_method = *fm;
        for (const auto& pt : m.param_types)
          l.param_types.push_back(table.substitute(pt, *expected));
        l.return_type = table.substitute(m.return_type, *expected);
      }
    }

    scopes.emplace_back();
    for (size_t i = 0; i < l.params.size(); ++i) {
      TypeRef pt = ok && i < l.param_types.size()
                       ? l.param_types[i]
                       : TypeRef::of(TypeRef::Kind::Unknown);
      l.params[i].symbol = define(l.params[i].name, pt, true, l.params[i].span);
    }
    return_stack.push_back(ok ? l.return_type : TypeRef::of(TypeRef::Kind::Unknown));
    if (l.body_expr) {
      TypeRef want = return_stack.back();
      resolve_expr(*l.body_expr, &want);
    } else {
      resolve_block(*l.body_block);
    }
    return_stack.pop_back();
    scopes.pop_back();

    l.type = ok ? *expected : TypeRef::of(TypeRef::Kind::Unknown);
    return l.type;
  }

  void resolve_block(Block& b) {
    scopes.emplace_back();
    for (auto& s : b.stmts) resolve_stmt(*s);
    scopes.pop_back();
  }

  void resolve_stmt(Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Block:
        resolve_block(static_cast<Block&>(s));
        break;
      case Stmt::Kind::LocalDecl: {
        auto& d = static_cast<LocalDeclStmt&>(s);
        TypeRef t = resolve_sig_type(d.type);
        if (d.init) resolve_expr(*d.init, &t);
        d.symbol = define(d.name, t, false, d.name_span);
        break;
      }
      case Stmt::Kind::Assign: {
        auto& a = static_cast<AssignStmt&>(s);
        TypeRef lt = resolve_expr(*a.lhs, nullptr);
        bool lvalue = false;
        if (a.lhs->kind == Expr::Kind::Name) {
          auto res = static_cast<NameExpr&>(*a.lhs).res;
          lvalue = res == NameExpr::Res::Local || res == NameExpr::Res::ImplicitField;
        } else if (a.lhs->kind == Expr::Kind::Field) {
          auto res = static_cast<FieldExpr&>(*a.lhs).res;
          lvalue = res == FieldExpr::Res::Instance || res == FieldExpr::Res::Static ||
                   res == FieldExpr::Res::Opaque;
        }
        if (!lvalue && a.lhs->type.kind != TypeRef::Kind::Error)
          err(a.lhs->span, "assignment target must be a variable or field");
        resolve_expr(*a.rhs, &lt);
        break;
      }
      case Stmt::Kind::ExprStmt:
        resolve_expr(*static_cast<ExprStmt&>(s).expr, nullptr);
        break;
      case Stmt::Kind::If: {
        auto& i = static_cast<IfStmt&>(s);
        resolve_expr(*i.cond, nullptr);
        resolve_stmt(*i.then_s);
        if (i.else_s) resolve_stmt(*i.else_s);
        break;
      }
      case Stmt::Kind::While: {
        auto& w = static_cast<WhileStmt&>(s);
        resolve_expr(*w.cond, nullptr);
        resolve_stmt(*w.body);
        break;
      }
      case Stmt::Kind::Return: {
        auto& r = static_cast<ReturnStmt&>(s);
        const TypeRef& want = return_stack.back();
        if (r.value) {
          if (want.kind == TypeRef::Kind::Void)
            err(r.span, "void method returns a value");
          resolve_expr(*r.value, &want);
        } else if (want.kind != TypeRef::Kind::Void &&
                   want.kind != TypeRef::Kind::Unknown &&
                   want.kind != TypeRef::Kind::Error) {
          err(r.span, "missing return value");
        }
        break;
      }
      case Stmt::Kind::Throw:
        resolve_expr(*static_cast<ThrowStmt&>(s).value, nullptr);
        break;
    }
  }

  void run(const std::vector<TypeRef>& param_types, const TypeRef& return_type) {
    scopes.emplace_back();
    for (size_t i = 0; i < owner.params.size(); ++i) {
      owner.params[i].symbol =
          define(owner.params[i].name,
                 i < param_types.size() ? param_types[i]
                                        : TypeRef::of(TypeRef::Kind::Unknown),
                 true, owner.params[i].span);
    }
    return_stack.push_back(return_type);
    if (owner.body) resolve_block(*owner.body);
    return_stack.pop_back();
    scopes.pop_back();
  }
};

// Signature-position types inside bodies resolve exactly like member types.
TypeRef BodyResolver::resolve_sig_type(const TypeUse& t) {
  switch (t.kind) {
    case TypeUse::Kind::Infer: return TypeRef::of(TypeRef::Kind::Unknown);
    case TypeUse::Kind::Void: return TypeRef::of(TypeRef::Kind::Void);
    case TypeUse::Kind::Int: return TypeRef::of(TypeRef::Kind::Int);
    case TypeUse::Kind::Boolean: return TypeRef::of(TypeRef::Kind::Boolean);
    case TypeUse::Kind::Named:
    case TypeUse::Kind::Generic:
    case TypeUse::Kind::Array: {
      if (t.name.size() == 1) {
        const auto& tp = cls.decl->type_params;
        for (size_t i = 0; i < tp.size(); ++i) {
          if (tp[i] == t.name[0]) {
            TypeRef tv;
            tv.kind = TypeRef::Kind::TypeVar;
            tv.tv_owner = cls.id;
            tv.tv_index = static_cast<uint32_t>(i);
            return tv;
          }
        }
      }
      std::optional<uint32_t> c;
      if (t.name.size() == 1) {
        c = find_class(t.name[0]);
      } else {
        std::string joined;
        for (size_t i = 0; i < t.name.size(); ++i) {
          if (i) joined.push_back('.');
          joined += t.name[i];
        }
        auto it = table.by_name.find(joined);
        if (it != table.by_name.end()) c = it->second;
      }
      if (!c) {
        err(t.span, "unknown type '" + print_type_use(t) + "'");
        return TypeRef::of(TypeRef::Kind::Error);
      }
      if (t.kind == TypeUse::Kind::Array) {
        TypeRef a;
        a.kind = TypeRef::Kind::Array;
        a.cls = *c;
        return a;
      }
      TypeRef r = TypeRef::class_of(*c);
      for (const auto& arg : t.args) r.args.push_back(resolve_sig_type(arg));
      return r;
    }
  }
  return TypeRef::of(TypeRef::Kind::Error);
}

}  // namespace

ProgramTable build_program(std::vector<std::unique_ptr<SourceFile>> files,
                           const CheckerConfig& config, DiagSink& sink) {
  Builder b{ProgramTable{}, config, sink};
  b.table.files = std::move(files);
  b.register_classes();
  b.resolve_supers();
  b.resolve_members();
  b.resolve_overrides();

  // Body resolution, including field initializers (which share a synthetic
  // per-class symbol owner so lambdas in them have a table).
  for (auto& ci : b.table.classes) {
    std::string file = b.file_of(ci.id);
    ClassDecl* decl = const_cast<ClassDecl*>(ci.decl);
    auto resolve_body = [&](MethodDecl& m, const MethodInfo* info, bool stat) {
      BodyResolver r{b.table, config, sink, ci, m, file, stat, {}, {}};
      std::vector<TypeRef> ptypes;
      TypeRef rtype = TypeRef::of(TypeRef::Kind::Void);
      if (info) {
        ptypes = info->param_types;
        rtype = info->return_type;
      }
      r.run(ptypes, rtype);
    };
    size_t mi = 0;
    for (auto& m : decl->methods) resolve_body(*m, &ci.methods[mi++], m->mods.is_static);
    size_t cidx = 0;
    for (auto& c : decl->ctors) resolve_body(*c, &ci.ctors[cidx++], false);
    for (auto& blk : decl->init_blocks) resolve_body(*blk, nullptr, false);
    for (auto& blk : decl->static_init_blocks) resolve_body(*blk, nullptr, true);

    for (size_t fi = 0; fi < decl->fields.size(); ++fi) {
      FieldDecl& fd = decl->fields[fi];
      if (!fd.init) continue;
      auto& owner_ptr =
          fd.mods.is_static ? ci.static_field_init_owner : ci.field_init_owner;
      if (!owner_ptr) {
        owner_ptr = std::make_unique<MethodDecl>();
        owner_ptr->kind = MethodDecl::Kind::Method;
        owner_ptr->name = fd.mods.is_static ? "<static-field-init>" : "<field-init>";
        owner_ptr->mods.is_static = fd.mods.is_static;
      }
      BodyResolver r{b.table,  config, sink, ci, *owner_ptr, file, fd.mods.is_static, {}, {}};
      r.scopes.emplace_back();
      r.return_stack.push_back(TypeRef::of(TypeRef::Kind::Void));
      TypeRef want = ci.fields[fi].type;
      r.resolve_expr(*fd.init, &want);
    }
  }
  return std::move(b.table);
}

}  // namespace minij
