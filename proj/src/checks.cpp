#include "minij/checks.hpp"

#include <algorithm>

#include "minij/initcheck.hpp"

namespace minij {

namespace {

bool suppresses_nullaway(const std::vector<AnnotationUse>& anns, DiagSink& sink,
                         const std::string& file) {
  bool any = false;
  for (const auto& a : anns) {
    if (a.kind != AnnKind::SuppressWarnings || !a.arg) continue;
    if (*a.arg == "NullAway") {
      any = true;
    } else {
      sink.warn(file + ":" + std::to_string(a.span.line) + ":" +
                std::to_string(a.span.col) + ": unknown suppression key \"" +
                *a.arg + "\" has no effect");
    }
  }
  return any;
}

// Marks diagnostics emitted inside a suppressed scope; the diagnostic set
// itself never changes.
struct SuppressRegion {
  DiagSink& sink;
  size_t start;
  bool active;
  SuppressRegion(DiagSink& s, bool a) : sink(s), start(s.diags.size()), active(a) {}
  ~SuppressRegion() {
    if (!active) return;
    for (size_t i = start; i < sink.diags.size(); ++i) {
      sink.diags[i].suppressed = true;
      if (sink.diags[i].reason == SuppressReason::None)
        sink.diags[i].reason = SuppressReason::Annotation;
    }
  }
};

struct UnitWalker {
  const Analysis& an;
  const UnitContext& ctx;
  const DataflowResult& res;
  DiagSink& sink;
  CheckStats* stats;
  InitWalkState* init;  // non-null inside ctors/initializers/init blocks

  EvalHooks hooks(std::vector<const LambdaExpr*>* lambdas) {
    EvalHooks h;
    h.sink = &sink;
    h.init = init;
    h.lambdas = lambdas;
    h.assertion_sites = stats ? &stats->assertion_sites : nullptr;
    return h;
  }

  void walk_lambdas(const std::vector<const LambdaExpr*>& lambdas) {
    for (const LambdaExpr* l : lambdas) {
      UnitRef unit = an.unit_for_lambda(ctx.ref, l);
      const DataflowResult& lres = an.result_for(unit);
      UnitContext lctx = an.make_context(unit);
      // Lambdas run after construction; the init-phase checks stop here.
      UnitWalker inner{an, lctx, lres, sink, stats, nullptr};
      inner.walk_unit();
    }
  }

  void walk_unit() {
    if (res.internal_error) {
      sink.emit(DiagCode::Internal, ctx.file, res.internal_span,
                "dataflow iteration bound exceeded; treating this body as "
                "all-Nullable");
      return;
    }
    if (ctx.body_expr) {
      NullnessStore store = res.entry_store;
      std::vector<const LambdaExpr*> lambdas;
      EvalHooks h = hooks(&lambdas);
      EvalOut out = eval_expr(an, ctx, *ctx.body_expr, store, &h);
      if (ctx.return_type.kind != TypeRef::Kind::Void)
        check_return_value(an, ctx, out, ctx.body_expr->span, &h);
      walk_lambdas(lambdas);
      return;
    }
    if (ctx.body) walk_block(*ctx.body, /*top_level=*/true);
  }

  void walk_block(const Block& b, bool top_level) {
    for (const auto& s : b.stmts) {
      walk_stmt(*s);
      if (top_level && init) init->after_top_level(s.get());
    }
  }

  void walk_stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Block:
        walk_block(static_cast<const Block&>(s), false);
        return;
      case Stmt::Kind::If: {
        const auto& i = static_cast<const IfStmt&>(s);
        auto it = res.before_stmt.find(&s);
        if (it != res.before_stmt.end()) {
          std::vector<const LambdaExpr*> lambdas;
          EvalHooks h = hooks(&lambdas);
          eval_cond(an, ctx, *i.cond, it->second, &h);
          walk_lambdas(lambdas);
        }
        walk_stmt(*i.then_s);
        if (i.else_s) walk_stmt(*i.else_s);
        return;
      }
      case Stmt::Kind::While: {
        const auto& w = static_cast<const WhileStmt&>(s);
        auto it = res.before_stmt.find(&s);
        if (it != res.before_stmt.end()) {
          std::vector<const LambdaExpr*> lambdas;
          EvalHooks h = hooks(&lambdas);
          eval_cond(an, ctx, *w.cond, it->second, &h);
          walk_lambdas(lambdas);
        }
        walk_stmt(*w.body);
        return;
      }
      default:
        break;
    }

    auto it = res.before_stmt.find(&s);
    if (it == res.before_stmt.end()) return;  // unreachable statement
    NullnessStore store = it->second;
    std::vector<const LambdaExpr*> lambdas;
    EvalHooks h = hooks(&lambdas);

    switch (s.kind) {
      case Stmt::Kind::LocalDecl: {
        const auto& d = static_cast<const LocalDeclStmt&>(s);
        if (d.init) {
          EvalOut v = eval_expr(an, ctx, *d.init, store, &h);
          apply_assign(an, ctx, nullptr, &d, v, d.init->span, store, &h);
        }
        break;
      }
      case Stmt::Kind::Assign: {
        const auto& a = static_cast<const AssignStmt&>(s);
        EvalOut v = eval_expr(an, ctx, *a.rhs, store, &h);
        apply_assign(an, ctx, a.lhs.get(), nullptr, v, a.rhs->span, store, &h);
        break;
      }
      case Stmt::Kind::ExprStmt:
        eval_expr(an, ctx, *static_cast<const ExprStmt&>(s).expr, store, &h);
        break;
      case Stmt::Kind::Return: {
        const auto& r = static_cast<const ReturnStmt&>(s);
        if (r.value) {
          EvalOut v = eval_expr(an, ctx, *r.value, store, &h);
          check_return_value(an, ctx, v, r.value->span, &h);
        }
        break;
      }
      case Stmt::Kind::Throw:
        eval_expr(an, ctx, *static_cast<const ThrowStmt&>(s).value, store, &h);
        break;
      default:
        break;
    }
    walk_lambdas(lambdas);
  }
};

void walk_body(const Analysis& an, uint32_t cls, const MethodDecl& m,
               const MethodInfo* info, DiagSink& sink, CheckStats* stats,
               InitWalkState* init) {
  if (!m.body) return;
  UnitRef unit = an.unit_for_method(cls, &m, info);
  const DataflowResult& res = an.result_for(unit);
  UnitContext ctx = an.make_context(unit);
  UnitWalker walker{an, ctx, res, sink, stats, init};
  walker.walk_unit();
}

uint64_t count_lambdas_expr(const Expr& e);

uint64_t count_lambdas_stmt(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Block: {
      uint64_t n = 0;
      for (const auto& st : static_cast<const Block&>(s).stmts)
        n += count_lambdas_stmt(*st);
      return n;
    }
    case Stmt::Kind::LocalDecl: {
      const auto& d = static_cast<const LocalDeclStmt&>(s);
      return d.init ? count_lambdas_expr(*d.init) : 0;
    }
    case Stmt::Kind::Assign: {
      const auto& a = static_cast<const AssignStmt&>(s);
      return count_lambdas_expr(*a.lhs) + count_lambdas_expr(*a.rhs);
    }
    case Stmt::Kind::ExprStmt:
      return count_lambdas_expr(*static_cast<const ExprStmt&>(s).expr);
    case Stmt::Kind::If: {
      const auto& i = static_cast<const IfStmt&>(s);
      return count_lambdas_expr(*i.cond) + count_lambdas_stmt(*i.then_s) +
             (i.else_s ? count_lambdas_stmt(*i.else_s) : 0);
    }
    case Stmt::Kind::While: {
      const auto& w = static_cast<const WhileStmt&>(s);
      return count_lambdas_expr(*w.cond) + count_lambdas_stmt(*w.body);
    }
    case Stmt::Kind::Return: {
      const auto& r = static_cast<const ReturnStmt&>(s);
      return r.value ? count_lambdas_expr(*r.value) : 0;
    }
    case Stmt::Kind::Throw:
      return count_lambdas_expr(*static_cast<const ThrowStmt&>(s).value);
  }
  return 0;
}

uint64_t count_lambdas_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Lambda: {
      const auto& l = static_cast<const LambdaExpr&>(e);
      uint64_t inner = l.body_expr ? count_lambdas_expr(*l.body_expr)
                                   : count_lambdas_stmt(*l.body_block);
      return 1 + inner;
    }
    case Expr::Kind::Field:
      return count_lambdas_expr(*static_cast<const FieldExpr&>(e).recv);
    case Expr::Kind::Call: {
      const auto& c = static_cast<const CallExpr&>(e);
      uint64_t n = c.recv ? count_lambdas_expr(*c.recv) : 0;
      for (const auto& a : c.args) n += count_lambdas_expr(*a);
      return n;
    }
    case Expr::Kind::New: {
      uint64_t n = 0;
      for (const auto& a : static_cast<const NewExpr&>(e).args)
        n += count_lambdas_expr(*a);
      return n;
    }
    case Expr::Kind::Cond: {
      const auto& c = static_cast<const CondExpr&>(e);
      return count_lambdas_expr(*c.cond) + count_lambdas_expr(*c.then_e) +
             count_lambdas_expr(*c.else_e);
    }
    case Expr::Kind::Binary: {
      const auto& b = static_cast<const BinaryExpr&>(e);
      return count_lambdas_expr(*b.lhs) + count_lambdas_expr(*b.rhs);
    }
    case Expr::Kind::Unary:
      return count_lambdas_expr(*static_cast<const UnaryExpr&>(e).operand);
    default:
      return 0;
  }
}

}  // namespace

void check_overrides(const Analysis& an, uint32_t cls, DiagSink& sink) {
  const ClassInfo& ci = an.table.cls(cls);
  const std::string& file = an.file_of_class(cls);
  for (const MethodInfo& mi : ci.methods) {
    if (!mi.overrides) continue;
    const MethodInfo& super_mi = an.table.method(*mi.overrides);
    const ClassInfo& super_ci = an.table.cls(mi.overrides->cls);

    if (mi.return_type.is_reference() && super_mi.return_type.is_reference()) {
      ResolvedNullness super_ret = an.override_return(*mi.overrides);
      Nullness sub_ret = effective(mi.explicit_return);
      if (super_ret.nullness == Nullness::NonNull && sub_ret == Nullness::Nullable) {
        sink.emit(DiagCode::OverrideReturn, file, mi.decl->name_span,
                  "method returns @Nullable but overrides '" +
                      super_ci.qualified + "." + super_mi.decl->name +
                      "' whose return is @NonNull");
      }
    }
    size_t n = std::min(mi.param_types.size(), super_mi.param_types.size());
    for (size_t i = 0; i < n; ++i) {
      if (!mi.param_types[i].is_reference() ||
          !super_mi.param_types[i].is_reference())
        continue;
      ResolvedNullness super_p = an.override_param(*mi.overrides, i);
      Nullness sub_p = effective(mi.explicit_params[i]);
      if (super_p.nullness == Nullness::Nullable && sub_p == Nullness::NonNull) {
        sink.emit(DiagCode::OverrideParam, file, mi.decl->params[i].span,
                  "parameter " + std::to_string(i + 1) +
                      " is @NonNull but the overridden parameter of '" +
                      super_ci.qualified + "." + super_mi.decl->name +
                      "' is @Nullable");
      }
    }
  }
}

void check_class(const Analysis& an, uint32_t cls, DiagSink& sink,
                 CheckStats* stats) {
  const ClassInfo& ci = an.table.cls(cls);
  const std::string& file = an.file_of_class(cls);
  ClassDecl& decl = *const_cast<ClassDecl*>(ci.decl);

  SuppressRegion class_region(sink, suppresses_nullaway(decl.anns, sink, file));

  check_overrides(an, cls, sink);

  InitClassFacts init_facts = compute_init_facts(an, cls);
  check_field_initialization(an, cls, init_facts, sink);

  // Field initializer expressions.
  for (uint32_t i = 0; i < ci.fields.size(); ++i) {
    const FieldDecl& fd = *ci.fields[i].decl;
    if (!fd.init) continue;
    SuppressRegion field_region(sink, suppresses_nullaway(fd.anns, sink, file));
    UnitContext fctx;
    fctx.ref.cls = cls;
    fctx.ref.symbol_owner = fd.mods.is_static ? ci.static_field_init_owner.get()
                                              : ci.field_init_owner.get();
    fctx.ref.is_static = fd.mods.is_static;
    fctx.file = file;
    fctx.seed_this = !fd.mods.is_static;
    fctx.return_type = TypeRef::of(TypeRef::Kind::Void);
    NullnessStore store;
    if (fctx.seed_this) store.set(AccessPath::this_root(), Nullness::NonNull);
    std::vector<const LambdaExpr*> lambdas;
    EvalHooks h;
    h.sink = &sink;
    h.lambdas = &lambdas;
    h.assertion_sites = stats ? &stats->assertion_sites : nullptr;
    EvalOut v = eval_expr(an, fctx, *fd.init, store, &h);
    check_field_assign(an, fctx, FieldRef{cls, i}, v, fd.init->span, &h);
    for (const LambdaExpr* l : lambdas) {
      UnitRef unit = an.unit_for_lambda(fctx.ref, l);
      const DataflowResult& lres = an.result_for(unit);
      UnitContext lctx = an.make_context(unit);
      UnitWalker inner{an, lctx, lres, sink, stats, nullptr};
      inner.walk_unit();
    }
  }

  auto info_of = [&](const MethodDecl* m) -> const MethodInfo* {
    for (const auto& mi : ci.methods)
      if (mi.decl == m) return &mi;
    for (const auto& mi : ci.ctors)
      if (mi.decl == m) return &mi;
    return nullptr;
  };

  // Constructors, initializer blocks and @Initializer methods run the
  // use-before-init read hook; ordinary methods do not.
  for (const auto& b : decl.init_blocks) {
    InitWalkState init(an, cls, init_facts, *b, sink, file);
    walk_body(an, cls, *b, nullptr, sink, stats, &init);
  }
  for (const auto& b : decl.static_init_blocks)
    walk_body(an, cls, *b, nullptr, sink, stats, nullptr);
  for (const auto& c : decl.ctors) {
    SuppressRegion region(sink, suppresses_nullaway(c->anns, sink, file));
    InitWalkState init(an, cls, init_facts, *c, sink, file);
    walk_body(an, cls, *c, info_of(c.get()), sink, stats, &init);
  }
  for (const auto& m : decl.methods) {
    if (!m->body) continue;
    SuppressRegion region(sink, suppresses_nullaway(m->anns, sink, file));
    const MethodInfo* info = info_of(m.get());
    if (info && info->is_initializer) {
      InitWalkState init(an, cls, init_facts, *m, sink, file);
      walk_body(an, cls, *m, info, sink, stats, &init);
    } else {
      walk_body(an, cls, *m, info, sink, stats, nullptr);
    }
  }
}

void check_program(const Analysis& an, DiagSink& sink, CheckStats* stats) {
  for (const ClassInfo& ci : an.table.classes) {
    if (!ci.annotated) continue;
    check_class(an, ci.id, sink, stats);
  }
}

uint64_t count_units(const ProgramTable& table, uint32_t cls) {
  const ClassInfo& ci = table.cls(cls);
  if (!ci.annotated) return 0;
  uint64_t n = 0;
  auto body_units = [&](const MethodDecl& m) {
    if (!m.body) return;
    n += 1 + count_lambdas_stmt(*m.body);
  };
  for (const auto& m : ci.decl->methods) body_units(*m);
  for (const auto& c : ci.decl->ctors) body_units(*c);
  for (const auto& b : ci.decl->init_blocks) body_units(*b);
  for (const auto& b : ci.decl->static_init_blocks) body_units(*b);
  for (const auto& f : ci.decl->fields)
    if (f.init) n += count_lambdas_expr(*f.init);
  return n;
}

}  // namespace minij
