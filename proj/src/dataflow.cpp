#include "minij/dataflow.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace minij {

namespace {

Nullness seed_lookup(const UnitContext& ctx, uint32_t sym) {
  for (const auto& [s, n] : ctx.seeds)
    if (s == sym) return n;
  return Nullness::Nullable;  // root of unknown origin
}

std::optional<AccessPath> extend_path(const Analysis& an,
                                      const std::optional<AccessPath>& base,
                                      uint32_t link) {
  if (!base) return std::nullopt;
  if (base->depth() >= static_cast<size_t>(an.config.max_access_path_depth))
    return std::nullopt;  // beyond depth facts drop to the default
  return base->extended(link);
}

void check_deref(const Analysis& an, const UnitContext& ctx, const Expr& recv,
                 Nullness recv_nullness, EvalHooks* hooks) {
  if (!hooks || !hooks->sink) return;
  if (!maybe_null(recv_nullness)) return;
  hooks->sink->emit(DiagCode::DerefNullable, ctx.file, recv.span,
                    "dereference of possibly-null expression '" +
                        print_expr(recv) + "'");
  (void)an;
}

void notify_field_read(const Analysis& an, const UnitContext& ctx, FieldRef f,
                       Span span, const NullnessStore& store, EvalHooks* hooks) {
  (void)an;
  (void)ctx;
  if (hooks && hooks->init) hooks->init->on_field_read(f, span, store);
}

EvalOut eval_call(const Analysis& an, const UnitContext& ctx, const CallExpr& c,
                  NullnessStore& store, EvalHooks* hooks, CallFacts* out_facts);

// Field access and bare-name reads share the lookup/refinement logic.
EvalOut eval_field_read(const Analysis& an, const UnitContext& ctx,
                        const Expr& node, FieldRef ref,
                        const std::optional<AccessPath>& recv_path,
                        NullnessStore& store, EvalHooks* hooks) {
  const FieldInfo& fi = an.table.field(ref);
  notify_field_read(an, ctx, ref, node.span, store, hooks);
  if (!fi.is_reference) return {Nullness::NonNull, std::nullopt};
  std::optional<AccessPath> path =
      fi.is_static ? std::nullopt
                   : extend_path(an, recv_path, AccessPath::field_link(fi.name_id));
  if (path) {
    if (auto fact = store.get(*path)) return {*fact, path};
  }
  return {an.field_nullness(ref), path};
}

EvalOut eval_expr_inner(const Analysis& an, const UnitContext& ctx, const Expr& e,
                        NullnessStore& store, EvalHooks* hooks) {
  switch (e.kind) {
    case Expr::Kind::Null:
      return {Nullness::Null, std::nullopt};
    case Expr::Kind::Int:
    case Expr::Kind::Bool:
    case Expr::Kind::Str:
      return {Nullness::NonNull, std::nullopt};
    case Expr::Kind::This:
      return {Nullness::NonNull, AccessPath::this_root()};
    case Expr::Kind::Name: {
      const auto& n = static_cast<const NameExpr&>(e);
      if (n.res == NameExpr::Res::Local) {
        const auto& sym = ctx.ref.symbol_owner->symbols[n.res_symbol];
        if (!sym.type.is_reference()) return {Nullness::NonNull, std::nullopt};
        AccessPath p = AccessPath::local(n.res_symbol);
        if (auto fact = store.get(p)) return {*fact, p};
        return {seed_lookup(ctx, n.res_symbol), p};
      }
      if (n.res == NameExpr::Res::ImplicitField) {
        return eval_field_read(an, ctx, e, n.res_field, AccessPath::this_root(),
                               store, hooks);
      }
      return {Nullness::Nullable, std::nullopt};  // resolution already failed
    }
    case Expr::Kind::Field: {
      const auto& f = static_cast<const FieldExpr&>(e);
      switch (f.res) {
        case FieldExpr::Res::Static:
          return eval_field_read(an, ctx, e, f.res_field, std::nullopt, store,
                                 hooks);
        case FieldExpr::Res::Instance: {
          EvalOut recv = eval_expr(an, ctx, *f.recv, store, hooks);
          check_deref(an, ctx, *f.recv, recv.value, hooks);
          return eval_field_read(an, ctx, e, f.res_field, recv.path, store, hooks);
        }
        case FieldExpr::Res::Opaque: {
          EvalOut recv = eval_expr(an, ctx, *f.recv, store, hooks);
          check_deref(an, ctx, *f.recv, recv.value, hooks);
          // Unknown member on an opaque type: optimistic, still pathable.
          auto path = extend_path(
              an, recv.path,
              AccessPath::field_link(
                  const_cast<Interner&>(an.table.names).intern(f.name)));
          if (path) {
            if (auto fact = store.get(*path)) return {*fact, path};
          }
          return {Nullness::NonNull, path};
        }
        default:
          return {Nullness::Nullable, std::nullopt};
      }
    }
    case Expr::Kind::Call: {
      return eval_call(an, ctx, static_cast<const CallExpr&>(e), store, hooks,
                       nullptr);
    }
    case Expr::Kind::New: {
      const auto& n = static_cast<const NewExpr&>(e);
      for (size_t i = 0; i < n.args.size(); ++i) {
        EvalOut a = eval_expr(an, ctx, *n.args[i], store, hooks);
        if (hooks && hooks->sink && n.res_ctor.valid()) {
          const MethodInfo& mi = an.table.ctor(n.res_ctor);
          if (i < mi.param_types.size() && mi.param_types[i].is_reference() &&
              maybe_null(a.value) &&
              an.param_nullness(n.res_ctor, true, i) == Nullness::NonNull) {
            hooks->sink->emit(
                DiagCode::ParamNullable, ctx.file, n.args[i]->span,
                "passing possibly-null argument " + std::to_string(i + 1) +
                    " to constructor of '" +
                    an.table.cls(n.res_ctor.cls).qualified +
                    "' where @NonNull is required");
          }
        }
        if (hooks && hooks->lambdas && n.args[i]->kind == Expr::Kind::Lambda)
          hooks->lambdas->push_back(
              static_cast<const LambdaExpr*>(n.args[i].get()));
      }
      return {Nullness::NonNull, std::nullopt};
    }
    case Expr::Kind::Lambda:
      if (hooks && hooks->lambdas)
        hooks->lambdas->push_back(static_cast<const LambdaExpr*>(&e));
      return {Nullness::NonNull, std::nullopt};
    case Expr::Kind::Cond: {
      const auto& c = static_cast<const CondExpr&>(e);
      CondStores cs = eval_cond(an, ctx, *c.cond, store, hooks);
      NullnessStore ts = cs.t;
      NullnessStore fs = cs.f;
      EvalOut a = eval_expr(an, ctx, *c.then_e, ts, hooks);
      EvalOut b = eval_expr(an, ctx, *c.else_e, fs, hooks);
      store = NullnessStore::join(ts, fs);
      return {nullness_join(a.value, b.value), std::nullopt};
    }
    case Expr::Kind::Binary: {
      const auto& b = static_cast<const BinaryExpr&>(e);
      if (b.op == BinOp::And || b.op == BinOp::Or) {
        CondStores cs = eval_cond(an, ctx, e, store, hooks);
        store = NullnessStore::join(cs.t, cs.f);
        return {Nullness::NonNull, std::nullopt};
      }
      eval_expr(an, ctx, *b.lhs, store, hooks);
      eval_expr(an, ctx, *b.rhs, store, hooks);
      return {Nullness::NonNull, std::nullopt};
    }
    case Expr::Kind::Unary: {
      CondStores cs = eval_cond(an, ctx, e, store, hooks);
      store = NullnessStore::join(cs.t, cs.f);
      return {Nullness::NonNull, std::nullopt};
    }
  }
  return {Nullness::Nullable, std::nullopt};
}

EvalOut eval_call(const Analysis& an, const UnitContext& ctx, const CallExpr& c,
                  NullnessStore& store, EvalHooks* hooks, CallFacts* out_facts) {
  CallFacts facts;
  facts.call = &c;
  bool is_instance = c.res == CallExpr::Res::Instance;
  bool is_static = c.res == CallExpr::Res::Static;
  facts.target_valid = (is_instance || is_static) && c.res_method.valid();
  facts.target = c.res_method;

  std::optional<AccessPath> recv_path;
  if (c.recv && !c.recv_is_class) {
    EvalOut recv = eval_expr(an, ctx, *c.recv, store, hooks);
    check_deref(an, ctx, *c.recv, recv.value, hooks);
    recv_path = recv.path;
  } else if (!c.recv && is_instance) {
    recv_path = AccessPath::this_root();
  }

  const MethodInfo* mi = facts.target_valid ? &an.table.method(c.res_method) : nullptr;
  for (size_t i = 0; i < c.args.size(); ++i) {
    EvalOut a = eval_expr(an, ctx, *c.args[i], store, hooks);
    facts.arg_nullness.push_back(a.value);
    facts.arg_paths.push_back(a.path);
    if (hooks && hooks->sink && mi && i < mi->param_types.size() &&
        mi->param_types[i].is_reference() && maybe_null(a.value) &&
        an.param_nullness(c.res_method, false, i) == Nullness::NonNull) {
      hooks->sink->emit(DiagCode::ParamNullable, ctx.file, c.args[i]->span,
                        "passing possibly-null argument " + std::to_string(i + 1) +
                            " to '" + c.name + "' where @NonNull is required");
    }
    if (hooks && hooks->lambdas && c.args[i]->kind == Expr::Kind::Lambda)
      hooks->lambdas->push_back(static_cast<const LambdaExpr*>(c.args[i].get()));
  }

  // Result nullness and refinable path.
  bool ref_result = c.type.is_reference();
  if (facts.target_valid) {
    auto [contract, from_model] = an.contract_for(c.res_method, false);
    facts.contract = contract;
    facts.contract_from_model = from_model;
    facts.declared_return =
        ref_result ? an.return_nullness(c.res_method) : Nullness::NonNull;
  } else {
    facts.declared_return = Nullness::NonNull;  // opaque: optimistic
  }

  EvalOut out;
  out.value = facts.declared_return;
  if (ref_result) {
    if (c.args.empty()) {
      uint32_t name_id = mi ? mi->name_id
                            : const_cast<Interner&>(an.table.names).intern(c.name);
      out.path = extend_path(an, recv_path, AccessPath::call_link(name_id));
    }
    if (out.path) {
      if (auto fact = store.get(*out.path)) {
        out.value = *fact;
      } else if (auto h = an.handlers.call_return(facts)) {
        out.value = *h;
      }
    } else if (auto h = an.handlers.call_return(facts)) {
      out.value = *h;
    }
  } else {
    out.value = Nullness::NonNull;
    out.path.reset();
  }

  // Fallthrough refinements ("null -> fail" contracts, assert-nonnull models).
  std::vector<Refinement> refs;
  bool from_model = false;
  if (an.handlers.call_fallthrough(facts, &refs, &from_model)) {
    for (const auto& r : refs) {
      if (hooks && hooks->assertion_sites && from_model) {
        for (size_t i = 0; i < facts.arg_paths.size(); ++i) {
          if (facts.arg_paths[i] && *facts.arg_paths[i] == r.path &&
              maybe_null(facts.arg_nullness[i])) {
            hooks->assertion_sites->push_back(c.span);
            break;
          }
        }
      }
      store.set(r.path, r.nullness);
    }
  }

  if (out_facts) *out_facts = std::move(facts);
  return out;
}

}  // namespace

EvalOut eval_expr(const Analysis& an, const UnitContext& ctx, const Expr& e,
                  NullnessStore& store, EvalHooks* hooks) {
  return eval_expr_inner(an, ctx, e, store, hooks);
}

CondStores eval_cond(const Analysis& an, const UnitContext& ctx, const Expr& e,
                     NullnessStore store, EvalHooks* hooks) {
  switch (e.kind) {
    case Expr::Kind::Binary: {
      const auto& b = static_cast<const BinaryExpr&>(e);
      if (b.op == BinOp::And) {
        CondStores ca = eval_cond(an, ctx, *b.lhs, std::move(store), hooks);
        CondStores cb = eval_cond(an, ctx, *b.rhs, std::move(ca.t), hooks);
        return {std::move(cb.t), NullnessStore::join(ca.f, cb.f)};
      }
      if (b.op == BinOp::Or) {
        CondStores ca = eval_cond(an, ctx, *b.lhs, std::move(store), hooks);
        CondStores cb = eval_cond(an, ctx, *b.rhs, std::move(ca.f), hooks);
        return {NullnessStore::join(ca.t, cb.t), std::move(cb.f)};
      }
      if (b.op == BinOp::Eq || b.op == BinOp::Ne) {
        const Expr* tested = nullptr;
        if (b.lhs->kind == Expr::Kind::Null && b.rhs->kind != Expr::Kind::Null)
          tested = b.rhs.get();
        else if (b.rhs->kind == Expr::Kind::Null && b.lhs->kind != Expr::Kind::Null)
          tested = b.lhs.get();
        if (!tested) {
          eval_expr(an, ctx, *b.lhs, store, hooks);
          eval_expr(an, ctx, *b.rhs, store, hooks);
          return {store, store};
        }
        EvalOut t = eval_expr(an, ctx, *tested, store, hooks);
        NullnessStore ts = store, fs = std::move(store);
        if (t.path) {
          // == null: true edge refines to Null, false edge to NonNull.
          bool eq = b.op == BinOp::Eq;
          ts.set(*t.path, eq ? Nullness::Null : Nullness::NonNull);
          fs.set(*t.path, eq ? Nullness::NonNull : Nullness::Null);
        }
        return {std::move(ts), std::move(fs)};
      }
      // Relational comparison: evaluate for effects only.
      eval_expr(an, ctx, *b.lhs, store, hooks);
      eval_expr(an, ctx, *b.rhs, store, hooks);
      return {store, store};
    }
    case Expr::Kind::Unary: {
      CondStores c = eval_cond(an, ctx, *static_cast<const UnaryExpr&>(e).operand,
                               std::move(store), hooks);
      std::swap(c.t, c.f);
      return c;
    }
    case Expr::Kind::Cond: {
      const auto& c = static_cast<const CondExpr&>(e);
      CondStores cc = eval_cond(an, ctx, *c.cond, std::move(store), hooks);
      CondStores cx = eval_cond(an, ctx, *c.then_e, std::move(cc.t), hooks);
      CondStores cy = eval_cond(an, ctx, *c.else_e, std::move(cc.f), hooks);
      return {NullnessStore::join(cx.t, cy.t), NullnessStore::join(cx.f, cy.f)};
    }
    case Expr::Kind::Call: {
      CallFacts facts;
      eval_call(an, ctx, static_cast<const CallExpr&>(e), store, hooks, &facts);
      std::vector<Refinement> tr, fr;
      if (an.handlers.condition_edges(facts, &tr, &fr)) {
        NullnessStore ts = store, fs = std::move(store);
        for (const auto& r : tr) ts.set(r.path, r.nullness);
        for (const auto& r : fr) fs.set(r.path, r.nullness);
        return {std::move(ts), std::move(fs)};
      }
      return {store, store};
    }
    default: {
      eval_expr(an, ctx, e, store, hooks);
      return {store, store};
    }
  }
}

void apply_assign(const Analysis& an, const UnitContext& ctx, const Expr* lhs,
                  const LocalDeclStmt* decl, const EvalOut& value, Span value_span,
                  NullnessStore& store, EvalHooks* hooks) {
  std::optional<AccessPath> path;
  bool lhs_is_ref = false;

  if (decl) {
    const auto& sym = ctx.ref.symbol_owner->symbols[decl->symbol];
    lhs_is_ref = sym.type.is_reference();
    if (lhs_is_ref) path = AccessPath::local(decl->symbol);
  } else if (lhs) {
    if (lhs->kind == Expr::Kind::Name) {
      const auto& n = static_cast<const NameExpr&>(*lhs);
      if (n.res == NameExpr::Res::Local) {
        const auto& sym = ctx.ref.symbol_owner->symbols[n.res_symbol];
        lhs_is_ref = sym.type.is_reference();
        if (lhs_is_ref) path = AccessPath::local(n.res_symbol);
      } else if (n.res == NameExpr::Res::ImplicitField) {
        const FieldInfo& fi = an.table.field(n.res_field);
        lhs_is_ref = fi.is_reference;
        if (lhs_is_ref && !fi.is_static)
          path = AccessPath::this_root().extended(
              AccessPath::field_link(fi.name_id));
        check_field_assign(an, ctx, n.res_field, value, value_span, hooks);
      }
    } else if (lhs->kind == Expr::Kind::Field) {
      const auto& f = static_cast<const FieldExpr&>(*lhs);
      if (f.res == FieldExpr::Res::Instance) {
        EvalOut recv = eval_expr(an, ctx, *f.recv, store, hooks);
        check_deref(an, ctx, *f.recv, recv.value, hooks);
        const FieldInfo& fi = an.table.field(f.res_field);
        lhs_is_ref = fi.is_reference;
        if (lhs_is_ref)
          path = extend_path(an, recv.path, AccessPath::field_link(fi.name_id));
        check_field_assign(an, ctx, f.res_field, value, value_span, hooks);
      } else if (f.res == FieldExpr::Res::Static) {
        const FieldInfo& fi = an.table.field(f.res_field);
        lhs_is_ref = fi.is_reference;
        check_field_assign(an, ctx, f.res_field, value, value_span, hooks);
      } else if (f.res == FieldExpr::Res::Opaque) {
        EvalOut recv = eval_expr(an, ctx, *f.recv, store, hooks);
        check_deref(an, ctx, *f.recv, recv.value, hooks);
      }
    }
  }

  if (path) {
    store.kill_extensions(*path);
    store.set(*path, value.value);
  }
}

void check_field_assign(const Analysis& an, const UnitContext& ctx, FieldRef ref,
                        const EvalOut& value, Span value_span, EvalHooks* hooks) {
  if (!hooks || !hooks->sink) return;
  const FieldInfo& fi = an.table.field(ref);
  if (!fi.is_reference || !maybe_null(value.value)) return;
  if (!an.table.cls(ref.cls).annotated) return;  // unannotated fields unchecked
  if (effective(fi.explicit_nullness) != Nullness::NonNull) return;
  hooks->sink->emit(DiagCode::AssignNullable, ctx.file, value_span,
                    "assigning possibly-null value to @NonNull field '" +
                        fi.decl->name + "'");
}

// --- fixpoint ---------------------------------------------------------------------

void check_return_value(const Analysis& an, const UnitContext& ctx,
                        const EvalOut& out, Span span, EvalHooks* hooks) {
  (void)an;
  if (!hooks || !hooks->sink) return;
  if (!ctx.return_is_ref) return;
  if (ctx.return_nullness != Nullness::NonNull) return;
  if (!maybe_null(out.value)) return;
  hooks->sink->emit(DiagCode::ReturnNullable, ctx.file, span,
                    "returning possibly-null value where @NonNull is required");
}

namespace {

// One-node transfer; returns the fallthrough store (Branch nodes handled by
// the caller via eval_cond).
NullnessStore transfer_stmt_node(const Analysis& an, const UnitContext& ctx,
                                 const CfgNode& node, NullnessStore store,
                                 EvalHooks* hooks) {
  switch (node.stmt_kind) {
    case CfgNode::StmtKind::Real: {
      const Stmt& s = *node.real;
      switch (s.kind) {
        case Stmt::Kind::LocalDecl: {
          const auto& d = static_cast<const LocalDeclStmt&>(s);
          if (d.init) {
            EvalOut v = eval_expr(an, ctx, *d.init, store, hooks);
            apply_assign(an, ctx, nullptr, &d, v, d.init->span, store, hooks);
          }
          break;
        }
        case Stmt::Kind::Assign: {
          const auto& a = static_cast<const AssignStmt&>(s);
          EvalOut v = eval_expr(an, ctx, *a.rhs, store, hooks);
          apply_assign(an, ctx, a.lhs.get(), nullptr, v, a.rhs->span, store, hooks);
          break;
        }
        case Stmt::Kind::ExprStmt:
          eval_expr(an, ctx, *static_cast<const ExprStmt&>(s).expr, store, hooks);
          break;
        case Stmt::Kind::Return: {
          const auto& r = static_cast<const ReturnStmt&>(s);
          if (r.value) {
            EvalOut v = eval_expr(an, ctx, *r.value, store, hooks);
            check_return_value(an, ctx, v, r.value->span, hooks);
          }
          break;
        }
        case Stmt::Kind::Throw:
          eval_expr(an, ctx, *static_cast<const ThrowStmt&>(s).value, store, hooks);
          break;
        default:
          break;  // Block/If/While never appear as Real nodes
      }
      break;
    }
    case CfgNode::StmtKind::AssignArm: {
      EvalOut v = eval_expr(an, ctx, *node.value, store, hooks);
      apply_assign(an, ctx, node.assign_lhs, node.decl, v, node.value->span,
                   store, hooks);
      break;
    }
    case CfgNode::StmtKind::ReturnArm: {
      EvalOut v = eval_expr(an, ctx, *node.value, store, hooks);
      check_return_value(an, ctx, v, node.value->span, hooks);
      break;
    }
    case CfgNode::StmtKind::EvalArm:
      eval_expr(an, ctx, *node.value, store, hooks);
      break;
  }
  return store;
}

NullnessStore make_entry_store(const UnitContext& ctx) {
  NullnessStore s;
  if (ctx.seed_this) s.set(AccessPath::this_root(), Nullness::NonNull);
  for (const auto& [sym, n] : ctx.seeds) s.set(AccessPath::local(sym), n);
  return s;
}

const ReturnStmt* sole_final_return(const Block& body) {
  // Exactly one return in the whole body and it is the last top-level
  // statement (the single-return-expression shape §6 needs).
  struct Counter {
    size_t count = 0;
    const ReturnStmt* last = nullptr;
    void walk(const Stmt& s) {
      switch (s.kind) {
        case Stmt::Kind::Block:
          for (const auto& st : static_cast<const Block&>(s).stmts) walk(*st);
          break;
        case Stmt::Kind::If: {
          const auto& i = static_cast<const IfStmt&>(s);
          walk(*i.then_s);
          if (i.else_s) walk(*i.else_s);
          break;
        }
        case Stmt::Kind::While:
          walk(*static_cast<const WhileStmt&>(s).body);
          break;
        case Stmt::Kind::Return:
          ++count;
          last = &static_cast<const ReturnStmt&>(s);
          break;
        default:
          break;
      }
    }
  } c;
  for (const auto& st : body.stmts) c.walk(*st);
  if (c.count != 1 || body.stmts.empty()) return nullptr;
  if (body.stmts.back()->kind != Stmt::Kind::Return) return nullptr;
  return static_cast<const ReturnStmt*>(body.stmts.back().get());
}

}  // namespace

DataflowResult fixpoint(const Analysis& an, const UnitContext& ctx,
                        const Cfg& cfg, const NullnessStore& entry) {
  DataflowResult result;
  result.entry_store = entry;

  std::vector<std::optional<NullnessStore>> in(cfg.nodes.size());
  std::vector<uint32_t> rpo_index(cfg.nodes.size(), 0);
  for (uint32_t i = 0; i < cfg.rpo.size(); ++i) rpo_index[cfg.rpo[i]] = i;
  in[cfg.entry] = entry;

  auto cmp = [&](uint32_t a, uint32_t b) { return rpo_index[a] > rpo_index[b]; };
  std::vector<uint32_t> work = {cfg.entry};
  std::vector<bool> queued(cfg.nodes.size(), false);
  queued[cfg.entry] = true;

  bool bounded = false;
  while (!work.empty()) {
    std::pop_heap(work.begin(), work.end(), cmp);
    uint32_t n = work.back();
    work.pop_back();
    queued[n] = false;

    if (++result.node_visits > an.config.max_node_visits) {
      bounded = true;
      break;
    }

    const CfgNode& node = cfg.nodes[n];
    NullnessStore store = *in[n];

    auto push_edge = [&](uint32_t to, NullnessStore s) {
      std::optional<NullnessStore>& slot = in[to];
      NullnessStore merged =
          slot ? NullnessStore::join(*slot, s) : std::move(s);
      if (!slot || !(*slot == merged)) {
        slot = std::move(merged);
        if (!queued[to]) {
          queued[to] = true;
          work.push_back(to);
          std::push_heap(work.begin(), work.end(), cmp);
        }
      }
    };

    switch (node.kind) {
      case CfgNode::Kind::Entry: {
        for (const auto& e : node.succs) push_edge(e.node, store);
        break;
      }
      case CfgNode::Kind::Exit:
      case CfgNode::Kind::ExcExit:
        break;
      case CfgNode::Kind::Branch: {
        CondStores cs = eval_cond(an, ctx, *node.cond, std::move(store), nullptr);
        for (const auto& e : node.succs) {
          if (e.label == EdgeLabel::True)
            push_edge(e.node, cs.t);
          else if (e.label == EdgeLabel::False)
            push_edge(e.node, cs.f);
          else
            push_edge(e.node, NullnessStore::join(cs.t, cs.f));
        }
        break;
      }
      case CfgNode::Kind::Stmt: {
        NullnessStore out = transfer_stmt_node(an, ctx, node, std::move(store), nullptr);
        for (const auto& e : node.succs) push_edge(e.node, out);
        break;
      }
    }
  }

  if (bounded) {
    result.internal_error = true;
    result.before_stmt.clear();
    return result;
  }

  for (const auto& [stmt, node] : cfg.first_node) {
    if (in[node]) result.before_stmt.emplace(stmt, *in[node]);
  }
  result.has_normal_exit = in[cfg.exit].has_value();
  if (in[cfg.exit]) result.exit_store = *in[cfg.exit];
  return result;
}

// --- Analysis ------------------------------------------------------------------

Analysis::Analysis(const ProgramTable& t, const CheckerConfig& c, const Boundary& b)
    : table(t), config(c), boundary(b) {
  if (config.handlers_enabled) {
    handlers.add(std::make_unique<ContractHandler>());
    handlers.add(std::make_unique<StreamHandler>());
  }
  class_files_.resize(table.classes.size());
  for (const auto& f : table.files) {
    std::string pkg = f->package_str();
    for (const auto& cd : f->classes) {
      auto it = table.by_name.find(pkg.empty() ? cd->name : pkg + "." + cd->name);
      if (it != table.by_name.end() && table.classes[it->second].decl == cd.get())
        class_files_[it->second] = f->path;
    }
  }
}

const std::string& Analysis::file_of_class(uint32_t cls) const {
  static const std::string unknown = "<unknown>";
  if (cls >= class_files_.size()) return unknown;
  return class_files_[cls];
}

Nullness Analysis::param_nullness(MethodRef m, bool is_ctor, size_t pos) const {
  const MethodInfo& mi = is_ctor ? table.ctor(m) : table.method(m);
  if (table.cls(mi.owner).annotated) return effective(mi.explicit_params[pos]);
  return boundary.resolve_param(m, is_ctor, pos, BoundaryContext::CallSite).nullness;
}

Nullness Analysis::return_nullness(MethodRef m) const {
  const MethodInfo& mi = table.method(m);
  if (table.cls(mi.owner).annotated) return effective(mi.explicit_return);
  return boundary.resolve_return(m, BoundaryContext::CallSite).nullness;
}

Nullness Analysis::field_nullness(FieldRef f) const {
  const FieldInfo& fi = table.field(f);
  if (table.cls(f.cls).annotated) return effective(fi.explicit_nullness);
  return boundary.resolve_field(f).nullness;
}

ResolvedNullness Analysis::override_param(MethodRef super_m, size_t pos) const {
  const MethodInfo& mi = table.method(super_m);
  if (table.cls(mi.owner).annotated) {
    return {effective(mi.explicit_params[pos]),
            mi.explicit_params[pos] ? Provenance::Explicit : Provenance::NnelDefault};
  }
  return boundary.resolve_param(super_m, false, pos, BoundaryContext::OverrideSuper);
}

ResolvedNullness Analysis::override_return(MethodRef super_m) const {
  const MethodInfo& mi = table.method(super_m);
  if (table.cls(mi.owner).annotated) {
    return {effective(mi.explicit_return),
            mi.explicit_return ? Provenance::Explicit : Provenance::NnelDefault};
  }
  return boundary.resolve_return(super_m, BoundaryContext::OverrideSuper);
}

LambdaSig Analysis::lambda_signature(const LambdaExpr& l) const {
  LambdaSig s;
  if (l.res_iface == kNoId || !l.res_method.valid()) {
    s.params.assign(l.params.size(), Nullness::Nullable);
    return s;
  }
  const MethodInfo& fm = table.method(l.res_method);
  bool annotated = table.cls(fm.owner).annotated;
  for (size_t i = 0; i < l.params.size(); ++i) {
    bool is_ref = i < l.param_types.size() && l.param_types[i].is_reference();
    if (!is_ref) {
      s.params.push_back(Nullness::NonNull);
    } else if (annotated) {
      s.params.push_back(effective(fm.explicit_params[i]));
    } else {
      s.params.push_back(
          boundary.resolve_param(l.res_method, false, i, BoundaryContext::OverrideSuper)
              .nullness);
    }
  }
  s.ret_is_ref = l.return_type.is_reference();
  if (s.ret_is_ref) {
    s.ret = annotated ? effective(fm.explicit_return)
                      : boundary
                            .resolve_return(l.res_method,
                                            BoundaryContext::OverrideSuper)
                            .nullness;
  }
  s.valid = true;
  return s;
}

std::pair<const Contract*, bool> Analysis::contract_for(MethodRef m,
                                                        bool is_ctor) const {
  const MethodInfo& mi = is_ctor ? table.ctor(m) : table.method(m);
  if (table.cls(mi.owner).annotated)
    return {mi.contract ? &*mi.contract : nullptr, false};
  return {boundary.contract_for(m, is_ctor), true};
}

UnitRef Analysis::unit_for_method(uint32_t cls, const MethodDecl* m,
                                  const MethodInfo* info) const {
  UnitRef u;
  u.cls = cls;
  u.method = m;
  u.info = info;
  u.symbol_owner = m;
  u.is_static = m->mods.is_static || m->kind == MethodDecl::Kind::StaticInitBlock;
  return u;
}

UnitRef Analysis::unit_for_lambda(const UnitRef& enclosing,
                                  const LambdaExpr* l) const {
  UnitRef u;
  u.cls = enclosing.cls;
  u.lambda = l;
  u.symbol_owner = enclosing.symbol_owner;
  u.enclosing_info = enclosing.lambda ? enclosing.enclosing_info : enclosing.info;
  u.is_static = enclosing.is_static;
  return u;
}

UnitContext Analysis::make_context(const UnitRef& unit) const {
  UnitContext ctx;
  ctx.ref = unit;
  ctx.file = file_of_class(unit.cls);
  ctx.seed_this = !unit.is_static;

  if (unit.lambda) {
    const LambdaExpr& l = *unit.lambda;
    LambdaSig sig = lambda_signature(l);
    for (size_t i = 0; i < l.params.size(); ++i) {
      uint32_t sym = l.params[i].symbol;
      if (sym == kNoId) continue;
      const auto& st = unit.symbol_owner->symbols[sym];
      if (st.type.is_reference()) ctx.seeds.push_back({sym, sig.params[i]});
    }
    // Captured enclosing parameters keep their declared nullability.
    if (unit.enclosing_info) {
      const MethodInfo& em = *unit.enclosing_info;
      for (size_t i = 0; i < em.decl->params.size(); ++i) {
        uint32_t sym = em.decl->params[i].symbol;
        if (sym == kNoId || !em.param_types[i].is_reference()) continue;
        bool own = false;
        for (const auto& lp : l.params) own = own || lp.symbol == sym;
        if (!own) ctx.seeds.push_back({sym, effective(em.explicit_params[i])});
      }
    }
    ctx.return_is_ref = sig.valid && sig.ret_is_ref;
    ctx.return_nullness = sig.ret;
    ctx.return_type = l.return_type;
    if (l.body_expr) ctx.body_expr = l.body_expr.get();
    else ctx.body = l.body_block.get();

    std::vector<Refinement> refs;
    if (handlers.lambda_entry(l, unit, *this, &refs))
      ctx.entry_refinements = std::move(refs);
    return ctx;
  }

  const MethodDecl& m = *unit.method;
  if (unit.info) {
    for (size_t i = 0; i < m.params.size(); ++i) {
      uint32_t sym = m.params[i].symbol;
      if (sym == kNoId || !unit.info->param_types[i].is_reference()) continue;
      // Units are always annotated code: effective (explicit or NNEL).
      ctx.seeds.push_back({sym, effective(unit.info->explicit_params[i])});
    }
    ctx.return_is_ref = unit.info->return_type.is_reference();
    ctx.return_nullness = effective(unit.info->explicit_return);
    ctx.return_type = unit.info->return_type;
  } else {
    ctx.return_type = TypeRef::of(TypeRef::Kind::Void);
  }
  ctx.body = m.body.get();
  return ctx;
}

const DataflowResult& Analysis::result_for(const UnitRef& unit) const {
  CacheEntry* entry;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = cache_[unit.key()];
    if (!slot) slot = std::make_unique<CacheEntry>();
    entry = slot.get();
  }
  std::call_once(entry->once, [&] {
    computations_.fetch_add(1);
    UnitContext ctx = make_context(unit);
    entry->result = run_dataflow(ctx);
  });
  return entry->result;
}

DataflowResult Analysis::run_dataflow(const UnitContext& ctx) const {
  NullnessStore entry = make_entry_store(ctx);
  for (const auto& r : ctx.entry_refinements) entry.set(r.path, r.nullness);

  if (ctx.body_expr) {
    DataflowResult result;
    result.entry_store = entry;
    NullnessStore after = entry;
    EvalOut out = eval_expr(*this, ctx, *ctx.body_expr, after, nullptr);
    result.exit_store = after;
    result.has_normal_exit = true;
    const TypeRef& rt = ctx.return_type;
    if (rt.kind == TypeRef::Kind::Boolean) {
      CondStores cs = eval_cond(*this, ctx, *ctx.body_expr, entry, nullptr);
      result.when_true = std::move(cs.t);
      result.when_false = std::move(cs.f);
    } else if (rt.is_reference() && out.path) {
      NullnessStore nn = after;
      nn.set(*out.path, Nullness::NonNull);
      result.when_nonnull = std::move(nn);
    }
    return result;
  }

  if (!ctx.body) {
    DataflowResult result;
    result.entry_store = entry;
    result.exit_store = entry;
    result.has_normal_exit = true;
    return result;
  }

  Cfg cfg = build_cfg(*ctx.body);
  DataflowResult result = fixpoint(*this, ctx, cfg, entry);
  if (result.internal_error) {
    result.internal_span = ctx.body->span;
    return result;
  }

  if (const ReturnStmt* ret = sole_final_return(*ctx.body)) {
    auto it = result.before_stmt.find(ret);
    if (ret->value && it != result.before_stmt.end()) {
      const TypeRef& rt = ctx.return_type;
      if (rt.kind == TypeRef::Kind::Boolean) {
        CondStores cs = eval_cond(*this, ctx, *ret->value, it->second, nullptr);
        result.when_true = std::move(cs.t);
        result.when_false = std::move(cs.f);
      } else if (rt.is_reference()) {
        NullnessStore s = it->second;
        EvalOut out = eval_expr(*this, ctx, *ret->value, s, nullptr);
        if (out.path) {
          s.set(*out.path, Nullness::NonNull);
          result.when_nonnull = std::move(s);
        }
      }
    }
  }
  return result;
}

}  // namespace minij
