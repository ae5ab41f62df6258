#include "minij/initcheck.hpp"

#include <algorithm>

namespace minij {

namespace {

// Maps a `this.f` exit fact back to an own-class field index.
std::optional<uint32_t> own_field_of_path(const ProgramTable& table, uint32_t cls,
                                          const AccessPath& p) {
  if (p.root != AccessPath::Root::This || p.links.size() != 1) return std::nullopt;
  uint32_t link = p.links[0];
  if (link & 1u) return std::nullopt;  // call link
  uint32_t name_id = link >> 1;
  const ClassInfo& ci = table.cls(cls);
  for (uint32_t i = 0; i < ci.fields.size(); ++i)
    if (ci.fields[i].name_id == name_id && !ci.fields[i].is_static) return i;
  return std::nullopt;
}

bool nonnull_instance_field(const FieldInfo& fi) {
  return !fi.is_static && fi.is_reference &&
         effective(fi.explicit_nullness) == Nullness::NonNull;
}

bool nonnull_static_field(const FieldInfo& fi) {
  return fi.is_static && fi.is_reference &&
         effective(fi.explicit_nullness) == Nullness::NonNull;
}

// Must-assign analysis for static fields over a static body's CFG; the
// instance side uses dataflow exit facts instead (paths never root at a
// class).
std::set<uint32_t> statics_assigned_at_exit(const ProgramTable& table,
                                            uint32_t cls, const MethodDecl& m) {
  std::set<uint32_t> assigned;
  if (!m.body) return assigned;
  const ClassInfo& ci = table.cls(cls);

  auto target_of = [&](const Expr* lhs) -> std::optional<uint32_t> {
    FieldRef ref;
    if (lhs->kind == Expr::Kind::Name) {
      const auto& n = static_cast<const NameExpr&>(*lhs);
      if (n.res != NameExpr::Res::ImplicitField) return std::nullopt;
      ref = n.res_field;
    } else if (lhs->kind == Expr::Kind::Field) {
      const auto& f = static_cast<const FieldExpr&>(*lhs);
      if (f.res != FieldExpr::Res::Static) return std::nullopt;
      ref = f.res_field;
    } else {
      return std::nullopt;
    }
    if (ref.cls != cls) return std::nullopt;
    const FieldInfo& fi = table.field(ref);
    if (!fi.is_static) return std::nullopt;
    for (uint32_t i = 0; i < ci.fields.size(); ++i)
      if (&ci.fields[i] == &fi) return i;
    return std::nullopt;
  };

  Cfg cfg = build_cfg(*m.body);
  size_t nf = ci.fields.size();
  std::vector<std::vector<uint8_t>> in(cfg.nodes.size());
  in[cfg.entry].assign(nf, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t n : cfg.rpo) {
      if (n == cfg.entry) continue;
      std::vector<uint8_t> merged;
      for (const auto& pe : cfg.preds[n]) {
        if (in[pe.node].empty()) continue;
        std::vector<uint8_t> out = in[pe.node];
        const CfgNode& pn = cfg.nodes[pe.node];
        const Expr* lhs = nullptr;
        if (pn.kind == CfgNode::Kind::Stmt) {
          if (pn.stmt_kind == CfgNode::StmtKind::Real &&
              pn.real->kind == Stmt::Kind::Assign)
            lhs = static_cast<const AssignStmt*>(pn.real)->lhs.get();
          else if (pn.stmt_kind == CfgNode::StmtKind::AssignArm && pn.assign_lhs)
            lhs = pn.assign_lhs;
        }
        if (lhs) {
          if (auto idx = target_of(lhs)) out[*idx] = 1;
        }
        if (merged.empty()) {
          merged = std::move(out);
        } else {
          for (size_t i = 0; i < nf; ++i)
            merged[i] = merged[i] & out[i];  // must-assign: intersection
        }
      }
      if (merged.empty()) continue;
      if (in[n] != merged) {
        in[n] = std::move(merged);
        changed = true;
      }
    }
  }
  if (!in[cfg.exit].empty()) {
    for (size_t i = 0; i < nf; ++i)
      if (in[cfg.exit][i]) assigned.insert(static_cast<uint32_t>(i));
  } else {
    // No normal exit: vacuous, nothing to demand from this body.
    for (uint32_t i = 0; i < nf; ++i) assigned.insert(i);
  }
  return assigned;
}

}  // namespace

std::vector<std::pair<const Stmt*, MethodRef>> compute_always_invoked(
    const ProgramTable& table, uint32_t cls, const MethodDecl& m) {
  std::vector<std::pair<const Stmt*, MethodRef>> out;
  if (!m.body) return out;
  for (const auto& s : m.body->stmts) {
    if (s->kind != Stmt::Kind::ExprStmt) continue;  // returns do not stop the scan
    const auto& es = static_cast<const ExprStmt&>(*s);
    if (es.expr->kind != Expr::Kind::Call) continue;
    const auto& call = static_cast<const CallExpr&>(*es.expr);
    if (call.recv && call.recv->kind != Expr::Kind::This) continue;
    if (call.res != CallExpr::Res::Instance && call.res != CallExpr::Res::Static)
      continue;
    if (!call.res_method.valid() || call.res_method.cls != cls) continue;
    const MethodInfo& mi = table.method(call.res_method);
    if (!mi.decl->mods.is_private && !mi.decl->mods.is_final) continue;
    out.push_back({s.get(), call.res_method});
  }
  return out;
}

std::set<uint32_t> fields_assigned_at_exit(const Analysis& an, uint32_t cls,
                                           const MethodDecl& m,
                                           const MethodInfo* info) {
  std::set<uint32_t> out;
  const ClassInfo& ci = an.table.cls(cls);
  if (m.mods.is_static || m.kind == MethodDecl::Kind::StaticInitBlock)
    return statics_assigned_at_exit(an.table, cls, m);

  UnitRef unit = an.unit_for_method(cls, &m, info);
  const DataflowResult& r = an.result_for(unit);
  if (!r.has_normal_exit) {
    // A body that never completes normally constrains nothing.
    for (uint32_t i = 0; i < ci.fields.size(); ++i)
      if (nonnull_instance_field(ci.fields[i])) out.insert(i);
    return out;
  }
  for (const auto& [path, n] : r.exit_store.facts()) {
    if (n != Nullness::NonNull) continue;
    if (auto idx = own_field_of_path(an.table, cls, path)) out.insert(*idx);
  }
  return out;
}

InitClassFacts compute_init_facts(const Analysis& an, uint32_t cls) {
  InitClassFacts facts;
  const ClassInfo& ci = an.table.cls(cls);
  const ClassDecl& decl = *ci.decl;

  for (uint32_t i = 0; i < ci.fields.size(); ++i)
    if (ci.fields[i].decl->init) facts.decl_initialized.insert(i);

  auto info_of = [&](const MethodDecl* m) -> const MethodInfo* {
    for (const auto& mi : ci.methods)
      if (mi.decl == m) return &mi;
    for (const auto& mi : ci.ctors)
      if (mi.decl == m) return &mi;
    return nullptr;
  };

  auto effective_for = [&](const MethodDecl& m) {
    std::set<uint32_t> direct = fields_assigned_at_exit(an, cls, m, info_of(&m));
    std::set<uint32_t> eff = direct;
    auto always = compute_always_invoked(an.table, cls, m);
    for (const auto& [stmt, target] : always) {
      const MethodInfo& tm = an.table.method(target);
      std::set<uint32_t> helper =
          fields_assigned_at_exit(an, cls, *tm.decl, &tm);
      eff.insert(helper.begin(), helper.end());
    }
    facts.directly_assigned[&m] = std::move(direct);
    facts.always_invoked[&m] = std::move(always);
    facts.effective_initialized[&m] = eff;
    return eff;
  };

  for (const auto& b : decl.init_blocks) {
    std::set<uint32_t> eff = effective_for(*b);
    facts.block_initialized.insert(eff.begin(), eff.end());
  }
  for (const auto& b : decl.static_init_blocks) {
    std::set<uint32_t> eff = effective_for(*b);
    facts.block_initialized.insert(eff.begin(), eff.end());
  }

  facts.has_ctors = !decl.ctors.empty();
  bool first = true;
  for (const auto& c : decl.ctors) {
    std::set<uint32_t> eff = effective_for(*c);
    if (first) {
      facts.ctor_guaranteed = eff;
      first = false;
    } else {
      std::set<uint32_t> inter;
      std::set_intersection(facts.ctor_guaranteed.begin(),
                            facts.ctor_guaranteed.end(), eff.begin(), eff.end(),
                            std::inserter(inter, inter.begin()));
      facts.ctor_guaranteed = std::move(inter);
    }
  }

  for (const auto& m : decl.methods) {
    const MethodInfo* mi = info_of(m.get());
    if (mi && mi->is_initializer) effective_for(*m);
  }
  return facts;
}

void check_field_initialization(const Analysis& an, uint32_t cls,
                                const InitClassFacts& facts, DiagSink& sink) {
  const ClassInfo& ci = an.table.cls(cls);
  const std::string& file = an.file_of_class(cls);

  auto initializer_covers = [&](uint32_t field, bool want_static) {
    for (const auto& m : ci.decl->methods) {
      const MethodInfo* info = nullptr;
      for (const auto& mi : ci.methods)
        if (mi.decl == m.get()) info = &mi;
      if (!info || !info->is_initializer) continue;
      if (m->mods.is_static != want_static) continue;
      auto it = facts.effective_initialized.find(m.get());
      if (it != facts.effective_initialized.end() && it->second.count(field))
        return true;
    }
    return false;
  };

  for (uint32_t i = 0; i < ci.fields.size(); ++i) {
    const FieldInfo& fi = ci.fields[i];
    if (nonnull_instance_field(fi)) {
      if (facts.decl_initialized.count(i)) continue;   // condition 1
      if (facts.block_initialized.count(i)) continue;  // condition 2
      if (facts.has_ctors && facts.ctor_guaranteed.count(i)) continue;  // 3
      if (initializer_covers(i, false)) continue;      // condition 4
      sink.emit(DiagCode::FieldNoInit, file, fi.decl->name_span,
                "@NonNull field '" + fi.decl->name +
                    "' is not properly initialized");
    } else if (nonnull_static_field(fi)) {
      if (facts.decl_initialized.count(i)) continue;
      if (facts.block_initialized.count(i)) continue;
      if (initializer_covers(i, true)) continue;
      sink.emit(DiagCode::FieldNoInit, file, fi.decl->name_span,
                "@NonNull static field '" + fi.decl->name +
                    "' is not properly initialized");
    }
  }
}

InitWalkState::InitWalkState(const Analysis& an, uint32_t cls,
                             const InitClassFacts& facts, const MethodDecl& body,
                             DiagSink& sink, std::string file)
    : an_(an), cls_(cls), facts_(facts), body_(body), sink_(sink),
      file_(std::move(file)) {
  base_ = facts.decl_initialized;
  base_.insert(facts.block_initialized.begin(), facts.block_initialized.end());
  // Inside an @Initializer, constructors have already run; only their
  // guaranteed fields count, never other initializers' effects.
  bool is_initializer = false;
  const ClassInfo& ci = an.table.cls(cls);
  for (const auto& mi : ci.methods)
    if (mi.decl == &body && mi.is_initializer) is_initializer = true;
  if (is_initializer)
    base_.insert(facts.ctor_guaranteed.begin(), facts.ctor_guaranteed.end());
}

void InitWalkState::on_field_read(FieldRef f, Span span,
                                  const NullnessStore& store) {
  if (f.cls != cls_) return;
  const ClassInfo& ci = an_.table.cls(cls_);
  uint32_t index = f.index;
  const FieldInfo& fi = ci.fields[index];
  if (!nonnull_instance_field(fi)) return;
  if (base_.count(index) || preceding_.count(index)) return;
  AccessPath p =
      AccessPath::this_root().extended(AccessPath::field_link(fi.name_id));
  if (auto fact = store.get(p); fact && *fact == Nullness::NonNull) return;
  sink_.emit(DiagCode::UseBeforeInit, file_, span,
             "read of @NonNull field '" + fi.decl->name +
                 "' before it is initialized");
}

void InitWalkState::after_top_level(const Stmt* s) {
  auto it = facts_.always_invoked.find(&body_);
  if (it == facts_.always_invoked.end()) return;
  for (const auto& [stmt, target] : it->second) {
    if (stmt != s) continue;
    const MethodInfo& tm = an_.table.method(target);
    auto da = facts_.directly_assigned.find(tm.decl);
    if (da == facts_.directly_assigned.end()) {
      std::set<uint32_t> helper = fields_assigned_at_exit(an_, cls_, *tm.decl, &tm);
      preceding_.insert(helper.begin(), helper.end());
    } else {
      preceding_.insert(da->second.begin(), da->second.end());
    }
  }
}

}  // namespace minij
