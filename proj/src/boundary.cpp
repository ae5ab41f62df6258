#include "minij/boundary.hpp"

#include <sstream>

#include "minij/cfg.hpp"
#include "minij/contracts.hpp"

namespace minij {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Explicit: return "explicit";
    case Provenance::NnelDefault: return "nnel-default";
    case Provenance::Model: return "model";
    case Provenance::Restrictive: return "restrictive";
    case Provenance::JarInfer: return "jarinfer";
    case Provenance::OptimisticDefault: return "optimistic-default";
    case Provenance::PessimisticDefault: return "pessimistic-default";
  }
  return "?";
}

namespace {

std::regex compile(const std::string& pattern, const char* which) {
  try {
    return std::regex(pattern);
  } catch (const std::regex_error& e) {
    throw ConfigError(std::string(which) + " regex '" + pattern +
                      "' is invalid: " + e.what());
  }
}

}  // namespace

void validate_boundary_regexes(const CheckerConfig& config) {
  if (config.annotated_packages.empty())
    throw ConfigError("annotatedPackages is required");
  compile(config.annotated_packages, "annotatedPackages");
  if (!config.unannotated_subpackages.empty())
    compile(config.unannotated_subpackages, "unannotatedSubPackages");
}

AnnotationDecision Boundary::classify(const std::string& package_name,
                                      const std::string& qualified_name,
                                      const std::vector<AnnotationUse>& anns,
                                      const CheckerConfig& config) {
  // Evaluated in exactly this order (the first four Fig. 4 steps).
  std::regex annotated = compile(config.annotated_packages, "annotatedPackages");
  if (!std::regex_match(package_name, annotated))
    return AnnotationDecision::NotInAnnotatedPackages;
  if (!config.unannotated_subpackages.empty()) {
    std::regex sub = compile(config.unannotated_subpackages, "unannotatedSubPackages");
    if (std::regex_match(package_name, sub))
      return AnnotationDecision::UnannotatedSubpackage;
  }
  for (const auto& c : config.unannotated_classes)
    if (c == qualified_name) return AnnotationDecision::UnannotatedClassList;
  if (config.treat_generated_as_unannotated &&
      has_annotation(anns, AnnKind::Generated))
    return AnnotationDecision::GeneratedUnannotated;
  return AnnotationDecision::AnnotatedDefault;
}

Boundary::Boundary(const CheckerConfig& config, const ProgramTable& table)
    : config_(config), table_(table) {
  models_ = default_models();
  for (const auto& path : config.library_model_files) {
    auto extra = load_model_file(path);
    models_.insert(models_.end(), extra.begin(), extra.end());
  }
  for (const auto& m : models_) {
    std::string key = m.cls + "#" + m.method + "#" + std::to_string(m.arity);
    by_key_.emplace(std::move(key), &m);
  }
  // Pre-parse model behaviors into contracts.
  for (const auto& m : models_) {
    Contract contract;
    bool have = false;
    if (m.contract) {
      std::string err;
      auto parsed = parse_contract(*m.contract, m.arity, &err);
      if (parsed) {
        contract = std::move(*parsed);
        have = true;
      }
    }
    if (m.assert_nonnull_arg && *m.assert_nonnull_arg >= 0 &&
        *m.assert_nonnull_arg < m.arity) {
      ContractClause clause;
      clause.antecedents.assign(m.arity, ContractClause::Ante::Any);
      clause.antecedents[*m.assert_nonnull_arg] = ContractClause::Ante::Null;
      clause.consequent = ContractClause::Conseq::Fail;
      contract.clauses.push_back(std::move(clause));
      have = true;
    }
    if (have) {
      std::string key = m.cls + "#" + m.method + "#" + std::to_string(m.arity);
      model_contracts_.emplace(std::move(key), std::move(contract));
    }
  }
}

std::string Boundary::method_key(MethodRef m, bool is_ctor) const {
  const MethodInfo& mi = is_ctor ? table_.ctor(m) : table_.method(m);
  const ClassInfo& ci = table_.cls(mi.owner);
  std::string name = is_ctor ? "<init>" : mi.decl->name;
  return ci.qualified + "#" + name + "#" +
         std::to_string(mi.param_types.size());
}

const LibraryModel* Boundary::model_for(MethodRef m, bool is_ctor) const {
  auto it = by_key_.find(method_key(m, is_ctor));
  return it == by_key_.end() ? nullptr : it->second;
}

const Contract* Boundary::contract_for(MethodRef m, bool is_ctor) const {
  auto it = model_contracts_.find(method_key(m, is_ctor));
  return it == model_contracts_.end() ? nullptr : &it->second;
}

bool Boundary::jarinfer_nonnull(MethodRef m, bool is_ctor, size_t position) const {
  auto it = jarinfer_nonnull_.find(method_key(m, is_ctor) + "#" +
                                   std::to_string(position));
  return it != jarinfer_nonnull_.end() && it->second;
}

ResolvedNullness Boundary::resolve_param(MethodRef m, bool is_ctor,
                                         size_t position,
                                         BoundaryContext ctx) const {
  const MethodInfo& mi = is_ctor ? table_.ctor(m) : table_.method(m);
  // Pipeline order: model, restrictive annotation, mini-JarInfer, default.
  if (const LibraryModel* model = model_for(m, is_ctor)) {
    auto it = model->params.find(static_cast<int>(position));
    if (it != model->params.end()) return {it->second, Provenance::Model};
  }
  if (config_.acknowledge_restrictive && config_.handlers_enabled &&
      position < mi.explicit_params.size() && mi.explicit_params[position]) {
    Nullness n = *mi.explicit_params[position];
    bool restrictive = ctx == BoundaryContext::CallSite ? n == Nullness::NonNull
                                                        : n == Nullness::Nullable;
    if (restrictive) return {n, Provenance::Restrictive};
  }
  if (config_.jarinfer_enabled && jarinfer_nonnull(m, is_ctor, position))
    return {Nullness::NonNull, Provenance::JarInfer};
  if (ctx == BoundaryContext::CallSite) {
    if (config_.pessimistic_mode)
      return {Nullness::NonNull, Provenance::PessimisticDefault};
    return {Nullness::Nullable, Provenance::OptimisticDefault};
  }
  return {Nullness::NonNull, Provenance::OptimisticDefault};
}

ResolvedNullness Boundary::resolve_return(MethodRef m, BoundaryContext ctx) const {
  const MethodInfo& mi = table_.method(m);
  if (const LibraryModel* model = model_for(m, false)) {
    if (model->ret) return {*model->ret, Provenance::Model};
  }
  if (config_.acknowledge_restrictive && config_.handlers_enabled &&
      mi.explicit_return) {
    Nullness n = *mi.explicit_return;
    bool restrictive = ctx == BoundaryContext::CallSite ? n == Nullness::Nullable
                                                        : n == Nullness::NonNull;
    if (restrictive) return {n, Provenance::Restrictive};
  }
  if (ctx == BoundaryContext::CallSite) {
    if (config_.pessimistic_mode)
      return {Nullness::Nullable, Provenance::PessimisticDefault};
    return {Nullness::NonNull, Provenance::OptimisticDefault};
  }
  return {Nullness::Nullable, Provenance::OptimisticDefault};
}

ResolvedNullness Boundary::resolve_field(FieldRef f) const {
  // Reads of unannotated-class fields act like NonNull implicit getters.
  const FieldInfo& fi = table_.field(f);
  if (config_.acknowledge_restrictive && config_.handlers_enabled &&
      fi.explicit_nullness && *fi.explicit_nullness == Nullness::Nullable)
    return {Nullness::Nullable, Provenance::Restrictive};
  if (config_.pessimistic_mode)
    return {Nullness::Nullable, Provenance::PessimisticDefault};
  return {Nullness::NonNull, Provenance::OptimisticDefault};
}

// --- mini-JarInfer -----------------------------------------------------------------
//
// Must-dereference analysis over unannotated method bodies: a parameter is
// inferred @NonNull iff every path from entry to every exit dereferences it
// before any assignment to it.  Per-parameter state lattice D > U > K with
// meet = min: D = dereferenced while still holding the caller's value,
// U = untouched, K = assigned first.

namespace {

enum : uint8_t { kK = 0, kU = 1, kD = 2 };

struct ParamScan {
  const std::vector<uint32_t>& param_syms;
  std::vector<uint8_t>& state;

  void deref(uint32_t sym) {
    for (size_t i = 0; i < param_syms.size(); ++i)
      if (param_syms[i] == sym && state[i] == kU) state[i] = kD;
  }
  void assign(uint32_t sym) {
    for (size_t i = 0; i < param_syms.size(); ++i)
      if (param_syms[i] == sym && state[i] == kU) state[i] = kK;
  }

  static std::optional<uint32_t> local_symbol(const Expr& e) {
    if (e.kind != Expr::Kind::Name) return std::nullopt;
    const auto& n = static_cast<const NameExpr&>(e);
    if (n.res != NameExpr::Res::Local) return std::nullopt;
    return n.res_symbol;
  }

  // Walks in evaluation order; receivers that are parameter reads count as
  // dereferences when a member is accessed through them.
  void scan(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Field: {
        const auto& f = static_cast<const FieldExpr&>(e);
        if (f.res == FieldExpr::Res::Instance || f.res == FieldExpr::Res::Opaque) {
          scan(*f.recv);
          if (auto sym = local_symbol(*f.recv)) deref(*sym);
        }
        break;
      }
      case Expr::Kind::Call: {
        const auto& c = static_cast<const CallExpr&>(e);
        if (c.recv && !c.recv_is_class) {
          scan(*c.recv);
          if (auto sym = local_symbol(*c.recv)) deref(*sym);
        }
        for (const auto& a : c.args) scan(*a);
        break;
      }
      case Expr::Kind::New:
        for (const auto& a : static_cast<const NewExpr&>(e).args) scan(*a);
        break;
      case Expr::Kind::Cond: {
        const auto& c = static_cast<const CondExpr&>(e);
        scan(*c.cond);
        // Arms are conditional; a deref inside either arm is not
        // unconditional, so only the condition contributes here.  (Arm-level
        // precision comes from the CFG when the ?: is statement-level.)
        break;
      }
      case Expr::Kind::Binary: {
        const auto& b = static_cast<const BinaryExpr&>(e);
        scan(*b.lhs);
        if (b.op != BinOp::And && b.op != BinOp::Or) scan(*b.rhs);
        break;
      }
      case Expr::Kind::Unary:
        scan(*static_cast<const UnaryExpr&>(e).operand);
        break;
      default:
        break;  // lambdas run later; literals/names are not dereferences
    }
  }

  void transfer_node(const CfgNode& node) {
    switch (node.kind) {
      case CfgNode::Kind::Branch:
        scan(*node.cond);
        break;
      case CfgNode::Kind::Stmt:
        switch (node.stmt_kind) {
          case CfgNode::StmtKind::Real: {
            const Stmt& s = *node.real;
            switch (s.kind) {
              case Stmt::Kind::LocalDecl: {
                const auto& d = static_cast<const LocalDeclStmt&>(s);
                if (d.init) scan(*d.init);
                break;
              }
              case Stmt::Kind::Assign: {
                const auto& a = static_cast<const AssignStmt&>(s);
                if (a.lhs->kind == Expr::Kind::Field) scan(*a.lhs);
                scan(*a.rhs);
                if (auto sym = local_symbol(*a.lhs)) assign(*sym);
                break;
              }
              case Stmt::Kind::ExprStmt:
                scan(*static_cast<const ExprStmt&>(s).expr);
                break;
              case Stmt::Kind::Return: {
                const auto& r = static_cast<const ReturnStmt&>(s);
                if (r.value) scan(*r.value);
                break;
              }
              case Stmt::Kind::Throw:
                scan(*static_cast<const ThrowStmt&>(s).value);
                break;
              default:
                break;
            }
            break;
          }
          case CfgNode::StmtKind::AssignArm: {
            if (node.assign_lhs && node.assign_lhs->kind == Expr::Kind::Field)
              scan(*node.assign_lhs);
            scan(*node.value);
            if (node.assign_lhs) {
              if (auto sym = local_symbol(*node.assign_lhs)) assign(*sym);
            }
            break;
          }
          case CfgNode::StmtKind::ReturnArm:
          case CfgNode::StmtKind::EvalArm:
            scan(*node.value);
            break;
        }
        break;
      default:
        break;
    }
  }
};

}  // namespace

void Boundary::run_mini_jarinfer() {
  if (!config_.jarinfer_enabled) return;
  for (const ClassInfo& ci : table_.classes) {
    if (ci.annotated) continue;
    auto analyze = [&](const MethodInfo& mi, bool is_ctor) {
      const MethodDecl& m = *mi.decl;
      if (!m.body) return;
      std::vector<uint32_t> param_syms;
      std::vector<size_t> positions;
      for (size_t i = 0; i < m.params.size(); ++i) {
        if (mi.param_types[i].is_reference() && m.params[i].symbol != kNoId) {
          param_syms.push_back(m.params[i].symbol);
          positions.push_back(i);
        }
      }
      if (param_syms.empty()) return;

      Cfg cfg = build_cfg(*m.body);
      size_t np = param_syms.size();
      std::vector<std::vector<uint8_t>> in(cfg.nodes.size());
      in[cfg.entry].assign(np, kU);
      bool changed = true;
      while (changed) {
        changed = false;
        for (uint32_t n : cfg.rpo) {
          if (n != cfg.entry) {
            std::vector<uint8_t> merged;
            for (const auto& pe : cfg.preds[n]) {
              std::vector<uint8_t> out = in[pe.node];
              if (out.empty()) continue;
              ParamScan scan{param_syms, out};
              scan.transfer_node(cfg.nodes[pe.node]);
              if (merged.empty()) {
                merged = std::move(out);
              } else {
                for (size_t i = 0; i < np; ++i)
                  merged[i] = std::min(merged[i], out[i]);
              }
            }
            if (merged.empty()) continue;
            if (in[n] != merged) {
              in[n] = std::move(merged);
              changed = true;
            }
          }
        }
      }

      auto exit_state = [&](uint32_t node) -> const std::vector<uint8_t>* {
        return in[node].empty() ? nullptr : &in[node];
      };
      const std::vector<uint8_t>* normal = exit_state(cfg.exit);
      const std::vector<uint8_t>* exc =
          cfg.exc_exit ? exit_state(*cfg.exc_exit) : nullptr;
      std::string base = ci.qualified + "#" +
                         (is_ctor ? std::string("<init>") : m.name) + "#" +
                         std::to_string(m.params.size());
      for (size_t i = 0; i < np; ++i) {
        bool ok = (normal || exc);
        if (normal && (*normal)[i] != kD) ok = false;
        if (exc && (*exc)[i] != kD) ok = false;
        if (ok)
          jarinfer_nonnull_[base + "#" + std::to_string(positions[i])] = true;
      }
    };
    for (const auto& mi : ci.methods) analyze(mi, false);
    for (const auto& mi : ci.ctors) analyze(mi, true);
  }
}

}  // namespace minij
