#include "minij/cfg.hpp"

#include <algorithm>
#include <cassert>

namespace minij {

namespace {

struct Dangling {
  uint32_t from;
  EdgeLabel label;
};

struct CondResult {
  uint32_t first;  // head of the condition chain (branch target for loops)
  std::vector<Dangling> t, f;
};

struct CfgBuilder {
  Cfg cfg;

  CfgBuilder() {
    cfg.nodes.emplace_back();
    cfg.nodes[0].kind = CfgNode::Kind::Entry;
    cfg.nodes.emplace_back();
    cfg.nodes[1].kind = CfgNode::Kind::Exit;
    cfg.entry = 0;
    cfg.exit = 1;
  }

  uint32_t new_node(CfgNode::Kind kind, const Stmt* origin) {
    CfgNode n;
    n.kind = kind;
    n.origin = origin;
    cfg.nodes.push_back(std::move(n));
    return static_cast<uint32_t>(cfg.nodes.size() - 1);
  }

  uint32_t exc_exit() {
    if (!cfg.exc_exit) {
      uint32_t n = new_node(CfgNode::Kind::ExcExit, nullptr);
      cfg.exc_exit = n;
    }
    return *cfg.exc_exit;
  }

  void attach(const std::vector<Dangling>& preds, uint32_t to) {
    for (const auto& d : preds)
      cfg.nodes[d.from].succs.push_back(CfgEdge{to, d.label});
  }

  static bool is_cond_shaped(const Expr& e) {
    if (e.kind == Expr::Kind::Unary) return true;
    if (e.kind == Expr::Kind::Cond) return true;
    if (e.kind == Expr::Kind::Binary) {
      BinOp op = static_cast<const BinaryExpr&>(e).op;
      return op == BinOp::And || op == BinOp::Or;
    }
    return false;
  }

  CondResult lower_cond(const Expr& e, std::vector<Dangling> preds,
                        const Stmt* origin) {
    if (e.kind == Expr::Kind::Binary) {
      const auto& b = static_cast<const BinaryExpr&>(e);
      if (b.op == BinOp::And) {
        CondResult ca = lower_cond(*b.lhs, std::move(preds), origin);
        CondResult cb = lower_cond(*b.rhs, std::move(ca.t), origin);
        CondResult out;
        out.first = ca.first;
        out.t = std::move(cb.t);
        out.f = std::move(ca.f);
        out.f.insert(out.f.end(), cb.f.begin(), cb.f.end());
        return out;
      }
      if (b.op == BinOp::Or) {
        CondResult ca = lower_cond(*b.lhs, std::move(preds), origin);
        CondResult cb = lower_cond(*b.rhs, std::move(ca.f), origin);
        CondResult out;
        out.first = ca.first;
        out.t = std::move(ca.t);
        out.t.insert(out.t.end(), cb.t.begin(), cb.t.end());
        out.f = std::move(cb.f);
        return out;
      }
    }
    if (e.kind == Expr::Kind::Unary) {
      const auto& u = static_cast<const UnaryExpr&>(e);
      CondResult c = lower_cond(*u.operand, std::move(preds), origin);
      std::swap(c.t, c.f);
      return c;
    }
    if (e.kind == Expr::Kind::Cond) {
      const auto& c = static_cast<const CondExpr&>(e);
      CondResult cc = lower_cond(*c.cond, std::move(preds), origin);
      CondResult cx = lower_cond(*c.then_e, std::move(cc.t), origin);
      CondResult cy = lower_cond(*c.else_e, std::move(cc.f), origin);
      CondResult out;
      out.first = cc.first;
      out.t = std::move(cx.t);
      out.t.insert(out.t.end(), cy.t.begin(), cy.t.end());
      out.f = std::move(cx.f);
      out.f.insert(out.f.end(), cy.f.begin(), cy.f.end());
      return out;
    }
    uint32_t n = new_node(CfgNode::Kind::Branch, origin);
    cfg.nodes[n].cond = &e;
    attach(preds, n);
    CondResult out;
    out.first = n;
    out.t = {{n, EdgeLabel::True}};
    out.f = {{n, EdgeLabel::False}};
    return out;
  }

  // Splits nested ?: in a value position; calls `emit` once per leaf arm.
  template <typename Emit>
  std::vector<Dangling> lower_valued(const Expr& value, std::vector<Dangling> preds,
                                     const Stmt* origin, Emit&& emit) {
    if (value.kind == Expr::Kind::Cond) {
      const auto& c = static_cast<const CondExpr&>(value);
      CondResult cc = lower_cond(*c.cond, std::move(preds), origin);
      std::vector<Dangling> out =
          lower_valued(*c.then_e, std::move(cc.t), origin, emit);
      std::vector<Dangling> out2 =
          lower_valued(*c.else_e, std::move(cc.f), origin, emit);
      out.insert(out.end(), out2.begin(), out2.end());
      return out;
    }
    return emit(value, std::move(preds));
  }

  std::vector<Dangling> lower_stmt(const Stmt& s, std::vector<Dangling> preds) {
    size_t before = cfg.nodes.size();
    std::vector<Dangling> out = lower_stmt_inner(s, std::move(preds));
    if (cfg.nodes.size() > before)
      cfg.first_node.emplace(&s, static_cast<uint32_t>(before));
    return out;
  }

  std::vector<Dangling> lower_stmt_inner(const Stmt& s, std::vector<Dangling> preds) {
    switch (s.kind) {
      case Stmt::Kind::Block: {
        const auto& b = static_cast<const Block&>(s);
        for (const auto& st : b.stmts) preds = lower_stmt(*st, std::move(preds));
        return preds;
      }
      case Stmt::Kind::If: {
        const auto& i = static_cast<const IfStmt&>(s);
        CondResult c = lower_cond(*i.cond, std::move(preds), &s);
        std::vector<Dangling> out = lower_stmt(*i.then_s, std::move(c.t));
        if (i.else_s) {
          std::vector<Dangling> e = lower_stmt(*i.else_s, std::move(c.f));
          out.insert(out.end(), e.begin(), e.end());
        } else {
          out.insert(out.end(), c.f.begin(), c.f.end());
        }
        return out;
      }
      case Stmt::Kind::While: {
        const auto& w = static_cast<const WhileStmt&>(s);
        CondResult c = lower_cond(*w.cond, std::move(preds), &s);
        std::vector<Dangling> body = lower_stmt(*w.body, std::move(c.t));
        attach(body, c.first);
        return c.f;
      }
      case Stmt::Kind::Return: {
        const auto& r = static_cast<const ReturnStmt&>(s);
        if (r.value && r.value->kind == Expr::Kind::Cond) {
          lower_valued(*r.value, std::move(preds), &s,
                       [&](const Expr& leaf, std::vector<Dangling> p) {
                         uint32_t n = new_node(CfgNode::Kind::Stmt, &s);
                         cfg.nodes[n].stmt_kind = CfgNode::StmtKind::ReturnArm;
                         cfg.nodes[n].value = &leaf;
                         attach(p, n);
                         cfg.nodes[n].succs.push_back(CfgEdge{cfg.exit, EdgeLabel::Fall});
                         return std::vector<Dangling>{};
                       });
          return {};
        }
        uint32_t n = new_node(CfgNode::Kind::Stmt, &s);
        cfg.nodes[n].real = &s;
        attach(preds, n);
        cfg.nodes[n].succs.push_back(CfgEdge{cfg.exit, EdgeLabel::Fall});
        return {};
      }
      case Stmt::Kind::Throw: {
        uint32_t n = new_node(CfgNode::Kind::Stmt, &s);
        cfg.nodes[n].real = &s;
        attach(preds, n);
        cfg.nodes[n].succs.push_back(CfgEdge{exc_exit(), EdgeLabel::Fall});
        return {};
      }
      case Stmt::Kind::Assign: {
        const auto& a = static_cast<const AssignStmt&>(s);
        if (a.rhs->kind == Expr::Kind::Cond) {
          return lower_valued(*a.rhs, std::move(preds), &s,
                              [&](const Expr& leaf, std::vector<Dangling> p) {
                                uint32_t n = new_node(CfgNode::Kind::Stmt, &s);
                                cfg.nodes[n].stmt_kind = CfgNode::StmtKind::AssignArm;
                                cfg.nodes[n].assign_lhs = a.lhs.get();
                                cfg.nodes[n].value = &leaf;
                                attach(p, n);
                                return std::vector<Dangling>{{n, EdgeLabel::Fall}};
                              });
        }
        break;
      }
      case Stmt::Kind::LocalDecl: {
        const auto& d = static_cast<const LocalDeclStmt&>(s);
        if (d.init && d.init->kind == Expr::Kind::Cond) {
          return lower_valued(*d.init, std::move(preds), &s,
                              [&](const Expr& leaf, std::vector<Dangling> p) {
                                uint32_t n = new_node(CfgNode::Kind::Stmt, &s);
                                cfg.nodes[n].stmt_kind = CfgNode::StmtKind::AssignArm;
                                cfg.nodes[n].decl = &d;
                                cfg.nodes[n].value = &leaf;
                                attach(p, n);
                                return std::vector<Dangling>{{n, EdgeLabel::Fall}};
                              });
        }
        break;
      }
      case Stmt::Kind::ExprStmt: {
        const auto& e = static_cast<const ExprStmt&>(s);
        if (e.expr->kind == Expr::Kind::Cond) {
          return lower_valued(*e.expr, std::move(preds), &s,
                              [&](const Expr& leaf, std::vector<Dangling> p) {
                                uint32_t n = new_node(CfgNode::Kind::Stmt, &s);
                                cfg.nodes[n].stmt_kind = CfgNode::StmtKind::EvalArm;
                                cfg.nodes[n].value = &leaf;
                                attach(p, n);
                                return std::vector<Dangling>{{n, EdgeLabel::Fall}};
                              });
        }
        if (is_cond_shaped(*e.expr)) {
          // Short-circuit operators as statements: branches only.
          CondResult c = lower_cond(*e.expr, std::move(preds), &s);
          std::vector<Dangling> out = std::move(c.t);
          out.insert(out.end(), c.f.begin(), c.f.end());
          return out;
        }
        break;
      }
    }
    uint32_t n = new_node(CfgNode::Kind::Stmt, &s);
    cfg.nodes[n].real = &s;
    attach(preds, n);
    return {{n, EdgeLabel::Fall}};
  }

  void finalize(const Block& body) {
    std::vector<Dangling> tail =
        lower_stmt(body, {{cfg.entry, EdgeLabel::Fall}});
    attach(tail, cfg.exit);
    prune();
    compute_preds_rpo();
  }

  void prune() {
    std::vector<bool> reach(cfg.nodes.size(), false);
    std::vector<uint32_t> work = {cfg.entry};
    reach[cfg.entry] = true;
    while (!work.empty()) {
      uint32_t n = work.back();
      work.pop_back();
      for (const auto& e : cfg.nodes[n].succs) {
        if (!reach[e.node]) {
          reach[e.node] = true;
          work.push_back(e.node);
        }
      }
    }
    reach[cfg.exit] = true;  // exit survives even when unreachable
    std::vector<uint32_t> remap(cfg.nodes.size(), kNoId);
    std::vector<CfgNode> kept;
    for (uint32_t i = 0; i < cfg.nodes.size(); ++i) {
      if (!reach[i]) continue;
      remap[i] = static_cast<uint32_t>(kept.size());
      kept.push_back(std::move(cfg.nodes[i]));
    }
    for (auto& n : kept) {
      std::vector<CfgEdge> succs;
      for (const auto& e : n.succs)
        if (remap[e.node] != kNoId) succs.push_back(CfgEdge{remap[e.node], e.label});
      n.succs = std::move(succs);
    }
    cfg.nodes = std::move(kept);
    cfg.entry = remap[cfg.entry];
    cfg.exit = remap[cfg.exit];
    if (cfg.exc_exit) {
      uint32_t m = remap[*cfg.exc_exit];
      if (m == kNoId) cfg.exc_exit.reset();
      else cfg.exc_exit = m;
    }
    std::unordered_map<const Stmt*, uint32_t> first;
    for (const auto& [stmt, node] : cfg.first_node)
      if (remap[node] != kNoId) first.emplace(stmt, remap[node]);
    cfg.first_node = std::move(first);
  }

  void compute_preds_rpo() {
    cfg.preds.assign(cfg.nodes.size(), {});
    for (uint32_t i = 0; i < cfg.nodes.size(); ++i)
      for (const auto& e : cfg.nodes[i].succs)
        cfg.preds[e.node].push_back(CfgEdge{i, e.label});

    // Iterative postorder DFS, then reverse.
    std::vector<uint8_t> state(cfg.nodes.size(), 0);
    std::vector<std::pair<uint32_t, size_t>> stack = {{cfg.entry, 0}};
    std::vector<uint32_t> post;
    state[cfg.entry] = 1;
    while (!stack.empty()) {
      auto& [n, i] = stack.back();
      if (i < cfg.nodes[n].succs.size()) {
        uint32_t next = cfg.nodes[n].succs[i++].node;
        if (!state[next]) {
          state[next] = 1;
          stack.push_back({next, 0});
        }
      } else {
        post.push_back(n);
        stack.pop_back();
      }
    }
    cfg.rpo.assign(post.rbegin(), post.rend());
  }
};

size_t count_stmts_in(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Block: {
      size_t n = 0;
      for (const auto& st : static_cast<const Block&>(s).stmts)
        n += count_stmts_in(*st);
      return n;
    }
    case Stmt::Kind::If: {
      const auto& i = static_cast<const IfStmt&>(s);
      return 1 + count_stmts_in(*i.then_s) +
             (i.else_s ? count_stmts_in(*i.else_s) : 0);
    }
    case Stmt::Kind::While:
      return 1 + count_stmts_in(*static_cast<const WhileStmt&>(s).body);
    default:
      return 1;
  }
}

}  // namespace

size_t count_statements(const Block& body) {
  size_t n = 0;
  for (const auto& s : body.stmts) n += count_stmts_in(*s);
  return n;
}

Cfg build_cfg(const Block& body) {
  CfgBuilder b;
  b.finalize(body);
  return std::move(b.cfg);
}

}  // namespace minij
