#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "minij/ast.hpp"

namespace minij {

// Per-method control-flow graph.  One statement per node (no basic-block
// fusion); `if`/`while`/`&&`/`||`/`?:` and `!` in condition position are
// desugared into chains of single-condition Branch nodes.  A `?:` in the
// value position of a return/assignment/declaration/expression statement is
// split into per-arm synthetic nodes so each arm evaluates under its edge's
// refined store.

enum class EdgeLabel : uint8_t { Fall, True, False };

struct CfgEdge {
  uint32_t node = 0;
  EdgeLabel label = EdgeLabel::Fall;
};

struct CfgNode {
  enum class Kind : uint8_t { Entry, Exit, ExcExit, Stmt, Branch };
  enum class StmtKind : uint8_t { Real, AssignArm, ReturnArm, EvalArm };

  Kind kind = Kind::Stmt;
  StmtKind stmt_kind = StmtKind::Real;
  const Stmt* real = nullptr;              // Real: the original statement
  const Expr* assign_lhs = nullptr;        // AssignArm: target lvalue
  const LocalDeclStmt* decl = nullptr;     // AssignArm for declarations
  const Expr* value = nullptr;             // arm value expression
  const Expr* cond = nullptr;              // Branch: leaf condition
  const Stmt* origin = nullptr;            // owning source statement
  std::vector<CfgEdge> succs;
};

struct Cfg {
  std::vector<CfgNode> nodes;
  uint32_t entry = 0;
  uint32_t exit = 1;
  std::optional<uint32_t> exc_exit;
  std::vector<std::vector<CfgEdge>> preds;  // filled by finalize
  std::vector<uint32_t> rpo;                // reverse postorder from entry
  // First node lowered for each source statement; the statement's pre-store
  // is that node's input store.
  std::unordered_map<const Stmt*, uint32_t> first_node;

  bool has_normal_exit() const { return !preds[exit].empty(); }
};

/// Builds, prunes unreachable nodes (entry/exit are kept), computes preds and
/// reverse postorder.
Cfg build_cfg(const Block& body);

/// Statement count of the straight-line node-count law (k statements ->
/// k + 2 nodes); used by tests as an independent oracle.
size_t count_statements(const Block& body);

}  // namespace minij
