#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minij/span.hpp"
#include "minij/token.hpp"

namespace minij {

// ---------------------------------------------------------------------------
// MiniJ abstract syntax.
//
// A file is `package a.b; decl*` where each decl is a class or interface.
// Statements: local declaration, assignment, expression statement, if/else,
// while, return, throw, block.  Expressions: null/int/bool/string literals,
// name, this, field access, call, new, lambda, ?:, == != && || ! < > <= >=,
// parenthesized (parens are not kept as nodes).
//
// Nodes own their children via unique_ptr.  Name resolution (program.cpp)
// fills in the `res_*` fields after parsing; the parser leaves them empty.
// ---------------------------------------------------------------------------

struct Expr;
struct Stmt;
struct Block;
struct ClassDecl;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

constexpr uint32_t kNoId = 0xffffffffu;

// --- types as written in source ---------------------------------------------

enum class AnnKind { Nullable, NonNull, Initializer, Contract, Generated, SuppressWarnings };

struct AnnotationUse {
  AnnKind kind;
  std::optional<std::string> arg;  // Contract / SuppressWarnings payload
  bool ignored = false;            // true for annotations on generic type arguments
  Span span;
};

struct TypeUse {
  enum class Kind { Infer, Void, Int, Boolean, Named, Array, Generic };
  Kind kind = Kind::Infer;
  std::vector<std::string> name;   // dotted; Named/Array/Generic
  std::vector<TypeUse> args;       // Generic arguments
  std::vector<AnnotationUse> anns; // only populated on generic arguments
  Span span;
};

// --- resolved references (filled during program building) -------------------

struct FieldRef {
  uint32_t cls = kNoId;
  uint32_t index = kNoId;
  bool valid() const { return cls != kNoId; }
};

struct MethodRef {
  uint32_t cls = kNoId;
  uint32_t index = kNoId;  // index into ClassInfo::methods (ctors included)
  bool valid() const { return cls != kNoId; }
};

/// Static type of an expression or resolved type use.
struct TypeRef {
  enum class Kind { Unknown, Error, Void, Int, Boolean, Null, Class, Array, TypeVar };
  Kind kind = Kind::Unknown;
  uint32_t cls = kNoId;           // Class: the class; Array: element class
  std::vector<TypeRef> args;      // Class: generic arguments when written
  uint32_t tv_owner = kNoId;      // TypeVar: declaring class
  uint32_t tv_index = 0;          // TypeVar: position in owner's params

  bool is_reference() const {
    return kind == Kind::Class || kind == Kind::Array || kind == Kind::Null ||
           kind == Kind::TypeVar || kind == Kind::Unknown;
  }
  static TypeRef class_of(uint32_t c) {
    TypeRef t;
    t.kind = Kind::Class;
    t.cls = c;
    return t;
  }
  static TypeRef of(Kind k) {
    TypeRef t;
    t.kind = k;
    return t;
  }
};

// --- expressions -------------------------------------------------------------

enum class BinOp { Eq, Ne, And, Or, Lt, Gt, Le, Ge };

struct Expr {
  enum class Kind {
    Null, Int, Bool, Str, Name, This, Field, Call, New, Lambda, Cond, Binary, Unary,
  };
  Kind kind;
  Span span;
  TypeRef type;  // resolved static type

  explicit Expr(Kind k) : kind(k) {}
  virtual ~Expr() = default;
};

struct NullExpr : Expr { NullExpr() : Expr(Kind::Null) {} };
struct IntExpr : Expr {
  int64_t value = 0;
  IntExpr() : Expr(Kind::Int) {}
};
struct BoolExpr : Expr {
  bool value = false;
  BoolExpr() : Expr(Kind::Bool) {}
};
struct StrExpr : Expr {
  std::string value;
  StrExpr() : Expr(Kind::Str) {}
};
struct ThisExpr : Expr { ThisExpr() : Expr(Kind::This) {} };

struct NameExpr : Expr {
  std::string name;
  // Resolution: a bare name is a local/param, an implicit this-field, or part
  // of a qualified class name (then the parent Field/Call node owns it).
  enum class Res { Unresolved, Local, ImplicitField, ClassName, PackagePrefix, Error };
  Res res = Res::Unresolved;
  uint32_t res_symbol = kNoId;  // Local
  FieldRef res_field;           // ImplicitField
  uint32_t res_class = kNoId;   // ClassName
  NameExpr() : Expr(Kind::Name) {}
};

struct FieldExpr : Expr {
  ExprPtr recv;
  std::string name;
  Span name_span;
  enum class Res { Unresolved, Instance, Static, ClassName, PackagePrefix, Opaque, Error };
  Res res = Res::Unresolved;
  FieldRef res_field;          // Instance/Static
  uint32_t res_class = kNoId;  // ClassName (the named class itself)
  FieldExpr() : Expr(Kind::Field) {}
};

struct LambdaExpr;

struct CallExpr : Expr {
  ExprPtr recv;  // null => unqualified call on this / own class
  std::string name;
  Span name_span;
  std::vector<ExprPtr> args;
  enum class Res { Unresolved, Instance, Static, Opaque, Error };
  Res res = Res::Unresolved;
  MethodRef res_method;
  bool recv_is_class = false;  // receiver expression names a class (static call)
  CallExpr() : Expr(Kind::Call) {}
};

struct NewExpr : Expr {
  TypeUse type_use;
  std::vector<ExprPtr> args;
  MethodRef res_ctor;  // invalid when the class has no declared ctors
  uint32_t res_class = kNoId;
  NewExpr() : Expr(Kind::New) {}
};

struct LambdaParam {
  std::string name;
  Span span;
  uint32_t symbol = kNoId;
};

struct LambdaExpr : Expr {
  std::vector<LambdaParam> params;
  ExprPtr body_expr;             // exactly one of body_expr/body_block is set
  std::unique_ptr<Block> body_block;
  // Resolution: functional-interface target.
  uint32_t res_iface = kNoId;
  MethodRef res_method;              // the single abstract method
  std::vector<TypeRef> param_types;  // after substitution
  TypeRef return_type;
  // Stream-handler shape info: the filter lambda feeding this map lambda via
  // an unbroken filter(.map)* chain, plus the receiver class of every link.
  const LambdaExpr* stream_source = nullptr;
  std::vector<std::string> stream_recv_classes;
  LambdaExpr() : Expr(Kind::Lambda) {}
};

struct CondExpr : Expr {
  ExprPtr cond, then_e, else_e;
  CondExpr() : Expr(Kind::Cond) {}
};

struct BinaryExpr : Expr {
  BinOp op = BinOp::Eq;
  ExprPtr lhs, rhs;
  BinaryExpr() : Expr(Kind::Binary) {}
};

struct UnaryExpr : Expr {
  ExprPtr operand;  // only '!'
  UnaryExpr() : Expr(Kind::Unary) {}
};

// --- statements --------------------------------------------------------------

struct Stmt {
  enum class Kind { Block, LocalDecl, Assign, ExprStmt, If, While, Return, Throw };
  Kind kind;
  Span span;
  explicit Stmt(Kind k) : kind(k) {}
  virtual ~Stmt() = default;
};

struct Block : Stmt {
  std::vector<StmtPtr> stmts;
  Block() : Stmt(Kind::Block) {}
};

struct LocalDeclStmt : Stmt {
  TypeUse type;
  std::string name;
  Span name_span;
  ExprPtr init;  // optional
  uint32_t symbol = kNoId;
  LocalDeclStmt() : Stmt(Kind::LocalDecl) {}
};

struct AssignStmt : Stmt {
  ExprPtr lhs, rhs;
  AssignStmt() : Stmt(Kind::Assign) {}
};

struct ExprStmt : Stmt {
  ExprPtr expr;
  ExprStmt() : Stmt(Kind::ExprStmt) {}
};

struct IfStmt : Stmt {
  ExprPtr cond;
  StmtPtr then_s;
  StmtPtr else_s;  // optional
  IfStmt() : Stmt(Kind::If) {}
};

struct WhileStmt : Stmt {
  ExprPtr cond;
  StmtPtr body;
  WhileStmt() : Stmt(Kind::While) {}
};

struct ReturnStmt : Stmt {
  ExprPtr value;  // optional
  ReturnStmt() : Stmt(Kind::Return) {}
};

struct ThrowStmt : Stmt {
  ExprPtr value;
  ThrowStmt() : Stmt(Kind::Throw) {}
};

// --- declarations ------------------------------------------------------------

struct Modifiers {
  bool is_public = false;
  bool is_private = false;
  bool is_final = false;
  bool is_static = false;
  bool is_abstract = false;  // classes only
};

struct ParamDecl {
  std::vector<AnnotationUse> anns;
  TypeUse type;
  std::string name;
  Span span;
  uint32_t symbol = kNoId;
};

struct FieldDecl {
  std::vector<AnnotationUse> anns;
  Modifiers mods;
  TypeUse type;
  std::string name;
  Span name_span;
  ExprPtr init;  // optional
  Span span;
};

/// Constructors and instance/static initializer blocks reuse MethodDecl so
/// every analyzable body has one shape.
struct MethodDecl {
  enum class Kind { Method, Ctor, InitBlock, StaticInitBlock };
  Kind kind = Kind::Method;
  std::vector<AnnotationUse> anns;
  Modifiers mods;
  TypeUse return_type;  // Kind::Void for void; Infer for ctors/blocks
  std::string name;
  Span name_span;
  std::vector<ParamDecl> params;
  std::unique_ptr<Block> body;  // null for interface methods
  Span span;

  // Per-body symbol table (params, locals, lambda params), filled by
  // resolution.  Lambdas nested in this body share the table.
  struct LocalSym {
    std::string name;
    TypeRef type;
    bool is_param = false;
    Span span;
  };
  std::vector<LocalSym> symbols;
};

struct ClassDecl {
  std::vector<AnnotationUse> anns;
  bool is_interface = false;
  bool is_final = false;
  bool is_abstract = false;
  std::string name;
  Span name_span;
  std::vector<std::string> type_params;
  std::vector<std::string> super_name;  // dotted; empty = none written
  Span super_span;
  std::vector<FieldDecl> fields;
  std::vector<std::unique_ptr<MethodDecl>> ctors;
  std::vector<std::unique_ptr<MethodDecl>> methods;
  std::vector<std::unique_ptr<MethodDecl>> init_blocks;
  std::vector<std::unique_ptr<MethodDecl>> static_init_blocks;
  Span span;
};

struct SourceFile {
  std::string path;
  std::string text;
  std::vector<std::string> package_name;
  Span package_span;
  std::vector<std::unique_ptr<ClassDecl>> classes;
  std::vector<Comment> comments;

  std::string package_str() const {
    std::string s;
    for (size_t i = 0; i < package_name.size(); ++i) {
      if (i) s.push_back('.');
      s += package_name[i];
    }
    return s;
  }
};

// Canonical pretty-printer.  parse(print(parse(s))) is structurally identical
// to parse(s); tests compare printed forms.
std::string print_file(const SourceFile& f);
std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s, int indent = 0);
std::string print_type_use(const TypeUse& t);

template <typename T>
const T& as(const Expr& e) {
  return static_cast<const T&>(e);
}
template <typename T>
const T& as(const Stmt& s) {
  return static_cast<const T&>(s);
}

}  // namespace minij
