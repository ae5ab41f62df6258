#include "minij/parser.hpp"

#include <cassert>
#include <initializer_list>
#include <sstream>

namespace minij {

namespace {

// Panic-mode recovery: statement/member parsers throw, the enclosing loop
// resynchronizes at ';' or '}'.
struct ParseAbort {};

struct Parser {
  const std::vector<Token>& toks;
  const std::string& path;
  std::vector<Diagnostic>& errors;
  size_t pos = 0;

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  const Token& prev() const { return toks[pos > 0 ? pos - 1 : 0]; }
  bool check(Tok k) const { return peek().kind == k; }
  bool at_end() const { return check(Tok::Eof); }

  const Token& advance() {
    const Token& t = toks[pos];
    if (!at_end()) ++pos;
    return t;
  }

  bool match(Tok k) {
    if (!check(k)) return false;
    advance();
    return true;
  }

  void error_at(const Token& t, const std::string& expected) {
    std::ostringstream msg;
    msg << "syntax: expected " << expected << ", found " << tok_name(t.kind);
    if (t.kind == Tok::Ident) msg << " '" << t.text << "'";
    errors.push_back(Diagnostic{DiagCode::Resolution, path, t.span, msg.str()});
  }

  [[noreturn]] void fail(const std::string& expected) {
    error_at(peek(), expected);
    throw ParseAbort{};
  }

  const Token& expect(Tok k, const char* what) {
    if (!check(k)) fail(what);
    return advance();
  }

  void sync_stmt() {
    while (!at_end()) {
      if (match(Tok::Semi)) return;
      if (check(Tok::RBrace)) return;
      advance();
    }
  }

  void sync_member() {
    int depth = 0;
    while (!at_end()) {
      Tok k = peek().kind;
      if (depth == 0 && (k == Tok::Semi)) {
        advance();
        return;
      }
      if (k == Tok::LBrace) ++depth;
      if (k == Tok::RBrace) {
        if (depth == 0) return;
        --depth;
        advance();
        if (depth == 0) return;
        continue;
      }
      advance();
    }
  }

  // --- names / annotations ---------------------------------------------------

  std::vector<std::string> dotted_name(Span* out_span) {
    std::vector<std::string> parts;
    const Token& first = expect(Tok::Ident, "identifier");
    Span sp = first.span;
    parts.push_back(first.text);
    while (check(Tok::Dot) && peek(1).kind == Tok::Ident) {
      advance();
      const Token& t = advance();
      parts.push_back(t.text);
      sp = Span::merge(sp, t.span);
    }
    if (out_span) *out_span = sp;
    return parts;
  }

  std::vector<AnnotationUse> annotations() {
    std::vector<AnnotationUse> anns;
    while (check(Tok::At)) anns.push_back(annotation());
    return anns;
  }

  AnnotationUse annotation() {
    AnnotationUse a;
    const Token& at = expect(Tok::At, "'@'");
    const Token& name = expect(Tok::Ident, "annotation name");
    a.span = Span::merge(at.span, name.span);
    if (name.text == "Nullable") a.kind = AnnKind::Nullable;
    else if (name.text == "NonNull") a.kind = AnnKind::NonNull;
    else if (name.text == "Initializer") a.kind = AnnKind::Initializer;
    else if (name.text == "Contract") a.kind = AnnKind::Contract;
    else if (name.text == "Generated") a.kind = AnnKind::Generated;
    else if (name.text == "SuppressWarnings") a.kind = AnnKind::SuppressWarnings;
    else {
      error_at(name, "a known annotation (@Nullable, @NonNull, @Initializer, "
                     "@Contract, @Generated, @SuppressWarnings)");
      throw ParseAbort{};
    }
    if (match(Tok::LParen)) {
      const Token& arg = expect(Tok::StringLit, "string literal argument");
      a.arg = arg.str_val;
      const Token& rp = expect(Tok::RParen, "')'");
      a.span = Span::merge(a.span, rp.span);
    }
    bool needs_arg =
        a.kind == AnnKind::Contract || a.kind == AnnKind::SuppressWarnings;
    if (needs_arg && !a.arg) {
      error_at(name, "a string argument for this annotation");
      throw ParseAbort{};
    }
    if (a.kind == AnnKind::Contract && a.arg && a.arg->empty()) {
      error_at(name, "a non-empty @Contract string");
      throw ParseAbort{};
    }
    if (!needs_arg && a.arg) {
      error_at(name, "no argument for this annotation");
      throw ParseAbort{};
    }
    return a;
  }

  // --- types -------------------------------------------------------------------

  // Parses a type use.  In `quiet` mode nothing is reported and the token
  // position is left for the caller to restore (used for statement
  // speculation).
  bool try_type_use(TypeUse& out, bool quiet) {
    const Token& t = peek();
    if (t.kind == Tok::KwVoid) {
      advance();
      out.kind = TypeUse::Kind::Void;
      out.span = t.span;
      return true;
    }
    if (t.kind == Tok::KwInt) {
      advance();
      out.kind = TypeUse::Kind::Int;
      out.span = t.span;
      return true;
    }
    if (t.kind == Tok::KwBoolean) {
      advance();
      out.kind = TypeUse::Kind::Boolean;
      out.span = t.span;
      return true;
    }
    if (t.kind != Tok::Ident) {
      if (!quiet) error_at(t, "a type name");
      return false;
    }
    Span sp;
    out.name = dotted_name(&sp);
    out.span = sp;
    out.kind = TypeUse::Kind::Named;
    if (check(Tok::Lt)) {
      advance();
      out.kind = TypeUse::Kind::Generic;
      while (true) {
        TypeUse arg;
        arg.anns = quiet ? parse_arg_anns_quiet() : annotations();
        for (auto& an : arg.anns) an.ignored = true;
        if (!try_type_use(arg, quiet)) {
          if (!quiet) fail("a type argument");
          return false;
        }
        out.args.push_back(std::move(arg));
        if (match(Tok::Comma)) continue;
        if (match(Tok::Gt)) break;
        if (!quiet) fail("',' or '>' in type arguments");
        return false;
      }
      out.span = Span::merge(out.span, prev().span);
    }
    if (check(Tok::LBracket) && peek(1).kind == Tok::RBracket) {
      advance();
      advance();
      if (out.kind == TypeUse::Kind::Generic) {
        if (!quiet) fail("no array of generic type");
        return false;
      }
      out.kind = TypeUse::Kind::Array;
      out.span = Span::merge(out.span, prev().span);
    }
    return true;
  }

  std::vector<AnnotationUse> parse_arg_anns_quiet() {
    std::vector<AnnotationUse> anns;
    while (check(Tok::At) && peek(1).kind == Tok::Ident) {
      AnnotationUse a;
      const Token& at = advance();
      const Token& name = advance();
      a.span = Span::merge(at.span, name.span);
      if (name.text == "Nullable") a.kind = AnnKind::Nullable;
      else if (name.text == "NonNull") a.kind = AnnKind::NonNull;
      else return anns;  // speculation will fail and be retried loudly
      anns.push_back(a);
    }
    return anns;
  }

  TypeUse type_use() {
    TypeUse t;
    if (!try_type_use(t, /*quiet=*/false)) throw ParseAbort{};
    return t;
  }

  // --- expressions ---------------------------------------------------------------

  ExprPtr expression() { return conditional(); }

  ExprPtr conditional() {
    ExprPtr c = or_expr();
    if (match(Tok::Question)) {
      auto node = std::make_unique<CondExpr>();
      node->then_e = conditional();
      expect(Tok::Colon, "':'");
      node->else_e = conditional();
      node->span = Span::merge(c->span, node->else_e->span);
      node->cond = std::move(c);
      return node;
    }
    return c;
  }

  ExprPtr binary_next(int level);

  ExprPtr or_expr() { return binary_level(0); }

  struct OpRow {
    std::initializer_list<std::pair<Tok, BinOp>> ops;
  };

  ExprPtr binary_level(int level) {
    static const std::vector<std::vector<std::pair<Tok, BinOp>>> rows = {
        {{Tok::OrOr, BinOp::Or}},
        {{Tok::AndAnd, BinOp::And}},
        {{Tok::EqEq, BinOp::Eq}, {Tok::NotEq, BinOp::Ne}},
        {{Tok::Lt, BinOp::Lt},
         {Tok::Gt, BinOp::Gt},
         {Tok::Le, BinOp::Le},
         {Tok::Ge, BinOp::Ge}},
    };
    if (level >= static_cast<int>(rows.size())) return unary();
    ExprPtr lhs = binary_level(level + 1);
    while (true) {
      bool matched = false;
      for (auto [tok, op] : rows[level]) {
        if (check(tok)) {
          advance();
          auto node = std::make_unique<BinaryExpr>();
          node->op = op;
          node->rhs = binary_level(level + 1);
          node->span = Span::merge(lhs->span, node->rhs->span);
          node->lhs = std::move(lhs);
          lhs = std::move(node);
          matched = true;
          break;
        }
      }
      if (!matched) break;
    }
    return lhs;
  }

  ExprPtr unary() {
    if (check(Tok::Not)) {
      const Token& t = advance();
      auto node = std::make_unique<UnaryExpr>();
      node->operand = unary();
      node->span = Span::merge(t.span, node->operand->span);
      return node;
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (true) {
      if (check(Tok::Dot) && peek(1).kind == Tok::Ident) {
        advance();
        const Token& name = advance();
        if (check(Tok::LParen)) {
          auto call = std::make_unique<CallExpr>();
          call->name = name.text;
          call->name_span = name.span;
          call->args = arg_list();
          call->span = Span::merge(e->span, prev().span);
          call->recv = std::move(e);
          e = std::move(call);
        } else {
          auto fld = std::make_unique<FieldExpr>();
          fld->name = name.text;
          fld->name_span = name.span;
          fld->span = Span::merge(e->span, name.span);
          fld->recv = std::move(e);
          e = std::move(fld);
        }
      } else {
        break;
      }
    }
    return e;
  }

  std::vector<ExprPtr> arg_list() {
    expect(Tok::LParen, "'('");
    std::vector<ExprPtr> args;
    if (!check(Tok::RParen)) {
      do {
        args.push_back(expression());
      } while (match(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  // A '(' begins either a lambda or a parenthesized expression; decide by
  // scanning for `ident (, ident)* ) ->` or `) ->`.
  bool lparen_starts_lambda() const {
    size_t i = pos + 1;
    if (toks[i].kind == Tok::RParen)
      return i + 1 < toks.size() && toks[i + 1].kind == Tok::Arrow;
    while (i < toks.size() && toks[i].kind == Tok::Ident) {
      ++i;
      if (toks[i].kind == Tok::Comma) {
        ++i;
        continue;
      }
      break;
    }
    return i + 1 < toks.size() && toks[i].kind == Tok::RParen &&
           toks[i + 1].kind == Tok::Arrow;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwNull: {
        advance();
        auto e = std::make_unique<NullExpr>();
        e->span = t.span;
        return e;
      }
      case Tok::IntLit: {
        advance();
        auto e = std::make_unique<IntExpr>();
        e->value = t.int_val;
        e->span = t.span;
        return e;
      }
      case Tok::KwTrue:
      case Tok::KwFalse: {
        advance();
        auto e = std::make_unique<BoolExpr>();
        e->value = t.kind == Tok::KwTrue;
        e->span = t.span;
        return e;
      }
      case Tok::StringLit: {
        advance();
        auto e = std::make_unique<StrExpr>();
        e->value = t.str_val;
        e->span = t.span;
        return e;
      }
      case Tok::KwThis: {
        advance();
        auto e = std::make_unique<ThisExpr>();
        e->span = t.span;
        return e;
      }
      case Tok::KwNew: {
        advance();
        auto e = std::make_unique<NewExpr>();
        e->type_use = type_use();
        if (e->type_use.kind != TypeUse::Kind::Named &&
            e->type_use.kind != TypeUse::Kind::Generic)
          fail("a class type after 'new'");
        e->args = arg_list();
        e->span = Span::merge(t.span, prev().span);
        return e;
      }
      case Tok::Ident: {
        advance();
        if (check(Tok::LParen)) {
          auto call = std::make_unique<CallExpr>();
          call->name = t.text;
          call->name_span = t.span;
          call->args = arg_list();
          call->span = Span::merge(t.span, prev().span);
          return call;
        }
        auto e = std::make_unique<NameExpr>();
        e->name = t.text;
        e->span = t.span;
        return e;
      }
      case Tok::LParen: {
        if (lparen_starts_lambda()) return lambda();
        advance();
        ExprPtr inner = expression();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail("an expression");
    }
  }

  ExprPtr lambda() {
    auto l = std::make_unique<LambdaExpr>();
    const Token& lp = expect(Tok::LParen, "'('");
    if (!check(Tok::RParen)) {
      do {
        const Token& p = expect(Tok::Ident, "lambda parameter name");
        l->params.push_back(LambdaParam{p.text, p.span, kNoId});
      } while (match(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Arrow, "'->'");
    if (check(Tok::LBrace)) {
      l->body_block = block();
      l->span = Span::merge(lp.span, l->body_block->span);
    } else {
      l->body_expr = expression();
      l->span = Span::merge(lp.span, l->body_expr->span);
    }
    return l;
  }

  // --- statements ------------------------------------------------------------------

  std::unique_ptr<Block> block() {
    auto b = std::make_unique<Block>();
    const Token& lb = expect(Tok::LBrace, "'{'");
    while (!check(Tok::RBrace) && !at_end()) {
      try {
        b->stmts.push_back(statement());
      } catch (ParseAbort&) {
        sync_stmt();
      }
    }
    const Token& rb = expect(Tok::RBrace, "'}'");
    b->span = Span::merge(lb.span, rb.span);
    return b;
  }

  StmtPtr statement() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LBrace: return block();
      case Tok::KwIf: return if_stmt();
      case Tok::KwWhile: return while_stmt();
      case Tok::KwReturn: {
        advance();
        auto s = std::make_unique<ReturnStmt>();
        if (!check(Tok::Semi)) s->value = expression();
        const Token& semi = expect(Tok::Semi, "';'");
        s->span = Span::merge(t.span, semi.span);
        return s;
      }
      case Tok::KwThrow: {
        advance();
        auto s = std::make_unique<ThrowStmt>();
        s->value = expression();
        const Token& semi = expect(Tok::Semi, "';'");
        s->span = Span::merge(t.span, semi.span);
        return s;
      }
      case Tok::KwInt:
      case Tok::KwBoolean:
        return local_decl();
      case Tok::Ident: {
        // Speculate: `Type name ...` is a local declaration.
        size_t save = pos;
        TypeUse ty;
        if (try_type_use(ty, /*quiet=*/true) && check(Tok::Ident)) {
          return local_decl_with(std::move(ty), t.span);
        }
        pos = save;
        return expr_or_assign();
      }
      default:
        return expr_or_assign();
    }
  }

  StmtPtr local_decl() {
    const Token& t = peek();
    TypeUse ty = type_use();
    return local_decl_with(std::move(ty), t.span);
  }

  StmtPtr local_decl_with(TypeUse ty, Span start) {
    auto s = std::make_unique<LocalDeclStmt>();
    s->type = std::move(ty);
    const Token& name = expect(Tok::Ident, "variable name");
    s->name = name.text;
    s->name_span = name.span;
    if (match(Tok::Assign)) s->init = expression();
    const Token& semi = expect(Tok::Semi, "';'");
    s->span = Span::merge(start, semi.span);
    if (s->type.kind == TypeUse::Kind::Void) fail("a non-void local type");
    return s;
  }

  StmtPtr expr_or_assign() {
    ExprPtr e = expression();
    if (match(Tok::Assign)) {
      auto s = std::make_unique<AssignStmt>();
      s->rhs = expression();
      const Token& semi = expect(Tok::Semi, "';'");
      s->span = Span::merge(e->span, semi.span);
      if (e->kind != Expr::Kind::Name && e->kind != Expr::Kind::Field) {
        errors.push_back(Diagnostic{DiagCode::Resolution, path, e->span,
                                    "syntax: assignment target must be a "
                                    "variable or field"});
      }
      s->lhs = std::move(e);
      return s;
    }
    auto s = std::make_unique<ExprStmt>();
    const Token& semi = expect(Tok::Semi, "';'");
    s->span = Span::merge(e->span, semi.span);
    s->expr = std::move(e);
    return s;
  }

  StmtPtr if_stmt() {
    const Token& t = expect(Tok::KwIf, "'if'");
    expect(Tok::LParen, "'('");
    auto s = std::make_unique<IfStmt>();
    s->cond = expression();
    expect(Tok::RParen, "')'");
    s->then_s = statement();
    Span end = s->then_s->span;
    if (match(Tok::KwElse)) {
      s->else_s = statement();
      end = s->else_s->span;
    }
    s->span = Span::merge(t.span, end);
    return s;
  }

  StmtPtr while_stmt() {
    const Token& t = expect(Tok::KwWhile, "'while'");
    expect(Tok::LParen, "'('");
    auto s = std::make_unique<WhileStmt>();
    s->cond = expression();
    expect(Tok::RParen, "')'");
    s->body = statement();
    s->span = Span::merge(t.span, s->body->span);
    return s;
  }

  // --- declarations ------------------------------------------------------------------

  Modifiers modifiers() {
    Modifiers m;
    while (true) {
      if (match(Tok::KwPublic)) m.is_public = true;
      else if (match(Tok::KwPrivate)) m.is_private = true;
      else if (match(Tok::KwFinal)) m.is_final = true;
      else if (match(Tok::KwStatic)) m.is_static = true;
      else if (check(Tok::KwAbstract)) { advance(); m.is_abstract = true; }
      else break;
    }
    return m;
  }

  // Annotations and modifiers may interleave, as in `public @Nullable Object`.
  void anns_and_mods(std::vector<AnnotationUse>& anns, Modifiers& mods) {
    while (true) {
      if (check(Tok::At)) {
        anns.push_back(annotation());
      } else if (match(Tok::KwPublic)) mods.is_public = true;
      else if (match(Tok::KwPrivate)) mods.is_private = true;
      else if (match(Tok::KwFinal)) mods.is_final = true;
      else if (check(Tok::KwStatic) && peek(1).kind != Tok::LBrace)
        { advance(); mods.is_static = true; }
      else if (check(Tok::KwAbstract)) { advance(); mods.is_abstract = true; }
      else break;
    }
  }

  std::unique_ptr<ClassDecl> class_decl() {
    auto cls = std::make_unique<ClassDecl>();
    cls->anns = annotations();
    const Token& start = peek();
    Modifiers mods = modifiers();
    if (mods.is_public || mods.is_private || mods.is_static)
      error_at(start, "only 'final' or 'abstract' on a class");
    cls->is_final = mods.is_final;
    cls->is_abstract = mods.is_abstract;
    if (match(Tok::KwInterface)) cls->is_interface = true;
    else expect(Tok::KwClass, "'class' or 'interface'");
    const Token& name = expect(Tok::Ident, "class name");
    cls->name = name.text;
    cls->name_span = name.span;
    if (match(Tok::Lt)) {
      do {
        cls->type_params.push_back(expect(Tok::Ident, "type parameter").text);
      } while (match(Tok::Comma));
      expect(Tok::Gt, "'>'");
    }
    if (match(Tok::KwExtends)) {
      cls->super_name = dotted_name(&cls->super_span);
    }
    expect(Tok::LBrace, "'{'");
    while (!check(Tok::RBrace) && !at_end()) {
      try {
        member(*cls);
      } catch (ParseAbort&) {
        sync_member();
      }
    }
    const Token& rb = expect(Tok::RBrace, "'}'");
    cls->span = Span::merge(start.span, rb.span);
    return cls;
  }

  void member(ClassDecl& cls) {
    const Token& start = peek();
    // Initializer blocks.
    if (check(Tok::LBrace)) {
      if (cls.is_interface) fail("no initializer blocks in an interface");
      auto m = std::make_unique<MethodDecl>();
      m->kind = MethodDecl::Kind::InitBlock;
      m->name = "<init-block>";
      m->body = block();
      m->span = m->body->span;
      cls.init_blocks.push_back(std::move(m));
      return;
    }
    if (check(Tok::KwStatic) && peek(1).kind == Tok::LBrace) {
      advance();
      auto m = std::make_unique<MethodDecl>();
      m->kind = MethodDecl::Kind::StaticInitBlock;
      m->mods.is_static = true;
      m->name = "<static-init-block>";
      m->body = block();
      m->span = Span::merge(start.span, m->body->span);
      cls.static_init_blocks.push_back(std::move(m));
      return;
    }

    std::vector<AnnotationUse> anns;
    Modifiers mods;
    anns_and_mods(anns, mods);
    if (mods.is_abstract) error_at(start, "no 'abstract' members");

    // Constructor: `Name (` with Name matching the class.
    if (check(Tok::Ident) && peek().text == cls.name &&
        peek(1).kind == Tok::LParen) {
      if (cls.is_interface) fail("no constructors in an interface");
      auto m = std::make_unique<MethodDecl>();
      m->kind = MethodDecl::Kind::Ctor;
      m->anns = std::move(anns);
      m->mods = mods;
      const Token& name = advance();
      m->name = name.text;
      m->name_span = name.span;
      m->params = param_list();
      m->body = block();
      m->span = Span::merge(start.span, m->body->span);
      check_param_names(*m);
      cls.ctors.push_back(std::move(m));
      return;
    }

    TypeUse ty = type_use();
    const Token& name = expect(Tok::Ident, "member name");
    if (check(Tok::LParen)) {
      auto m = std::make_unique<MethodDecl>();
      m->kind = MethodDecl::Kind::Method;
      m->anns = std::move(anns);
      m->mods = mods;
      m->return_type = std::move(ty);
      m->name = name.text;
      m->name_span = name.span;
      m->params = param_list();
      if (cls.is_interface) {
        const Token& semi = expect(Tok::Semi, "';' after interface method");
        m->span = Span::merge(start.span, semi.span);
      } else {
        m->body = block();
        m->span = Span::merge(start.span, m->body->span);
      }
      check_param_names(*m);
      cls.methods.push_back(std::move(m));
      return;
    }

    // Field.
    if (cls.is_interface) fail("no fields in an interface");
    if (ty.kind == TypeUse::Kind::Void) fail("a non-void field type");
    FieldDecl f;
    f.anns = std::move(anns);
    f.mods = mods;
    f.type = std::move(ty);
    f.name = name.text;
    f.name_span = name.span;
    if (match(Tok::Assign)) f.init = expression();
    const Token& semi = expect(Tok::Semi, "';'");
    f.span = Span::merge(start.span, semi.span);
    cls.fields.push_back(std::move(f));
  }

  std::vector<ParamDecl> param_list() {
    expect(Tok::LParen, "'('");
    std::vector<ParamDecl> params;
    if (!check(Tok::RParen)) {
      do {
        ParamDecl p;
        p.anns = annotations();
        const Token& start = peek();
        p.type = type_use();
        if (p.type.kind == TypeUse::Kind::Void) fail("a non-void parameter");
        const Token& name = expect(Tok::Ident, "parameter name");
        p.name = name.text;
        p.span = Span::merge(start.span, name.span);
        params.push_back(std::move(p));
      } while (match(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    return params;
  }

  void check_param_names(const MethodDecl& m) {
    for (size_t i = 0; i < m.params.size(); ++i)
      for (size_t j = i + 1; j < m.params.size(); ++j)
        if (m.params[i].name == m.params[j].name)
          errors.push_back(Diagnostic{
              DiagCode::Resolution, path, m.params[j].span,
              "syntax: duplicate parameter name '" + m.params[j].name + "'"});
  }

  std::unique_ptr<SourceFile> file() {
    auto f = std::make_unique<SourceFile>();
    f->path = path;
    try {
      expect(Tok::KwPackage, "'package'");
      f->package_name = dotted_name(&f->package_span);
      expect(Tok::Semi, "';'");
    } catch (ParseAbort&) {
      sync_stmt();
    }
    while (!at_end()) {
      try {
        f->classes.push_back(class_decl());
      } catch (ParseAbort&) {
        sync_member();
        // Skip stray tokens so the loop always progresses.
        if (!at_end() && !check(Tok::At) && !check(Tok::KwClass) &&
            !check(Tok::KwInterface) && !check(Tok::KwFinal) &&
            !check(Tok::KwAbstract))
          advance();
      }
    }
    return f;
  }
};

}  // namespace

ParseResult parse_file(std::string_view text, const std::string& path) {
  ParseResult result;
  LexResult lx = lex(text, path);
  result.errors = std::move(lx.errors);
  Parser p{lx.tokens, path, result.errors};
  result.file = p.file();
  result.file->text = std::string(text);
  result.file->comments = std::move(lx.comments);
  return result;
}

}  // namespace minij
