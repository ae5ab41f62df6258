#include "minij/ast.hpp"

#include <sstream>

namespace minij {

namespace {

const char* ann_name(AnnKind k) {
  switch (k) {
    case AnnKind::Nullable: return "Nullable";
    case AnnKind::NonNull: return "NonNull";
    case AnnKind::Initializer: return "Initializer";
    case AnnKind::Contract: return "Contract";
    case AnnKind::Generated: return "Generated";
    case AnnKind::SuppressWarnings: return "SuppressWarnings";
  }
  return "?";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

void print_anns(std::ostringstream& os, const std::vector<AnnotationUse>& anns,
                const char* sep) {
  for (const auto& a : anns) {
    os << "@" << ann_name(a.kind);
    if (a.arg) os << "(" << quote(*a.arg) << ")";
    os << sep;
  }
}

// Binding strengths for parenthesization, loosest to tightest.
int prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Cond: return 1;
    case Expr::Kind::Binary:
      switch (as<BinaryExpr>(e).op) {
        case BinOp::Or: return 2;
        case BinOp::And: return 3;
        case BinOp::Eq:
        case BinOp::Ne: return 4;
        default: return 5;  // relational
      }
    case Expr::Kind::Unary: return 6;
    case Expr::Kind::Lambda: return 0;
    default: return 7;
  }
}

void emit_expr(std::ostringstream& os, const Expr& e);

void emit_child(std::ostringstream& os, const Expr& child, int min_prec) {
  if (prec(child) < min_prec) {
    os << "(";
    emit_expr(os, child);
    os << ")";
  } else {
    emit_expr(os, child);
  }
}

void emit_expr(std::ostringstream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Null: os << "null"; break;
    case Expr::Kind::Int: os << as<IntExpr>(e).value; break;
    case Expr::Kind::Bool: os << (as<BoolExpr>(e).value ? "true" : "false"); break;
    case Expr::Kind::Str: os << quote(as<StrExpr>(e).value); break;
    case Expr::Kind::Name: os << as<NameExpr>(e).name; break;
    case Expr::Kind::This: os << "this"; break;
    case Expr::Kind::Field: {
      const auto& f = as<FieldExpr>(e);
      emit_child(os, *f.recv, 7);
      os << "." << f.name;
      break;
    }
    case Expr::Kind::Call: {
      const auto& c = as<CallExpr>(e);
      if (c.recv) {
        emit_child(os, *c.recv, 7);
        os << ".";
      }
      os << c.name << "(";
      for (size_t i = 0; i < c.args.size(); ++i) {
        if (i) os << ", ";
        emit_expr(os, *c.args[i]);
      }
      os << ")";
      break;
    }
    case Expr::Kind::New: {
      const auto& n = as<NewExpr>(e);
      os << "new " << print_type_use(n.type_use) << "(";
      for (size_t i = 0; i < n.args.size(); ++i) {
        if (i) os << ", ";
        emit_expr(os, *n.args[i]);
      }
      os << ")";
      break;
    }
    case Expr::Kind::Lambda: {
      const auto& l = as<LambdaExpr>(e);
      os << "(";
      for (size_t i = 0; i < l.params.size(); ++i) {
        if (i) os << ", ";
        os << l.params[i].name;
      }
      os << ") -> ";
      if (l.body_expr) {
        emit_expr(os, *l.body_expr);
      } else {
        os << print_stmt(*l.body_block, 0);
      }
      break;
    }
    case Expr::Kind::Cond: {
      const auto& c = as<CondExpr>(e);
      emit_child(os, *c.cond, 2);
      os << " ? ";
      emit_child(os, *c.then_e, 1);
      os << " : ";
      emit_child(os, *c.else_e, 1);
      break;
    }
    case Expr::Kind::Binary: {
      const auto& b = as<BinaryExpr>(e);
      int p = prec(e);
      const char* op = "";
      switch (b.op) {
        case BinOp::Eq: op = "=="; break;
        case BinOp::Ne: op = "!="; break;
        case BinOp::And: op = "&&"; break;
        case BinOp::Or: op = "||"; break;
        case BinOp::Lt: op = "<"; break;
        case BinOp::Gt: op = ">"; break;
        case BinOp::Le: op = "<="; break;
        case BinOp::Ge: op = ">="; break;
      }
      emit_child(os, *b.lhs, p);
      os << " " << op << " ";
      emit_child(os, *b.rhs, p + 1);
      break;
    }
    case Expr::Kind::Unary: {
      os << "!";
      emit_child(os, *as<UnaryExpr>(e).operand, 6);
      break;
    }
  }
}

std::string indent_str(int n) { return std::string(static_cast<size_t>(n) * 2, ' '); }

void emit_stmt(std::ostringstream& os, const Stmt& s, int indent);

void emit_block(std::ostringstream& os, const Block& b, int indent) {
  os << "{\n";
  for (const auto& st : b.stmts) emit_stmt(os, *st, indent + 1);
  os << indent_str(indent) << "}";
}

void emit_stmt(std::ostringstream& os, const Stmt& s, int indent) {
  os << indent_str(indent);
  switch (s.kind) {
    case Stmt::Kind::Block:
      emit_block(os, as<Block>(s), indent);
      os << "\n";
      break;
    case Stmt::Kind::LocalDecl: {
      const auto& d = as<LocalDeclStmt>(s);
      os << print_type_use(d.type) << " " << d.name;
      if (d.init) {
        os << " = ";
        emit_expr(os, *d.init);
      }
      os << ";\n";
      break;
    }
    case Stmt::Kind::Assign: {
      const auto& a = as<AssignStmt>(s);
      emit_expr(os, *a.lhs);
      os << " = ";
      emit_expr(os, *a.rhs);
      os << ";\n";
      break;
    }
    case Stmt::Kind::ExprStmt:
      emit_expr(os, *as<ExprStmt>(s).expr);
      os << ";\n";
      break;
    case Stmt::Kind::If: {
      const auto& i = as<IfStmt>(s);
      os << "if (";
      emit_expr(os, *i.cond);
      os << ") ";
      if (i.then_s->kind == Stmt::Kind::Block) {
        emit_block(os, as<Block>(*i.then_s), indent);
      } else {
        os << "\n";
        emit_stmt(os, *i.then_s, indent + 1);
        os << indent_str(indent);
      }
      if (i.else_s) {
        os << " else ";
        if (i.else_s->kind == Stmt::Kind::Block) {
          emit_block(os, as<Block>(*i.else_s), indent);
        } else {
          os << "\n";
          emit_stmt(os, *i.else_s, indent + 1);
          os << indent_str(indent);
        }
      }
      os << "\n";
      break;
    }
    case Stmt::Kind::While: {
      const auto& w = as<WhileStmt>(s);
      os << "while (";
      emit_expr(os, *w.cond);
      os << ") ";
      if (w.body->kind == Stmt::Kind::Block) {
        emit_block(os, as<Block>(*w.body), indent);
        os << "\n";
      } else {
        os << "\n";
        emit_stmt(os, *w.body, indent + 1);
      }
      break;
    }
    case Stmt::Kind::Return: {
      const auto& r = as<ReturnStmt>(s);
      os << "return";
      if (r.value) {
        os << " ";
        emit_expr(os, *r.value);
      }
      os << ";\n";
      break;
    }
    case Stmt::Kind::Throw: {
      os << "throw ";
      emit_expr(os, *as<ThrowStmt>(s).value);
      os << ";\n";
      break;
    }
  }
}

void emit_method(std::ostringstream& os, const MethodDecl& m, int indent) {
  os << indent_str(indent);
  if (m.kind == MethodDecl::Kind::InitBlock) {
    emit_block(os, *m.body, indent);
    os << "\n";
    return;
  }
  if (m.kind == MethodDecl::Kind::StaticInitBlock) {
    os << "static ";
    emit_block(os, *m.body, indent);
    os << "\n";
    return;
  }
  print_anns(os, m.anns, " ");
  if (m.mods.is_public) os << "public ";
  if (m.mods.is_private) os << "private ";
  if (m.mods.is_static) os << "static ";
  if (m.mods.is_final) os << "final ";
  if (m.kind == MethodDecl::Kind::Method)
    os << print_type_use(m.return_type) << " ";
  os << m.name << "(";
  for (size_t i = 0; i < m.params.size(); ++i) {
    if (i) os << ", ";
    print_anns(os, m.params[i].anns, " ");
    os << print_type_use(m.params[i].type) << " " << m.params[i].name;
  }
  os << ")";
  if (m.body) {
    os << " ";
    emit_block(os, *m.body, indent);
    os << "\n";
  } else {
    os << ";\n";
  }
}

}  // namespace

std::string print_type_use(const TypeUse& t) {
  switch (t.kind) {
    case TypeUse::Kind::Infer: return "<infer>";
    case TypeUse::Kind::Void: return "void";
    case TypeUse::Kind::Int: return "int";
    case TypeUse::Kind::Boolean: return "boolean";
    case TypeUse::Kind::Named:
    case TypeUse::Kind::Array:
    case TypeUse::Kind::Generic: {
      std::string s;
      for (size_t i = 0; i < t.name.size(); ++i) {
        if (i) s.push_back('.');
        s += t.name[i];
      }
      if (t.kind == TypeUse::Kind::Generic) {
        s += "<";
        for (size_t i = 0; i < t.args.size(); ++i) {
          if (i) s += ", ";
          std::ostringstream os;
          print_anns(os, t.args[i].anns, " ");
          s += os.str();
          s += print_type_use(t.args[i]);
        }
        s += ">";
      }
      if (t.kind == TypeUse::Kind::Array) s += "[]";
      return s;
    }
  }
  return "?";
}

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  emit_expr(os, e);
  return os.str();
}

std::string print_stmt(const Stmt& s, int indent) {
  std::ostringstream os;
  if (s.kind == Stmt::Kind::Block) {
    emit_block(os, as<Block>(s), indent);
  } else {
    emit_stmt(os, s, indent);
  }
  return os.str();
}

std::string print_file(const SourceFile& f) {
  std::ostringstream os;
  os << "package " << f.package_str() << ";\n\n";
  for (const auto& cls : f.classes) {
    print_anns(os, cls->anns, "\n");
    if (cls->is_final) os << "final ";
    if (cls->is_abstract) os << "abstract ";
    os << (cls->is_interface ? "interface " : "class ") << cls->name;
    if (!cls->type_params.empty()) {
      os << "<";
      for (size_t i = 0; i < cls->type_params.size(); ++i) {
        if (i) os << ", ";
        os << cls->type_params[i];
      }
      os << ">";
    }
    if (!cls->super_name.empty()) {
      os << " extends ";
      for (size_t i = 0; i < cls->super_name.size(); ++i) {
        if (i) os << ".";
        os << cls->super_name[i];
      }
    }
    os << " {\n";
    for (const auto& fd : cls->fields) {
      os << indent_str(1);
      print_anns(os, fd.anns, " ");
      if (fd.mods.is_public) os << "public ";
      if (fd.mods.is_private) os << "private ";
      if (fd.mods.is_static) os << "static ";
      if (fd.mods.is_final) os << "final ";
      os << print_type_use(fd.type) << " " << fd.name;
      if (fd.init) {
        os << " = ";
        emit_expr(os, *fd.init);
      }
      os << ";\n";
    }
    for (const auto& b : cls->init_blocks) emit_method(os, *b, 1);
    for (const auto& b : cls->static_init_blocks) emit_method(os, *b, 1);
    for (const auto& c : cls->ctors) emit_method(os, *c, 1);
    for (const auto& m : cls->methods) emit_method(os, *m, 1);
    os << "}\n\n";
  }
  return os.str();
}

}  // namespace minij
