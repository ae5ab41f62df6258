#pragma once

#include <cstdint>
#include <string>

#include "minij/span.hpp"

namespace minij {

enum class Tok {
  Eof,
  Ident,
  IntLit,
  StringLit,
  // keywords
  KwPackage,
  KwClass,
  KwInterface,
  KwExtends,
  KwVoid,
  KwInt,
  KwBoolean,
  KwNew,
  KwThis,
  KwNull,
  KwTrue,
  KwFalse,
  KwIf,
  KwElse,
  KwWhile,
  KwReturn,
  KwThrow,
  KwStatic,
  KwPublic,
  KwPrivate,
  KwFinal,
  KwAbstract,
  // punctuation / operators
  At,
  Dot,
  Comma,
  Semi,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Lt,
  Gt,
  Le,
  Ge,
  Question,
  Colon,
  Assign,
  EqEq,
  NotEq,
  AndAnd,
  OrOr,
  Not,
  Arrow,
};

const char* tok_name(Tok t);

struct Token {
  Tok kind = Tok::Eof;
  Span span;
  std::string text;     // lexeme for identifiers/keywords/operators
  int64_t int_val = 0;  // IntLit
  std::string str_val;  // decoded StringLit
};

/// Comments are preserved as trivia; the expectation harness reads them.
struct Comment {
  Span span;
  std::string text;  // raw, including the leading // or /*
};

}  // namespace minij
