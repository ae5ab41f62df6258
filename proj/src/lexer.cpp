#include "minij/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace minij {

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Eof: return "<eof>";
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::StringLit: return "string literal";
    case Tok::KwPackage: return "'package'";
    case Tok::KwClass: return "'class'";
    case Tok::KwInterface: return "'interface'";
    case Tok::KwExtends: return "'extends'";
    case Tok::KwVoid: return "'void'";
    case Tok::KwInt: return "'int'";
    case Tok::KwBoolean: return "'boolean'";
    case Tok::KwNew: return "'new'";
    case Tok::KwThis: return "'this'";
    case Tok::KwNull: return "'null'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwThrow: return "'throw'";
    case Tok::KwStatic: return "'static'";
    case Tok::KwPublic: return "'public'";
    case Tok::KwPrivate: return "'private'";
    case Tok::KwFinal: return "'final'";
    case Tok::KwAbstract: return "'abstract'";
    case Tok::At: return "'@'";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Question: return "'?'";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Not: return "'!'";
    case Tok::Arrow: return "'->'";
  }
  return "<token>";
}

namespace {

const std::unordered_map<std::string_view, Tok>& keyword_table() {
  static const std::unordered_map<std::string_view, Tok> kw = {
      {"package", Tok::KwPackage}, {"class", Tok::KwClass},
      {"interface", Tok::KwInterface}, {"extends", Tok::KwExtends},
      {"void", Tok::KwVoid}, {"int", Tok::KwInt},
      {"boolean", Tok::KwBoolean}, {"new", Tok::KwNew},
      {"this", Tok::KwThis}, {"null", Tok::KwNull},
      {"true", Tok::KwTrue}, {"false", Tok::KwFalse},
      {"if", Tok::KwIf}, {"else", Tok::KwElse},
      {"while", Tok::KwWhile}, {"return", Tok::KwReturn},
      {"throw", Tok::KwThrow}, {"static", Tok::KwStatic},
      {"public", Tok::KwPublic}, {"private", Tok::KwPrivate},
      {"final", Tok::KwFinal}, {"abstract", Tok::KwAbstract},
  };
  return kw;
}

struct Lexer {
  std::string_view src;
  const std::string& file;
  uint32_t pos = 0;
  uint32_t line = 1;
  uint32_t col = 1;
  LexResult out;

  bool at_end() const { return pos >= src.size(); }
  char peek(uint32_t ahead = 0) const {
    return pos + ahead < src.size() ? src[pos + ahead] : '\0';
  }

  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  Span span_from(uint32_t b, uint32_t bl, uint32_t bc) const {
    return Span{b, pos, bl, bc, line, col};
  }

  void error(Span s, std::string msg) {
    out.errors.push_back(
        Diagnostic{DiagCode::Resolution, file, s, "syntax: " + std::move(msg)});
  }

  void push(Tok kind, uint32_t b, uint32_t bl, uint32_t bc) {
    Token t;
    t.kind = kind;
    t.span = span_from(b, bl, bc);
    t.text = std::string(src.substr(b, pos - b));
    out.tokens.push_back(std::move(t));
  }

  void run() {
    while (!at_end()) {
      uint32_t b = pos, bl = line, bc = col;
      char c = advance();
      switch (c) {
        case ' ':
        case '\t':
        case '\r':
        case '\n':
          break;
        case '@': push(Tok::At, b, bl, bc); break;
        case '.': push(Tok::Dot, b, bl, bc); break;
        case ',': push(Tok::Comma, b, bl, bc); break;
        case ';': push(Tok::Semi, b, bl, bc); break;
        case '(': push(Tok::LParen, b, bl, bc); break;
        case ')': push(Tok::RParen, b, bl, bc); break;
        case '{': push(Tok::LBrace, b, bl, bc); break;
        case '}': push(Tok::RBrace, b, bl, bc); break;
        case '[': push(Tok::LBracket, b, bl, bc); break;
        case ']': push(Tok::RBracket, b, bl, bc); break;
        case '?': push(Tok::Question, b, bl, bc); break;
        case ':': push(Tok::Colon, b, bl, bc); break;
        case '<':
          if (peek() == '=') { advance(); push(Tok::Le, b, bl, bc); }
          else push(Tok::Lt, b, bl, bc);
          break;
        case '>':
          if (peek() == '=') { advance(); push(Tok::Ge, b, bl, bc); }
          else push(Tok::Gt, b, bl, bc);
          break;
        case '=':
          if (peek() == '=') { advance(); push(Tok::EqEq, b, bl, bc); }
          else push(Tok::Assign, b, bl, bc);
          break;
        case '!':
          if (peek() == '=') { advance(); push(Tok::NotEq, b, bl, bc); }
          else push(Tok::Not, b, bl, bc);
          break;
        case '&':
          if (peek() == '&') { advance(); push(Tok::AndAnd, b, bl, bc); }
          else error(span_from(b, bl, bc), "stray '&'");
          break;
        case '|':
          if (peek() == '|') { advance(); push(Tok::OrOr, b, bl, bc); }
          else error(span_from(b, bl, bc), "stray '|'");
          break;
        case '-':
          if (peek() == '>') { advance(); push(Tok::Arrow, b, bl, bc); }
          else if (std::isdigit(static_cast<unsigned char>(peek()))) {
            lex_number(b, bl, bc, true);
          } else {
            error(span_from(b, bl, bc), "stray '-'");
          }
          break;
        case '/':
          if (peek() == '/') {
            while (!at_end() && peek() != '\n') advance();
            out.comments.push_back(
                Comment{span_from(b, bl, bc),
                        std::string(src.substr(b, pos - b))});
          } else if (peek() == '*') {
            advance();
            bool closed = false;
            while (!at_end()) {
              char d = advance();
              if (d == '*' && peek() == '/') {
                advance();
                closed = true;
                break;
              }
            }
            if (!closed) error(span_from(b, bl, bc), "unterminated comment");
            out.comments.push_back(
                Comment{span_from(b, bl, bc),
                        std::string(src.substr(b, pos - b))});
          } else {
            error(span_from(b, bl, bc), "stray '/'");
          }
          break;
        case '"': lex_string(b, bl, bc); break;
        default:
          if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number(b, bl, bc, false);
          } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (std::isalnum(static_cast<unsigned char>(peek())) ||
                   peek() == '_')
              advance();
            std::string_view word = src.substr(b, pos - b);
            auto it = keyword_table().find(word);
            push(it != keyword_table().end() ? it->second : Tok::Ident, b, bl,
                 bc);
          } else {
            error(span_from(b, bl, bc), "unexpected character");
          }
      }
    }
    Token eof;
    eof.kind = Tok::Eof;
    eof.span = Span{pos, pos, line, col, line, col};
    out.tokens.push_back(std::move(eof));
  }

  void lex_number(uint32_t b, uint32_t bl, uint32_t bc, bool negative) {
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    Token t;
    t.kind = Tok::IntLit;
    t.span = span_from(b, bl, bc);
    t.text = std::string(src.substr(b, pos - b));
    t.int_val = std::stoll(t.text);
    (void)negative;  // sign already part of the lexeme
    out.tokens.push_back(std::move(t));
  }

  void lex_string(uint32_t b, uint32_t bl, uint32_t bc) {
    std::string value;
    bool closed = false;
    while (!at_end()) {
      char c = advance();
      if (c == '"') {
        closed = true;
        break;
      }
      if (c == '\n') break;  // strings are single-line
      if (c == '\\' && !at_end()) {
        char e = advance();
        switch (e) {
          case 'n': value.push_back('\n'); break;
          case 't': value.push_back('\t'); break;
          case '\\': value.push_back('\\'); break;
          case '"': value.push_back('"'); break;
          default: value.push_back(e); break;
        }
      } else {
        value.push_back(c);
      }
    }
    if (!closed) {
      error(span_from(b, bl, bc), "unterminated string literal");
      return;
    }
    Token t;
    t.kind = Tok::StringLit;
    t.span = span_from(b, bl, bc);
    t.text = std::string(src.substr(b, pos - b));
    t.str_val = std::move(value);
    out.tokens.push_back(std::move(t));
  }
};

}  // namespace

LexResult lex(std::string_view text, const std::string& file) {
  Lexer lx{text, file, 0, 1, 1, {}};
  lx.run();
  return std::move(lx.out);
}

}  // namespace minij
