#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "minij/diag.hpp"
#include "minij/token.hpp"

namespace minij {

struct LexResult {
  std::vector<Token> tokens;  // terminated by an Eof token
  std::vector<Comment> comments;
  std::vector<Diagnostic> errors;
};

LexResult lex(std::string_view text, const std::string& file);

}  // namespace minij
