#pragma once

#include <memory>
#include <string>
#include <vector>

#include "minij/ast.hpp"
#include "minij/diag.hpp"
#include "minij/lexer.hpp"

namespace minij {

struct ParseResult {
  std::unique_ptr<SourceFile> file;  // always non-null; may be partial
  std::vector<Diagnostic> errors;    // lex + parse errors
};

/// Parse one MiniJ file.  The parser recovers at the next ';' or '}' after an
/// error so several errors can be reported per file.
ParseResult parse_file(std::string_view text, const std::string& path);

}  // namespace minij
