#pragma once

#include <cstdint>

namespace minij {

/// Byte range [begin, end) with 1-based line/column of both endpoints.
struct Span {
  uint32_t begin = 0;
  uint32_t end = 0;
  uint32_t line = 1;
  uint32_t col = 1;
  uint32_t end_line = 1;
  uint32_t end_col = 1;

  static Span merge(const Span& a, const Span& b) {
    Span s = a;
    if (b.begin < s.begin) {
      s.begin = b.begin;
      s.line = b.line;
      s.col = b.col;
    }
    if (b.end > s.end) {
      s.end = b.end;
      s.end_line = b.end_line;
      s.end_col = b.end_col;
    }
    return s;
  }
};

}  // namespace minij
