#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minij/span.hpp"

namespace minij {

// Stable diagnostic codes; the corpus expectation harness matches on these
// names, so they must not change.
enum class DiagCode {
  DerefNullable,
  AssignNullable,
  ParamNullable,
  ReturnNullable,
  OverrideReturn,
  OverrideParam,
  FieldNoInit,
  UseBeforeInit,
  ConflictingAnnot,
  Resolution,
  Internal,
};

const char* diag_code_name(DiagCode code);
std::optional<DiagCode> diag_code_from_name(std::string_view name);

enum class SuppressReason { None, Annotation, AssertionModel };

struct Diagnostic {
  DiagCode code = DiagCode::Internal;
  std::string file;
  Span span;
  std::string message;
  bool suppressed = false;
  SuppressReason reason = SuppressReason::None;
};

/// Output order: (file, position, code, message); ties collapse in dedup.
bool diag_less(const Diagnostic& a, const Diagnostic& b);

/// `file:line:col: error[CODE] message`, plus a suppression marker.
std::string render_diag(const Diagnostic& d);

/// Collects diagnostics plus non-fatal warnings (e.g. unsupported contracts).
struct DiagSink {
  std::vector<Diagnostic> diags;
  std::vector<std::string> warnings;

  void emit(Diagnostic d) { diags.push_back(std::move(d)); }
  void emit(DiagCode code, std::string file, Span span, std::string message) {
    diags.push_back(Diagnostic{code, std::move(file), span, std::move(message)});
  }
  void warn(std::string w) { warnings.push_back(std::move(w)); }
};

}  // namespace minij
