#include "minij/diag.hpp"

#include <array>
#include <tuple>

namespace minij {

namespace {
struct CodeName {
  DiagCode code;
  const char* name;
};
constexpr std::array<CodeName, 11> kCodes = {{
    {DiagCode::DerefNullable, "DEREF_NULLABLE"},
    {DiagCode::AssignNullable, "ASSIGN_NULLABLE"},
    {DiagCode::ParamNullable, "PARAM_NULLABLE"},
    {DiagCode::ReturnNullable, "RETURN_NULLABLE"},
    {DiagCode::OverrideReturn, "OVERRIDE_RETURN"},
    {DiagCode::OverrideParam, "OVERRIDE_PARAM"},
    {DiagCode::FieldNoInit, "FIELD_NO_INIT"},
    {DiagCode::UseBeforeInit, "USE_BEFORE_INIT"},
    {DiagCode::ConflictingAnnot, "CONFLICTING_ANNOT"},
    {DiagCode::Resolution, "RESOLUTION"},
    {DiagCode::Internal, "INTERNAL"},
}};
}  // namespace

const char* diag_code_name(DiagCode code) {
  for (const auto& c : kCodes)
    if (c.code == code) return c.name;
  return "INTERNAL";
}

std::optional<DiagCode> diag_code_from_name(std::string_view name) {
  for (const auto& c : kCodes)
    if (name == c.name) return c.code;
  return std::nullopt;
}

bool diag_less(const Diagnostic& a, const Diagnostic& b) {
  return std::tie(a.file, a.span.begin, a.span.end) <
             std::tie(b.file, b.span.begin, b.span.end) ||
         (std::tie(a.file, a.span.begin, a.span.end) ==
              std::tie(b.file, b.span.begin, b.span.end) &&
          std::tie(a.code, a.message) < std::tie(b.code, b.message));
}

std::string render_diag(const Diagnostic& d) {
  std::string s = d.file + ":" + std::to_string(d.span.line) + ":" +
                  std::to_string(d.span.col) + ": error[" +
                  diag_code_name(d.code) + "] " + d.message;
  if (d.suppressed) {
    s += d.reason == SuppressReason::AssertionModel
             ? " (suppressed: assertion-model)"
             : " (suppressed)";
  }
  return s;
}

}  // namespace minij
