#pragma once

#include <optional>
#include <string>
#include <vector>

namespace minij {

// Parsed @Contract annotation, e.g. "null -> false", "!null, _ -> !null".
// Clauses are ';'-separated; antecedents are per-parameter and comma-joined.
struct ContractClause {
  enum class Ante { Any, Null, NotNull };
  enum class Conseq { False, True, Fail, Null, NotNull };
  std::vector<Ante> antecedents;
  Conseq consequent = Conseq::Fail;

  /// Index of the single non-Any antecedent, or -1 (none or several).
  int sole_antecedent() const {
    int found = -1;
    for (size_t i = 0; i < antecedents.size(); ++i) {
      if (antecedents[i] != Ante::Any) {
        if (found >= 0) return -1;
        found = static_cast<int>(i);
      }
    }
    return found;
  }
};

struct Contract {
  std::vector<ContractClause> clauses;
};

/// Parses the supported contract grammar subset.  On failure returns nullopt
/// and sets `error` to a description; the caller reports an
/// unsupported-contract warning and ignores the annotation.
std::optional<Contract> parse_contract(const std::string& text, int arity,
                                       std::string* error);

}  // namespace minij
