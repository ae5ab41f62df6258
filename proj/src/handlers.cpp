#include "minij/handlers.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "minij/dataflow.hpp"

namespace minij {

// --- @Contract parsing --------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::optional<Contract> parse_contract(const std::string& text, int arity,
                                       std::string* error) {
  Contract contract;
  for (const std::string& clause_text : split(text, ';')) {
    size_t arrow = clause_text.find("->");
    if (arrow == std::string::npos) {
      if (error) *error = "missing '->'";
      return std::nullopt;
    }
    std::string lhs = trim(clause_text.substr(0, arrow));
    std::string rhs = trim(clause_text.substr(arrow + 2));

    ContractClause clause;
    std::vector<std::string> antes =
        lhs.empty() ? std::vector<std::string>{} : split(lhs, ',');
    for (auto& a : antes) {
      std::string t = trim(a);
      if (t == "null") clause.antecedents.push_back(ContractClause::Ante::Null);
      else if (t == "!null") clause.antecedents.push_back(ContractClause::Ante::NotNull);
      else if (t == "_" || t == "any") clause.antecedents.push_back(ContractClause::Ante::Any);
      else {
        if (error) *error = "unsupported antecedent '" + t + "'";
        return std::nullopt;
      }
    }
    if (static_cast<int>(clause.antecedents.size()) != arity) {
      if (error) *error = "antecedent count does not match method arity";
      return std::nullopt;
    }
    if (rhs == "false") clause.consequent = ContractClause::Conseq::False;
    else if (rhs == "true") clause.consequent = ContractClause::Conseq::True;
    else if (rhs == "fail") clause.consequent = ContractClause::Conseq::Fail;
    else if (rhs == "null") clause.consequent = ContractClause::Conseq::Null;
    else if (rhs == "!null") clause.consequent = ContractClause::Conseq::NotNull;
    else {
      if (error) *error = "unsupported consequent '" + rhs + "'";
      return std::nullopt;
    }
    contract.clauses.push_back(std::move(clause));
  }
  if (contract.clauses.empty()) {
    if (error) *error = "empty contract";
    return std::nullopt;
  }
  return contract;
}

// --- contract handler -----------------------------------------------------------

std::optional<Nullness> ContractHandler::on_call_return(const CallFacts& f) {
  if (!f.contract) return std::nullopt;
  for (const auto& clause : f.contract->clauses) {
    if (clause.consequent != ContractClause::Conseq::NotNull &&
        clause.consequent != ContractClause::Conseq::Null)
      continue;
    // The clause applies when every non-Any antecedent is known to hold.
    bool applies = true;
    for (size_t i = 0; i < clause.antecedents.size() && applies; ++i) {
      if (i >= f.arg_nullness.size()) {
        applies = false;
        break;
      }
      switch (clause.antecedents[i]) {
        case ContractClause::Ante::Any:
          break;
        case ContractClause::Ante::Null:
          applies = f.arg_nullness[i] == Nullness::Null;
          break;
        case ContractClause::Ante::NotNull:
          applies = f.arg_nullness[i] == Nullness::NonNull;
          break;
      }
    }
    if (applies) {
      return clause.consequent == ContractClause::Conseq::NotNull
                 ? Nullness::NonNull
                 : Nullness::Null;
    }
  }
  return std::nullopt;
}

bool ContractHandler::on_condition_edges(const CallFacts& f,
                                         std::vector<Refinement>* t,
                                         std::vector<Refinement>* fl) {
  if (!f.contract) return false;
  bool any = false;
  for (const auto& clause : f.contract->clauses) {
    bool to_false = clause.consequent == ContractClause::Conseq::False;
    bool to_true = clause.consequent == ContractClause::Conseq::True;
    if (!to_false && !to_true) continue;
    int pos = clause.sole_antecedent();
    if (pos < 0 || static_cast<size_t>(pos) >= f.arg_paths.size()) continue;
    if (!f.arg_paths[pos]) continue;
    // "null -> false": a true result contradicts the antecedent, so the
    // argument is non-null on the true edge (and dually for "-> true").
    Nullness refined =
        clause.antecedents[pos] == ContractClause::Ante::Null ? Nullness::NonNull
                                                              : Nullness::Null;
    std::vector<Refinement>* edge = to_false ? t : fl;
    edge->push_back(Refinement{*f.arg_paths[pos], refined});
    any = true;
  }
  return any;
}

bool ContractHandler::on_call_fallthrough(const CallFacts& f,
                                          std::vector<Refinement>* out,
                                          bool* from_model) {
  if (!f.contract) return false;
  bool any = false;
  for (const auto& clause : f.contract->clauses) {
    if (clause.consequent != ContractClause::Conseq::Fail) continue;
    int pos = clause.sole_antecedent();
    if (pos < 0 || static_cast<size_t>(pos) >= f.arg_paths.size()) continue;
    if (!f.arg_paths[pos]) continue;
    if (clause.antecedents[pos] != ContractClause::Ante::Null) continue;
    // "null -> fail": surviving the call means the argument was non-null.
    out->push_back(Refinement{*f.arg_paths[pos], Nullness::NonNull});
    any = true;
  }
  if (any && from_model) *from_model = f.contract_from_model;
  return any;
}

// --- stream handler --------------------------------------------------------------

bool StreamHandler::on_lambda_entry(const LambdaExpr& l, const UnitRef& unit,
                                    const Analysis& an,
                                    std::vector<Refinement>* out) {
  if (!l.stream_source) return false;
  const auto& types = an.config.stream_types;
  for (const auto& cn : l.stream_recv_classes) {
    if (std::find(types.begin(), types.end(), cn) == types.end()) return false;
  }
  if (l.params.empty() || l.stream_source->params.empty()) return false;
  uint32_t from = l.stream_source->params[0].symbol;
  uint32_t to = l.params[0].symbol;
  if (from == kNoId || to == kNoId) return false;

  UnitRef source_unit = an.unit_for_lambda(unit, l.stream_source);
  const DataflowResult& r = an.result_for(source_unit);
  if (!r.when_true) return false;

  // Rename the filter parameter's facts onto the map parameter.
  for (const auto& [path, n] : r.when_true->facts()) {
    if (path.root == AccessPath::Root::Local && path.root_sym == from) {
      AccessPath renamed = path;
      renamed.root_sym = to;
      out->push_back(Refinement{std::move(renamed), n});
    }
  }
  return !out->empty();
}

}  // namespace minij
