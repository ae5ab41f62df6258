#pragma once

#include <optional>
#include <vector>

#include "minij/accesspath.hpp"
#include "minij/ast.hpp"
#include "minij/contracts.hpp"
#include "minij/nullness.hpp"

namespace minij {

class Analysis;
struct UnitRef;

/// A single path refinement a handler wants applied to a store.
struct Refinement {
  AccessPath path;
  Nullness nullness = Nullness::NonNull;
};

/// Everything a handler may inspect about a call site during evaluation.
struct CallFacts {
  const CallExpr* call = nullptr;
  MethodRef target;
  bool target_valid = false;
  const Contract* contract = nullptr;
  bool contract_from_model = false;
  std::vector<Nullness> arg_nullness;
  std::vector<std::optional<AccessPath>> arg_paths;
  Nullness declared_return = Nullness::Nullable;
};

// Plug-in points interposed during analysis.  Handlers are consulted in
// registration order; the first non-empty answer wins per hook.
class Handler {
 public:
  virtual ~Handler() = default;

  /// Override the nullness of a call's result.
  virtual std::optional<Nullness> on_call_return(const CallFacts&) {
    return std::nullopt;
  }

  /// Extra refinements on the true/false edges of a call used as a condition.
  virtual bool on_condition_edges(const CallFacts&, std::vector<Refinement>*,
                                  std::vector<Refinement>*) {
    return false;
  }

  /// Refinements on the fallthrough after a call (e.g. "null -> fail").
  /// `from_model` reports whether an applied refinement came from a library
  /// model (recorded as an assertion-model suppression site).
  virtual bool on_call_fallthrough(const CallFacts&, std::vector<Refinement>*,
                                   bool* from_model) {
    (void)from_model;
    return false;
  }

  /// Extra facts for a lambda's entry store.
  virtual bool on_lambda_entry(const LambdaExpr&, const UnitRef&,
                               const Analysis&, std::vector<Refinement>*) {
    return false;
  }
};

/// Contract clauses: "null -> false/true/fail", "!null -> !null", "_ -> !null".
class ContractHandler : public Handler {
 public:
  std::optional<Nullness> on_call_return(const CallFacts&) override;
  bool on_condition_edges(const CallFacts&, std::vector<Refinement>*,
                          std::vector<Refinement>*) override;
  bool on_call_fallthrough(const CallFacts&, std::vector<Refinement>*,
                           bool* from_model) override;
};

/// filter(...).map(...) chains on configured stream types: the filter
/// lambda's result=true exit facts about its parameter are renamed onto each
/// immediately-chained map lambda's parameter.
class StreamHandler : public Handler {
 public:
  bool on_lambda_entry(const LambdaExpr&, const UnitRef& unit, const Analysis&,
                       std::vector<Refinement>*) override;
};

class HandlerRegistry {
 public:
  void add(std::unique_ptr<Handler> h) { handlers_.push_back(std::move(h)); }

  std::optional<Nullness> call_return(const CallFacts& f) const {
    for (const auto& h : handlers_)
      if (auto r = h->on_call_return(f)) return r;
    return std::nullopt;
  }
  bool condition_edges(const CallFacts& f, std::vector<Refinement>* t,
                       std::vector<Refinement>* fl) const {
    for (const auto& h : handlers_)
      if (h->on_condition_edges(f, t, fl)) return true;
    return false;
  }
  bool call_fallthrough(const CallFacts& f, std::vector<Refinement>* out,
                        bool* from_model) const {
    for (const auto& h : handlers_)
      if (h->on_call_fallthrough(f, out, from_model)) return true;
    return false;
  }
  bool lambda_entry(const LambdaExpr& l, const UnitRef& unit, const Analysis& an,
                    std::vector<Refinement>* out) const {
    for (const auto& h : handlers_)
      if (h->on_lambda_entry(l, unit, an, out)) return true;
    return false;
  }

 private:
  std::vector<std::unique_ptr<Handler>> handlers_;
};

}  // namespace minij
