#pragma once

#include <vector>

#include "minij/dataflow.hpp"

namespace minij {

struct CheckStats {
  std::vector<Span> assertion_sites;  // assert-nonnull model refinements
};

/// Override-compatibility diagnostics for one annotated class: covariant
/// returns, contravariant parameters, boundary-resolved unannotated supers.
void check_overrides(const Analysis& an, uint32_t cls, DiagSink& sink);

/// Full per-class checking: overrides, field initialization, field
/// initializer expressions, body dataflow checks (descending into lambdas),
/// use-before-init, and suppression marking.
void check_class(const Analysis& an, uint32_t cls, DiagSink& sink,
                 CheckStats* stats);

/// Runs check_class over every annotated class in declaration order.
void check_program(const Analysis& an, DiagSink& sink, CheckStats* stats);

/// Analyzable bodies of an annotated class (methods/ctors/init blocks with
/// bodies plus lambdas nested in them or in field initializers); the
/// cache-discipline accounting compares this with the computation counter.
uint64_t count_units(const ProgramTable& table, uint32_t cls);

}  // namespace minij
