#pragma once

#include "tgg/csp.hpp"

namespace tgg {

// The builtin constraint library: eq, concat, addSuffix, isAnIdentifier,
// concatWithOperatorSymbol. Individual defs are exposed so tests can drive
// single adornments directly.
ConstraintDef builtin_eq();
ConstraintDef builtin_concat();
ConstraintDef builtin_add_suffix();
ConstraintDef builtin_is_an_identifier();
ConstraintDef builtin_concat_with_operator_symbol();

ConstraintRegistry make_builtin_registry();

}  // namespace tgg
