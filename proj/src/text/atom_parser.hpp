#pragma once

#include "rlr/logic.hpp"
#include "text/lexer.hpp"

namespace rlr::text {

// Reads `functor(term, ...)` in clause syntax (upper-case identifiers are
// logvars) and resolves constants against the schema.
Atom parse_clause_atom(Lexer& lex, const Schema& schema);

}  // namespace rlr::text
