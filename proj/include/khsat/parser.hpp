#pragma once

#include "khsat/errors.hpp"
#include "khsat/formula.hpp"

#include <string_view>

namespace khsat
{

// Grammar, loosest binding first:
//
//   iff     := implies ( "<->" implies )*          left-assoc
//   implies := or ( "->" implies )?                right-assoc
//   or      := and ( "|" and )*
//   and     := unary ( "&" unary )*
//   unary   := "~" unary | "A" unary | "E" unary | primary
//   primary := prop | "true" | "false" | "Kh" "(" iff "," iff ")" | "(" iff ")"
//
// prop is [a-z][a-zA-Z0-9_]*. "#" starts a comment running to end of line.
// Throws parse_error with a 1-based line and column.
formula parse( std::string_view text );

// Proposition symbols usable in formulas and model valuations.
bool is_proposition_name( std::string_view name );

} // namespace khsat
