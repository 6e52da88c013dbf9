#pragma once

#include <string_view>

#include "solitonjet/field.hpp"

namespace solitonjet {

/// Parses the infix field grammar.
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' signed-integer)?
///   atom   := number | 'x' | 'y' | 't' | 'exp' '(' expr ')' | '(' expr ')'
///           | '-' atom | 'diff' '(' expr (',' ('x'|'y'|'t'))+ ')'
///
/// 'y' and 't' both name the second coordinate. A '-' in front of a numeric
/// literal folds into a negative constant; otherwise it becomes Mul(-1, atom).
/// Throws SyntaxError (with offset) or Error(UnknownIdentifier).
FieldExpr parse_field(std::string_view text);

}  // namespace solitonjet
