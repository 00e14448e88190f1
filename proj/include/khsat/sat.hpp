#pragma once

#include "khsat/formula.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace khsat
{

using assignment = std::map<std::string, bool>;

struct sat_options
{
    // Debug hook: every query is appended here in DIMACS form.
    std::ostream* dimacs_log = nullptr;
};

// Satisfying assignment over exactly the propositions of `f`, or nothing.
// Throws contract_violation if `f` contains Kh, A or E.
std::optional<assignment> prop_sat( const formula& f, const sat_options& options = {} );

// Throws contract_violation on a modality or a proposition missing from `a`.
bool eval_prop( const formula& f, const assignment& a );

// Equisatisfiable CNF (definitional encoding) as DIMACS text. Comment lines
// map variable numbers back to proposition symbols.
std::string to_dimacs( const formula& f );

} // namespace khsat
