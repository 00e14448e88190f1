#pragma once

#include "khsat/formula.hpp"
#include "khsat/lts.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace khsat
{

struct oracle_bounds
{
    std::size_t max_states = 3;
    std::size_t max_actions = 2;
    // Empty means "the propositions of the formula".
    std::vector<std::string> propositions;
};

struct oracle_options
{
    // Largest number of models a search may cover.
    std::uint64_t budget = std::uint64_t{ 1 } << 30;
};

// Models covered by a search: for n = 1..max_states, every choice of
// max_actions relations over n states (absent transitions give fewer
// effective actions) times every valuation. Throws budget_exceeded on
// overflow.
std::uint64_t oracle_model_count( const oracle_bounds& b );

// Visits every model in search order until the visitor returns false.
// States are s0, s1, ...; actions a, b, ...; every action is declared even
// when its relation is empty.
void for_each_model( const oracle_bounds& b, const std::function<bool( const lts_model& )>& visit );

// First model in search order where `phi` holds somewhere. Nothing refutes
// satisfiability only within the bounds.
// Throws budget_exceeded when the search is larger than options.budget or
// max_states > 5, and input_error when `phi` uses a proposition outside an
// explicit proposition list.
std::optional<lts_model> oracle_sat( const formula& phi, const oracle_bounds& b, const oracle_options& options = {} );

} // namespace khsat
