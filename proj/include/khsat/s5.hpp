#pragma once

#include "khsat/formula.hpp"
#include "khsat/lts.hpp"
#include "khsat/sat.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace khsat
{

enum class global_kind : std::uint8_t
{
    all,  // A body
    some, // E body
};

// A or E applied to a modality-free body.
struct global_atom
{
    global_kind kind;
    formula body;

    [[nodiscard]] formula to_formula() const;

    friend bool operator==( const global_atom&, const global_atom& ) = default;
    friend auto operator<=>( const global_atom&, const global_atom& ) = default;
};

inline global_atom all_of( formula body ) { return { global_kind::all, std::move( body ) }; }
inline global_atom some_of( formula body ) { return { global_kind::some, std::move( body ) }; }

// States plus valuation, no relations.
struct s5_model
{
    std::vector<std::string> states;
    std::map<std::string, state_set> valuation;

    [[nodiscard]] state_set truth( const formula& body ) const;
    // Relation-free LTS over the same states and valuation.
    [[nodiscard]] lts_model to_lts() const;
};

// Memoized propositional queries. Not thread-safe; one per solving thread.
class sat_cache
{
public:
    explicit sat_cache( sat_options options = {} ) : _options{ options } {}

    const std::optional<assignment>& solve( const formula& f );
    [[nodiscard]] std::size_t queries() const { return _queries; }
    [[nodiscard]] std::size_t misses() const { return _memo.size(); }

private:
    sat_options _options;
    std::unordered_map<formula, std::optional<assignment>, formula_hash> _memo;
    std::size_t _queries = 0;
};

// Satisfiability of a conjunction of A/E atoms. With alpha the conjunction of
// all A bodies, the model has one state per distinct E atom, labelled by a
// satisfying assignment of (E body & alpha), plus a single alpha state when
// there are no E atoms. Nothing iff one of those propositional queries fails.
// Throws contract_violation if a body contains a modality.
std::optional<s5_model> s5_sat( std::span<const global_atom> atoms, sat_cache* cache = nullptr );

bool eval_global( const s5_model& m, const global_atom& atom );

} // namespace khsat
