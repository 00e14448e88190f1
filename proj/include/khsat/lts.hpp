#pragma once

#include "khsat/formula.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace khsat
{

// Subset of a model's states, indexed densely.
using state_set = boost::dynamic_bitset<>;

// Finite sequence of action symbols; the empty plan is epsilon.
class plan
{
public:
    plan() = default;
    explicit plan( std::vector<std::string> actions ) : _actions{ std::move( actions ) } {}

    [[nodiscard]] std::size_t size() const { return _actions.size(); }
    [[nodiscard]] bool empty() const { return _actions.empty(); }
    // 1-based: at(1) is the first action.
    [[nodiscard]] const std::string& at( std::size_t i ) const { return _actions.at( i - 1 ); }
    // 1-based inclusive slice a_i ... a_j; empty when j < i.
    [[nodiscard]] plan slice( std::size_t i, std::size_t j ) const;
    [[nodiscard]] plan then( const plan& other ) const;
    [[nodiscard]] const std::vector<std::string>& actions() const { return _actions; }

    friend bool operator==( const plan&, const plan& ) = default;
    friend auto operator<=>( const plan&, const plan& ) = default;

private:
    std::vector<std::string> _actions;
};

// Space separated actions, or "ε" for the empty plan.
std::string to_string( const plan& p );

// Labelled transition system with string names at the boundary and dense
// indices inside. Build it, then treat it as immutable.
class lts_model
{
public:
    explicit lts_model( std::vector<std::string> states );

    [[nodiscard]] std::size_t size() const { return _states.size(); }
    [[nodiscard]] const std::vector<std::string>& states() const { return _states; }
    [[nodiscard]] std::optional<std::size_t> index_of( std::string_view state ) const;
    [[nodiscard]] const std::string& state_name( std::size_t i ) const { return _states.at( i ); }

    void declare_action( const std::string& action );
    void add_transition( const std::string& action, std::size_t src, std::size_t dst );
    void add_transition( const std::string& action, std::string_view src, std::string_view dst );
    void remove_action( const std::string& action );

    void declare_proposition( const std::string& p );
    void set_true( const std::string& p, std::size_t state );
    void set_truth( const std::string& p, state_set states );

    // Sorted.
    [[nodiscard]] std::vector<std::string> actions() const;
    [[nodiscard]] std::vector<std::string> propositions() const;
    [[nodiscard]] bool has_action( const std::string& action ) const;

    // Undeclared actions denote the empty relation; undeclared propositions
    // are false everywhere.
    [[nodiscard]] state_set image( const std::string& action, const state_set& from ) const;
    [[nodiscard]] state_set domain( const std::string& action ) const;
    [[nodiscard]] const state_set& successors( const std::string& action, std::size_t state ) const;
    [[nodiscard]] state_set truth( const std::string& p ) const;
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> transitions( const std::string& action ) const;

    [[nodiscard]] state_set none() const { return state_set( size() ); }
    [[nodiscard]] state_set all() const { return ~none(); }

private:
    struct relation
    {
        std::vector<state_set> successors;
        state_set domain;
    };

    void check_state( std::size_t i ) const;

    std::vector<std::string> _states;
    std::map<std::string, std::size_t, std::less<>> _index;
    std::map<std::string, relation, std::less<>> _relations;
    std::map<std::string, state_set, std::less<>> _valuation;
    state_set _empty;
};

// R_pi(from); R_eps(from) = from.
state_set apply_plan( const lts_model& m, const plan& p, const state_set& from );

// SE(pi): states from which every partial run can take the next action.
state_set strongly_executable( const lts_model& m, const plan& p );

// pre ⊆ SE(pi) and R_pi(pre) ⊆ post.
bool is_witness( const lts_model& m, const plan& p, const state_set& pre, const state_set& post );

struct kh_search_options
{
    // Longest plan explored; unbounded when empty. Under a bound a "no plan"
    // answer is not a refutation.
    std::optional<std::size_t> max_length;
};

// Shortest witness plan for Kh with the given truth sets, ties broken by
// lexicographic action order. Breadth-first search over subsets of states:
// U -a-> R_a(U) is allowed iff every state of U has an a-successor.
std::optional<plan> check_kh( const lts_model& m, const state_set& pre, const state_set& post,
                              const kh_search_options& options = {} );

// Truth set of `f` (any surface syntax). Kh, A and E evaluate globally to all
// states or none.
state_set model_check( const lts_model& m, const formula& f, const kh_search_options& options = {} );

// As model_check, also recording the witness (or its absence) found for every
// Kh subterm evaluated.
state_set model_check( const lts_model& m, const formula& f, std::map<kh_pair, std::optional<plan>>& witnesses,
                       const kh_search_options& options = {} );

} // namespace khsat
