#pragma once

#include "khsat/formula.hpp"
#include "khsat/lts.hpp"
#include "khsat/s5.hpp"
#include "khsat/translate.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace khsat
{

// One leaf of the atom-elimination tree.
struct branch
{
    // Kh-free once the leaf is reached.
    formula phi_cur;
    std::vector<kh_pair> positives;
    std::vector<kh_pair> negatives;
    // Atoms in elimination order with the value substituted for each.
    std::vector<std::pair<kh_pair, bool>> decisions;

    // ~Kh(phi_cur, false) as a negative atom.
    [[nodiscard]] kh_pair residue() const { return { phi_cur, bot() }; }
    // positives, then negatives followed by the residue.
    [[nodiscard]] atom_conjunction conjunction() const;
};

// Visits every leaf until the visitor returns false. Leaves come in
// increasing number of positives; within a level, the true child of each split
// precedes the false child. Expects desugared input.
void branch_atoms( const formula& phi, const std::function<bool( const branch& )>& visit );

struct solver_options
{
    enumeration_options enumeration;
    sat_options sat;
};

struct solver_stats
{
    std::size_t branches = 0;
    std::size_t leaves_memoized = 0;
    std::size_t disjuncts = 0;
    std::size_t relations = 0;
    std::size_t s5_calls = 0;
    std::size_t sat_queries = 0;
    std::size_t sat_misses = 0;
    // Branches whose first D came from the model-guided seed, and how many of
    // those succeeded on it.
    std::size_t seeded = 0;
    std::size_t seed_hits = 0;
};

struct sat_witness
{
    lts_model model;
    // 1-based positive-atom index to witness plan.
    std::map<std::size_t, plan> witnesses;
    branch leaf;
    theta_disjunct disjunct;
    s5_model s5;
    // 0-based indices of positives whose precondition is empty.
    std::set<std::size_t> k_set;
};

struct verdict
{
    std::optional<sat_witness> sat;
    solver_stats stats;

    [[nodiscard]] bool satisfiable() const { return sat.has_value(); }
};

// Name of the action extracted for the 1-based positive index.
std::string action_name( std::size_t index );

// LTS built from the S5 model: act<l> relates every pre_l state to every
// post_l state unless pre_l is empty. Witnesses are act<l>, or epsilon for
// empty preconditions.
std::pair<lts_model, std::map<std::size_t, plan>> extract_lts( const s5_model& s5, const atom_conjunction& conj );

// The model satisfies `phi` somewhere and every recorded witness certifies its
// positive atom.
bool verify( const sat_witness& w, const formula& phi );

// Decides satisfiability of any formula. A SAT verdict has passed verify;
// a failure there throws soundness_error.
verdict decide( const formula& phi, const solver_options& options = {} );

} // namespace khsat
