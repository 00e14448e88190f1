#pragma once

#include "khsat/formula.hpp"
#include "khsat/s5.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace khsat
{

// ⋀_i (A ~pre_i | E post_i); true when empty.
formula theta_plus( std::span<const kh_pair> positives );

// ⋀_j E(pre_j & ~post_j); true when empty.
formula theta_minus( std::span<const kh_pair> negatives );

using index_pair = std::pair<std::size_t, std::size_t>;

// A guessed D ⊆ I×I together with C, the reflexive-transitive closure of its
// complement. Indices are 0-based here and printed 1-based.
class d_relation
{
public:
    d_relation() = default;
    // `pairs` is row-major over (t, s).
    d_relation( std::size_t n, std::vector<bool> pairs );

    [[nodiscard]] std::size_t n() const { return _n; }
    [[nodiscard]] bool contains( std::size_t t, std::size_t s ) const { return _pairs[ t * _n + s ]; }
    [[nodiscard]] bool in_closure( std::size_t s, std::size_t t ) const { return _closure[ s * _n + t ]; }
    [[nodiscard]] std::vector<index_pair> pairs() const;
    [[nodiscard]] std::vector<index_pair> closure_pairs() const;
    [[nodiscard]] const std::vector<bool>& pair_bits() const { return _pairs; }

    friend bool operator==( const d_relation& a, const d_relation& b ) { return a._n == b._n && a._pairs == b._pairs; }

private:
    std::size_t _n = 0;
    std::vector<bool> _pairs;
    std::vector<bool> _closure;
};

// Builds D from explicit pairs and closes its complement (Warshall).
// Throws contract_violation for an index >= n.
d_relation closure_complement( std::size_t n, std::span<const index_pair> d );

// One conjunct of theta_D: a single E atom, or a disjunction of two.
struct theta_constraint
{
    global_atom first;
    std::optional<global_atom> second;

    [[nodiscard]] formula to_formula() const;
};

// For each (t,s) in D: E(post_t & ~pre_s). Then for each j and each (s,t) in
// C: E(pre_j & ~pre_s) | E(post_t & ~post_j). Throws contract_violation when
// d.n() != |positives|.
std::vector<theta_constraint> theta_d( const atom_conjunction& conj, const d_relation& d );

struct closure_choice
{
    std::size_t j;
    std::size_t s;
    std::size_t t;
    bool left; // E(pre_j & ~pre_s) rather than E(post_t & ~post_j)
};

// One disjunct of the DNF of theta: a flat conjunction of A/E atoms.
struct theta_disjunct
{
    std::vector<global_atom> a_atoms;
    std::vector<global_atom> e_atoms;
    d_relation d;
    // chose_all[i]: A(~pre_i) was taken instead of E post_i.
    std::vector<bool> chose_all;
    std::vector<closure_choice> closure_choices;
    // Position in the enumeration, counting pruned candidates.
    std::size_t index = 0;
    bool from_seed = false;

    [[nodiscard]] std::vector<global_atom> atoms() const;
    [[nodiscard]] std::size_t atom_count() const { return a_atoms.size() + e_atoms.size(); }
};

// Deliberate defects for negative-control tests of the differential fuzzer.
enum class translate_mutation : std::uint8_t
{
    none,
    // Only A(~pre_i) is ever chosen for positive atoms (loses models).
    never_eventual_post,
    // The j-indexed closure constraints are dropped (admits non-models).
    drop_closure_constraints,
};

struct enumeration_options
{
    // Discard candidates whose A/E atoms are jointly unsatisfiable, resolving
    // each two-way closure constraint to its first satisfiable side.
    bool prune = true;
    // Try first the D read off a model of theta+ & theta- (pruned mode only).
    bool seed_from_model = true;
    translate_mutation mutation = translate_mutation::none;
};

// Lazily yields disjuncts. D ranges over subsets of I×I by increasing size,
// lexicographic within a size (pruned mode skips pairs no feasible mask
// admits, and stops at once when even the largest admissible D fails); per D, the A/E choice for positives ranges over
// bitmasks in increasing order (bit i set = A(~pre_i)); in unpruned mode the
// closure choices then range over all bit vectors (bit set = right side).
class disjunct_enumerator
{
public:
    disjunct_enumerator( atom_conjunction conj, enumeration_options options = {}, sat_cache* cache = nullptr );

    std::optional<theta_disjunct> next();

    // Candidates examined so far, including pruned ones.
    [[nodiscard]] std::size_t examined() const { return _examined; }
    [[nodiscard]] std::size_t relations_tried() const { return _relations_tried; }
    [[nodiscard]] const std::optional<d_relation>& seeded() const { return _seed; }

private:
    struct mask_state
    {
        formula alpha;
        std::int8_t alpha_sat = -1;
        std::vector<std::int8_t> memo; // per body: -1 unknown, 0 unsat, 1 sat
    };

    void start();
    bool advance_relation();
    bool next_combination();
    void set_relation( d_relation d );
    std::optional<theta_disjunct> next_pruned();
    std::optional<theta_disjunct> next_unpruned();
    bool allowed_mask( std::uint64_t mask ) const;
    bool base_feasible( std::uint64_t mask );
    bool sat_under( std::uint64_t mask, std::size_t body );
    std::optional<std::vector<bool>> closure_choices_for( std::uint64_t mask, const std::vector<index_pair>& closure );
    theta_disjunct build( std::uint64_t mask, const std::vector<bool>& right_choices ) const;
    std::size_t add_body( formula f );

    atom_conjunction _conj;
    enumeration_options _options;
    sat_cache _own_cache;
    sat_cache* _cache;

    std::size_t _ni = 0;
    std::size_t _nj = 0;
    std::uint64_t _mask_count = 1;

    // Candidate E bodies, indexed densely.
    std::vector<formula> _bodies;
    std::vector<std::size_t> _post_body;  // post_i
    std::vector<std::size_t> _neg_body;   // pre_j & ~post_j
    std::vector<std::size_t> _d_body;     // post_t & ~pre_s, at t*n+s
    std::vector<std::size_t> _left_body;  // pre_j & ~pre_s, at j*n+s
    std::vector<std::size_t> _right_body; // post_t & ~post_j, at t*|J|+j
    std::unordered_map<std::uint64_t, mask_state> _masks;
    std::vector<std::uint64_t> _feasible_masks;
    // Indices t*n+s that D may contain.
    std::vector<std::size_t> _pair_universe;

    std::optional<d_relation> _seed;
    bool _seed_pending = false;
    bool _seed_active = false;
    std::size_t _d_size = 0;
    std::vector<std::size_t> _combination;
    bool _combination_started = false;

    bool _started = false;
    bool _done = false;
    d_relation _current;
    std::vector<index_pair> _closure_pairs;
    std::size_t _mask_pos = 0;   // into _feasible_masks (pruned) or raw mask (unpruned)
    std::vector<bool> _choice;   // unpruned closure choice counter
    bool _choice_wrapped = true;
    std::size_t _examined = 0;
    std::size_t _relations_tried = 0;
};

// Number of disjuncts before pruning: Σ_D 2^|I| · 2^(|J|·|C(D̄)|).
// Throws budget_exceeded if the count does not fit in 64 bits.
std::uint64_t count_unpruned_disjuncts( const atom_conjunction& conj );

} // namespace khsat
