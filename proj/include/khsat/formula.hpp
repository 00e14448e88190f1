#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace khsat
{

enum class op : std::uint8_t
{
    prop,
    top,
    bot,
    not_,
    or_,
    and_,
    implies,
    iff,
    kh,
    all,  // A f
    some, // E f
};

// Immutable, structurally shared formula tree. Copies are cheap; equality and
// ordering are structural.
class formula
{
public:
    // Default-constructs to `true`.
    formula();

    [[nodiscard]] op kind() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const formula& lhs() const;
    [[nodiscard]] const formula& rhs() const;

    // Number of AST nodes.
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t hash() const;
    // No Kh, A or E node anywhere below.
    [[nodiscard]] bool modal_free() const;

    [[nodiscard]] bool is( op k ) const { return kind() == k; }

    friend bool operator==( const formula& a, const formula& b );
    friend std::strong_ordering operator<=>( const formula& a, const formula& b );

    // Opaque node storage; constructed only by the factory functions.
    struct node;
    explicit formula( std::shared_ptr<const node> n );

private:
    struct null_tag
    {
    };
    explicit formula( null_tag ) noexcept {}

    std::shared_ptr<const node> _node;
};

struct formula_hash
{
    std::size_t operator()( const formula& f ) const { return f.hash(); }
};

formula prop( std::string name );
formula top();
formula bot();
formula neg( formula f );
formula disj( formula a, formula b );
formula conj( formula a, formula b );
formula implies( formula a, formula b );
formula iff( formula a, formula b );
formula kh( formula pre, formula post );
formula universal( formula f );
formula existential( formula f );

// Left-folded conjunction / disjunction; empty input gives true / false.
formula conj_all( const std::vector<formula>& fs );
formula disj_all( const std::vector<formula>& fs );

// Negation that folds constants and double negation.
formula negate( const formula& f );

// Concrete syntax with minimal parentheses; parse(to_string(f)) == f.
std::string to_string( const formula& f );
std::ostream& operator<<( std::ostream& os, const formula& f );

// Eliminates Implies, Iff, A and E. The result uses only
// {prop, top, bot, not, or, and, kh}.
formula desugar( const formula& f );

std::set<std::string> propositions( const formula& f );

// Kh(pre, post) pair; identity is structural.
struct kh_pair
{
    formula pre;
    formula post;

    friend bool operator==( const kh_pair&, const kh_pair& ) = default;
    friend auto operator<=>( const kh_pair&, const kh_pair& ) = default;
};

enum class polarity : std::uint8_t
{
    positive,
    negative,
};

struct atom
{
    polarity pol;
    kh_pair args;

    [[nodiscard]] formula to_formula() const;
};

// Positive atoms indexed by I, negative atoms indexed by J. All components
// are Kh-free.
struct atom_conjunction
{
    std::vector<kh_pair> positives;
    std::vector<kh_pair> negatives;

    [[nodiscard]] formula to_formula() const;
};

// Every occurrence of Kh(target.pre, target.post) replaced by `value`.
formula substitute_atom( const formula& f, const kh_pair& target, const formula& value );

// Leftmost-innermost Kh node whose arguments are Kh-free; nothing iff the
// formula has no Kh node. Expects desugared input.
std::optional<kh_pair> find_positive_atom( const formula& f );

// Distinct Kh subterms, and the subset of those with Kh-free arguments.
std::set<kh_pair> kh_subterms( const formula& f );
std::set<kh_pair> positive_atoms( const formula& f );

// If `f` is a conjunction of (possibly negated) atoms with modality-free
// arguments, split it. Expects desugared input.
std::optional<atom_conjunction> as_atom_conjunction( const formula& f );

} // namespace khsat
