#include "khsat/sat.hpp"

#include "khsat/errors.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>
#include <vector>

namespace khsat
{

namespace
{

using literal = int;
using clause = std::vector<literal>;

// Definitional clausification. Variables 1..n are the input propositions in
// sorted order; auxiliary definitions follow and are named _d<N>.
class cnf_builder
{
public:
    explicit cnf_builder( const formula& f )
    {
        for ( const auto& p : propositions( f ) )
        {
            _names.push_back( p );
            _vars.emplace( p, static_cast<int>( _names.size() ) );
        }
        _inputs = _names.size();
        _clauses.push_back( { encode( f ) } );
    }

    [[nodiscard]] int variables() const { return static_cast<int>( _names.size() ); }
    [[nodiscard]] std::size_t inputs() const { return _inputs; }
    [[nodiscard]] const std::vector<std::string>& names() const { return _names; }
    [[nodiscard]] const std::vector<clause>& clauses() const { return _clauses; }

private:
    literal fresh()
    {
        _names.push_back( "_d" + std::to_string( _names.size() - _inputs ) );
        return static_cast<int>( _names.size() );
    }

    literal truth()
    {
        if ( _true == 0 )
        {
            _true = fresh();
            _clauses.push_back( { _true } );
        }
        return _true;
    }

    literal encode( const formula& f )
    {
        switch ( f.kind() )
        {
        case op::prop:
            return _vars.at( f.name() );
        case op::top:
            return truth();
        case op::bot:
            return -truth();
        case op::not_:
            return -encode( f.lhs() );
        case op::and_: {
            const literal a = encode( f.lhs() ), b = encode( f.rhs() ), x = fresh();
            _clauses.push_back( { -x, a } );
            _clauses.push_back( { -x, b } );
            _clauses.push_back( { x, -a, -b } );
            return x;
        }
        case op::or_:
        case op::implies: {
            literal a = encode( f.lhs() );
            const literal b = encode( f.rhs() ), x = fresh();
            if ( f.is( op::implies ) )
                a = -a;
            _clauses.push_back( { -x, a, b } );
            _clauses.push_back( { x, -a } );
            _clauses.push_back( { x, -b } );
            return x;
        }
        case op::iff: {
            const literal a = encode( f.lhs() ), b = encode( f.rhs() ), x = fresh();
            _clauses.push_back( { -x, -a, b } );
            _clauses.push_back( { -x, a, -b } );
            _clauses.push_back( { x, a, b } );
            _clauses.push_back( { x, -a, -b } );
            return x;
        }
        case op::kh:
        case op::all:
        case op::some:
            throw contract_violation( "propositional query contains a modality: " + to_string( f ) );
        }
        throw contract_violation( "unknown formula node" );
    }

    std::vector<std::string> _names;
    std::map<std::string, int> _vars;
    std::size_t _inputs = 0;
    std::vector<clause> _clauses;
    literal _true = 0;
};

// Plain DPLL: unit propagation to fixpoint, then branch on the literal that
// occurs most often in the not-yet-satisfied clauses (ties: lowest variable,
// positive polarity first).
class dpll
{
public:
    dpll( int variables, const std::vector<clause>& clauses )
            : _clauses{ clauses }, _value( static_cast<std::size_t>( variables ) + 1, 0 )
    {
    }

    bool solve()
    {
        const std::size_t mark = _trail.size();
        if ( !propagate() )
        {
            undo( mark );
            return false;
        }
        const literal branch = pick();
        if ( branch == 0 )
            return true;
        for ( literal choice : { branch, -branch } )
        {
            const std::size_t inner = _trail.size();
            assign( choice );
            if ( solve() )
                return true;
            undo( inner );
        }
        undo( mark );
        return false;
    }

    // 1 true, -1 false, 0 unassigned.
    [[nodiscard]] int value( int var ) const { return _value[ static_cast<std::size_t>( var ) ]; }

private:
    int lit_value( literal l ) const
    {
        const int v = _value[ static_cast<std::size_t>( std::abs( l ) ) ];
        return l > 0 ? v : -v;
    }

    void assign( literal l )
    {
        _value[ static_cast<std::size_t>( std::abs( l ) ) ] = l > 0 ? 1 : -1;
        _trail.push_back( std::abs( l ) );
    }

    void undo( std::size_t mark )
    {
        while ( _trail.size() > mark )
        {
            _value[ static_cast<std::size_t>( _trail.back() ) ] = 0;
            _trail.pop_back();
        }
    }

    bool propagate()
    {
        bool changed = true;
        while ( changed )
        {
            changed = false;
            for ( const auto& c : _clauses )
            {
                literal unit = 0;
                int open = 0;
                bool satisfied = false;
                for ( literal l : c )
                {
                    const int v = lit_value( l );
                    if ( v > 0 )
                    {
                        satisfied = true;
                        break;
                    }
                    if ( v == 0 )
                    {
                        ++open;
                        unit = l;
                    }
                }
                if ( satisfied )
                    continue;
                if ( open == 0 )
                    return false;
                if ( open == 1 )
                {
                    assign( unit );
                    changed = true;
                }
            }
        }
        return true;
    }

    literal pick() const
    {
        std::vector<int> counts( 2 * _value.size(), 0 );
        bool any = false;
        for ( const auto& c : _clauses )
        {
            bool satisfied = false;
            for ( literal l : c )
                if ( lit_value( l ) > 0 )
                {
                    satisfied = true;
                    break;
                }
            if ( satisfied )
                continue;
            for ( literal l : c )
                if ( lit_value( l ) == 0 )
                {
                    ++counts[ 2 * static_cast<std::size_t>( std::abs( l ) ) + ( l < 0 ? 1 : 0 ) ];
                    any = true;
                }
        }
        if ( !any )
            return 0;
        std::size_t best = 0;
        for ( std::size_t i = 2; i < counts.size(); ++i )
            if ( counts[ i ] > counts[ best ] )
                best = i;
        const int var = static_cast<int>( best / 2 );
        return best % 2 == 0 ? var : -var;
    }

    const std::vector<clause>& _clauses;
    std::vector<int> _value;
    std::vector<int> _trail;
};

void write_dimacs( std::ostream& os, const cnf_builder& cnf, const formula& f )
{
    os << "c " << to_string( f ) << '\n';
    for ( std::size_t v = 0; v < cnf.inputs(); ++v )
        os << "c var " << v + 1 << ' ' << cnf.names()[ v ] << '\n';
    os << "p cnf " << cnf.variables() << ' ' << cnf.clauses().size() << '\n';
    for ( const auto& c : cnf.clauses() )
    {
        for ( literal l : c )
            os << l << ' ';
        os << "0\n";
    }
}

} // namespace

std::optional<assignment> prop_sat( const formula& f, const sat_options& options )
{
    if ( !f.modal_free() )
        throw contract_violation( "prop_sat expects a modality-free formula: " + to_string( f ) );

    cnf_builder cnf( f );
    if ( options.dimacs_log )
        write_dimacs( *options.dimacs_log, cnf, f );

    dpll solver( cnf.variables(), cnf.clauses() );
    if ( !solver.solve() )
        return std::nullopt;

    assignment out;
    for ( std::size_t v = 0; v < cnf.inputs(); ++v )
        out[ cnf.names()[ v ] ] = solver.value( static_cast<int>( v ) + 1 ) > 0;
    if ( !eval_prop( f, out ) )
        throw soundness_error( "propositional model fails re-evaluation: " + to_string( f ) );
    return out;
}

bool eval_prop( const formula& f, const assignment& a )
{
    switch ( f.kind() )
    {
    case op::prop: {
        auto it = a.find( f.name() );
        if ( it == a.end() )
            throw contract_violation( "assignment has no value for '" + f.name() + "'" );
        return it->second;
    }
    case op::top:
        return true;
    case op::bot:
        return false;
    case op::not_:
        return !eval_prop( f.lhs(), a );
    case op::or_:
        return eval_prop( f.lhs(), a ) || eval_prop( f.rhs(), a );
    case op::and_:
        return eval_prop( f.lhs(), a ) && eval_prop( f.rhs(), a );
    case op::implies:
        return !eval_prop( f.lhs(), a ) || eval_prop( f.rhs(), a );
    case op::iff:
        return eval_prop( f.lhs(), a ) == eval_prop( f.rhs(), a );
    default:
        throw contract_violation( "eval_prop on a modal formula: " + to_string( f ) );
    }
}

std::string to_dimacs( const formula& f )
{
    if ( !f.modal_free() )
        throw contract_violation( "to_dimacs expects a modality-free formula" );
    std::ostringstream os;
    write_dimacs( os, cnf_builder( f ), f );
    return os.str();
}

} // namespace khsat
