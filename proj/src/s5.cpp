#include "khsat/s5.hpp"

#include "khsat/errors.hpp"

#include <set>

namespace khsat
{

formula global_atom::to_formula() const
{
    return kind == global_kind::all ? universal( body ) : existential( body );
}

state_set s5_model::truth( const formula& body ) const
{
    state_set out( states.size() );
    for ( std::size_t s = 0; s < states.size(); ++s )
    {
        assignment a;
        for ( const auto& p : propositions( body ) )
        {
            auto it = valuation.find( p );
            a[ p ] = it != valuation.end() && it->second.test( s );
        }
        out[ s ] = eval_prop( body, a );
    }
    return out;
}

lts_model s5_model::to_lts() const
{
    lts_model m( states );
    for ( const auto& [ p, set ] : valuation )
        m.set_truth( p, set );
    return m;
}

const std::optional<assignment>& sat_cache::solve( const formula& f )
{
    ++_queries;
    auto it = _memo.find( f );
    if ( it == _memo.end() )
        it = _memo.emplace( f, prop_sat( f, _options ) ).first;
    return it->second;
}

std::optional<s5_model> s5_sat( std::span<const global_atom> atoms, sat_cache* cache )
{
    sat_cache local;
    sat_cache& sat = cache ? *cache : local;

    std::vector<formula> a_bodies;
    std::vector<formula> e_bodies;
    std::set<formula> seen_e;
    for ( const auto& atom : atoms )
    {
        if ( !atom.body.modal_free() )
            throw contract_violation( "S5 atom body contains a modality: " + to_string( atom.body ) );
        if ( atom.kind == global_kind::all )
            a_bodies.push_back( atom.body );
        else if ( seen_e.insert( atom.body ).second )
            e_bodies.push_back( atom.body );
    }

    const formula alpha = conj_all( a_bodies );
    std::vector<assignment> labels;
    if ( e_bodies.empty() )
    {
        const auto& a = sat.solve( alpha );
        if ( !a )
            return std::nullopt;
        labels.push_back( *a );
    }
    for ( const auto& body : e_bodies )
    {
        const auto& a = sat.solve( a_bodies.empty() ? body : conj( body, alpha ) );
        if ( !a )
            return std::nullopt;
        labels.push_back( *a );
    }

    s5_model m;
    std::set<std::string> props;
    for ( const auto& atom : atoms )
        props.merge( propositions( atom.body ) );
    for ( std::size_t s = 0; s < labels.size(); ++s )
        m.states.push_back( "w" + std::to_string( s ) );
    for ( const auto& p : props )
    {
        state_set set( labels.size() );
        for ( std::size_t s = 0; s < labels.size(); ++s )
        {
            auto it = labels[ s ].find( p );
            set[ s ] = it != labels[ s ].end() && it->second;
        }
        m.valuation.emplace( p, std::move( set ) );
    }
    return m;
}

bool eval_global( const s5_model& m, const global_atom& atom )
{
    const auto set = m.truth( atom.body );
    return atom.kind == global_kind::all ? set.all() : set.any();
}

} // namespace khsat
