#pragma once

#include "khsat/formula.hpp"
#include "khsat/lts.hpp"
#include "khsat/model_io.hpp"

#include <random>
#include <string>
#include <vector>

namespace test_support
{

using rng = std::mt19937_64;

inline std::size_t pick( rng& g, std::size_t n )
{
    return std::uniform_int_distribution<std::size_t>( 0, n - 1 )( g );
}

inline std::string data_path( const std::string& name )
{
    return std::string( KHSAT_TEST_DATA ) + "/" + name;
}

inline khsat::formula random_prop( rng& g, const std::vector<std::string>& props, int depth )
{
    using namespace khsat;
    if ( depth == 0 || pick( g, 4 ) == 0 )
    {
        const auto r = pick( g, 10 );
        if ( r == 0 )
            return top();
        if ( r == 1 )
            return bot();
        return prop( props[ pick( g, props.size() ) ] );
    }
    switch ( pick( g, 5 ) )
    {
    case 0:
        return neg( random_prop( g, props, depth - 1 ) );
    case 1: {
        auto a = random_prop( g, props, depth - 1 );
        return conj( a, random_prop( g, props, depth - 1 ) );
    }
    case 2: {
        auto a = random_prop( g, props, depth - 1 );
        return disj( a, random_prop( g, props, depth - 1 ) );
    }
    case 3: {
        auto a = random_prop( g, props, depth - 1 );
        return implies( a, random_prop( g, props, depth - 1 ) );
    }
    default: {
        auto a = random_prop( g, props, depth - 1 );
        return iff( a, random_prop( g, props, depth - 1 ) );
    }
    }
}

// Any surface operator, Kh/A/E nested up to `modal_depth`.
inline khsat::formula random_any( rng& g, const std::vector<std::string>& props, int depth, int modal_depth )
{
    using namespace khsat;
    if ( depth == 0 )
        return random_prop( g, props, 0 );
    const std::size_t choices = modal_depth > 0 ? 8 : 5;
    switch ( pick( g, choices ) )
    {
    case 0:
        return random_prop( g, props, 1 );
    case 1:
        return neg( random_any( g, props, depth - 1, modal_depth ) );
    case 2: {
        auto a = random_any( g, props, depth - 1, modal_depth );
        return conj( a, random_any( g, props, depth - 1, modal_depth ) );
    }
    case 3: {
        auto a = random_any( g, props, depth - 1, modal_depth );
        return disj( a, random_any( g, props, depth - 1, modal_depth ) );
    }
    case 4: {
        auto a = random_any( g, props, depth - 1, modal_depth );
        return implies( a, random_any( g, props, depth - 1, modal_depth ) );
    }
    case 5: {
        auto a = random_any( g, props, depth - 1, modal_depth - 1 );
        return kh( a, random_any( g, props, depth - 1, modal_depth - 1 ) );
    }
    case 6:
        return universal( random_any( g, props, depth - 1, modal_depth - 1 ) );
    default:
        return existential( random_any( g, props, depth - 1, modal_depth - 1 ) );
    }
}

// Boolean combination of Kh/A/E atoms with propositional arguments.
inline khsat::formula random_subjective( rng& g, const std::vector<std::string>& props, int depth )
{
    using namespace khsat;
    if ( depth == 0 || pick( g, 3 ) == 0 )
    {
        auto a = random_prop( g, props, 2 );
        switch ( pick( g, 4 ) )
        {
        case 0:
            return universal( a );
        case 1:
            return existential( a );
        default:
            return kh( a, random_prop( g, props, 2 ) );
        }
    }
    switch ( pick( g, 3 ) )
    {
    case 0:
        return neg( random_subjective( g, props, depth - 1 ) );
    case 1: {
        auto a = random_subjective( g, props, depth - 1 );
        return conj( a, random_subjective( g, props, depth - 1 ) );
    }
    default: {
        auto a = random_subjective( g, props, depth - 1 );
        return disj( a, random_subjective( g, props, depth - 1 ) );
    }
    }
}

inline khsat::lts_model random_model( rng& g, std::size_t states, const std::vector<std::string>& actions,
                                      const std::vector<std::string>& props, double edge_probability = 0.3 )
{
    std::vector<std::string> names;
    for ( std::size_t i = 0; i < states; ++i )
        names.push_back( "x" + std::to_string( i ) );
    khsat::lts_model m( names );
    std::bernoulli_distribution edge( edge_probability ), truth( 0.5 );
    for ( const auto& a : actions )
    {
        m.declare_action( a );
        for ( std::size_t s = 0; s < states; ++s )
            for ( std::size_t t = 0; t < states; ++t )
                if ( edge( g ) )
                    m.add_transition( a, s, t );
    }
    for ( const auto& p : props )
    {
        m.declare_proposition( p );
        for ( std::size_t s = 0; s < states; ++s )
            if ( truth( g ) )
                m.set_true( p, s );
    }
    return m;
}

} // namespace test_support
