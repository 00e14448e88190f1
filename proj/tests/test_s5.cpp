#include "khsat/errors.hpp"
#include "khsat/model_io.hpp"
#include "khsat/parser.hpp"
#include "khsat/s5.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace khsat;
using test_support::rng;

namespace
{

const std::vector<std::string> props{ "p", "q", "r" };

s5_model from_assignments( const std::vector<std::uint32_t>& rows )
{
    s5_model m;
    for ( std::size_t s = 0; s < rows.size(); ++s )
        m.states.push_back( "w" + std::to_string( s ) );
    for ( std::size_t i = 0; i < props.size(); ++i )
    {
        state_set set( rows.size() );
        for ( std::size_t s = 0; s < rows.size(); ++s )
            set[ s ] = rows[ s ] >> i & 1;
        m.valuation.emplace( props[ i ], set );
    }
    return m;
}

// Every S5 model over p, q, r with at most three states, up to repeated
// valuations (which never change A/E truth).
bool brute_force_s5( const std::vector<global_atom>& atoms )
{
    for ( std::uint32_t set = 1; set < 256; ++set )
    {
        if ( __builtin_popcount( set ) > 3 )
            continue;
        std::vector<std::uint32_t> rows;
        for ( std::uint32_t v = 0; v < 8; ++v )
            if ( set >> v & 1 )
                rows.push_back( v );
        const auto m = from_assignments( rows );
        bool all = true;
        for ( const auto& a : atoms )
            all = all && eval_global( m, a );
        if ( all )
            return true;
    }
    return false;
}

s5_model from_lts( const lts_model& m )
{
    s5_model out;
    out.states = m.states();
    for ( const auto& p : m.propositions() )
        out.valuation.emplace( p, m.truth( p ) );
    return out;
}

} // namespace

TEST_CASE( "direct contradictions and forced states" )
{
    CHECK_FALSE( s5_sat( std::vector{ all_of( neg( prop( "p" ) ) ), some_of( prop( "p" ) ) } ) );

    const auto m = s5_sat( std::vector{ some_of( prop( "p" ) ), some_of( neg( prop( "p" ) ) ) } );
    REQUIRE( m );
    CHECK( m->states.size() == 2 );
    CHECK( m->truth( prop( "p" ) ).count() == 1 );

    CHECK( s5_sat( std::vector<global_atom>{} )->states.size() == 1 );
    CHECK_THROWS_AS( s5_sat( std::vector{ some_of( parse( "Kh(p, q)" ) ) } ), contract_violation );
}

TEST_CASE( "constraint set of the worked branch" )
{
    const std::vector atoms{ all_of( parse( "~(p & q)" ) ), some_of( parse( "p & ~r" ) ),
                             some_of( parse( "(true | false) & ~false" ) ) };
    const auto m = s5_sat( atoms );
    REQUIRE( m );
    CHECK( m->states.size() <= 3 );
    for ( const auto& a : atoms )
        CHECK( eval_global( *m, a ) );
}

TEST_CASE( "evaluation of global atoms" )
{
    s5_model single;
    single.states = { "w0" };
    single.valuation.emplace( "p", state_set( 1, 1 ) );
    CHECK( eval_global( single, all_of( prop( "p" ) ) ) );
    CHECK_FALSE( eval_global( single, some_of( neg( prop( "p" ) ) ) ) );
    CHECK( eval_global( single, some_of( top() ) ) );
    CHECK( eval_global( from_assignments( { 0, 3, 5 } ), some_of( top() ) ) );
}

TEST_CASE( "the two-state models agree on global atoms but not on Kh" )
{
    const auto mm = load_model( test_support::data_path( "separated_m.json" ) );
    const auto mp = load_model( test_support::data_path( "separated_m_prime.json" ) );
    const auto sm = from_lts( mm ), sp = from_lts( mp );
    for ( const formula& body : { prop( "p" ), neg( prop( "p" ) ), prop( "q" ), neg( prop( "q" ) ) } )
        for ( const auto kind : { global_kind::all, global_kind::some } )
        {
            const global_atom a{ kind, body };
            CHECK( eval_global( sm, a ) == eval_global( sp, a ) );
            CHECK( model_check( mm, a.to_formula() ).any() == model_check( mp, a.to_formula() ).any() );
        }
    CHECK( model_check( mm, parse( "Kh(p, q)" ) ).any() );
    CHECK( model_check( mp, parse( "Kh(p, q)" ) ).none() );
}

TEST_CASE( "agreement with brute-force S5 models" )
{
    rng g( 41 );
    sat_cache cache;
    std::size_t sat = 0;
    for ( int i = 0; i < 1500; ++i )
    {
        std::vector<global_atom> atoms;
        std::size_t e_atoms = 0;
        const std::size_t count = test_support::pick( g, 5 );
        for ( std::size_t k = 0; k < count; ++k )
        {
            const auto body = test_support::random_prop( g, props, 2 );
            if ( e_atoms < 3 && test_support::pick( g, 2 ) )
            {
                atoms.push_back( some_of( body ) );
                ++e_atoms;
            }
            else
                atoms.push_back( all_of( body ) );
        }
        const auto m = s5_sat( atoms, &cache );
        REQUIRE( m.has_value() == brute_force_s5( atoms ) );

        // Decomposition into propositional queries.
        std::vector<formula> a_bodies;
        for ( const auto& a : atoms )
            if ( a.kind == global_kind::all )
                a_bodies.push_back( a.body );
        const formula alpha = conj_all( a_bodies );
        bool expected = e_atoms > 0 || prop_sat( alpha ).has_value();
        for ( const auto& a : atoms )
            if ( a.kind == global_kind::some )
                expected = expected && prop_sat( conj( a.body, alpha ) ).has_value();
        CHECK( expected == m.has_value() );

        if ( !m )
            continue;
        ++sat;
        CHECK( m->states.size() <= e_atoms + 1 );
        for ( const auto& a : atoms )
            CHECK( eval_global( *m, a ) );
        std::vector<formula> conjuncts;
        for ( const auto& a : atoms )
            conjuncts.push_back( a.to_formula() );
        CHECK( model_check( m->to_lts(), conj_all( conjuncts ) ).all() );
    }
    CHECK( sat > 300 );
    CHECK( cache.queries() >= cache.misses() );
}
