#include "khsat/errors.hpp"
#include "khsat/lts.hpp"
#include "khsat/model_io.hpp"
#include "khsat/parser.hpp"

#include "support.hpp"

#include <doctest.h>

#include <functional>

using namespace khsat;
using test_support::rng;

namespace
{

const std::vector<std::string> props{ "p", "q", "r" };

state_set states_of( const lts_model& m, std::initializer_list<const char*> names )
{
    state_set out = m.none();
    for ( auto n : names )
        out.set( *m.index_of( n ) );
    return out;
}

// Strong executability straight from the definition: follow every partial
// run state by state and require each visited state to have a successor for
// the next action.
bool se_literal( const lts_model& m, const plan& p, std::size_t s, std::size_t k = 0 )
{
    if ( k == p.size() )
        return true;
    const auto& succ = m.successors( p.actions()[ k ], s );
    if ( succ.none() )
        return false;
    for ( auto t = succ.find_first(); t != state_set::npos; t = succ.find_next( t ) )
        if ( !se_literal( m, p, t, k + 1 ) )
            return false;
    return true;
}

void image_literal( const lts_model& m, const plan& p, std::size_t s, std::size_t k, state_set& out )
{
    if ( k == p.size() )
    {
        out.set( s );
        return;
    }
    const auto& succ = m.successors( p.actions()[ k ], s );
    for ( auto t = succ.find_first(); t != state_set::npos; t = succ.find_next( t ) )
        image_literal( m, p, t, k + 1, out );
}

bool witness_literal( const lts_model& m, const plan& p, const state_set& pre, const state_set& post )
{
    for ( auto s = pre.find_first(); s != state_set::npos; s = pre.find_next( s ) )
    {
        if ( !se_literal( m, p, s ) )
            return false;
        state_set reached = m.none();
        image_literal( m, p, s, 0, reached );
        if ( !reached.is_subset_of( post ) )
            return false;
    }
    return true;
}

// Shortest, then lexicographically least, witness among all plans up to
// `max_length`, by exhaustive enumeration.
std::optional<plan> brute_force_kh( const lts_model& m, const state_set& pre, const state_set& post,
                                    std::size_t max_length )
{
    const auto actions = m.actions();
    for ( std::size_t len = 0; len <= max_length; ++len )
    {
        std::vector<std::size_t> digits( len, 0 );
        while ( true )
        {
            std::vector<std::string> seq;
            for ( auto d : digits )
                seq.push_back( actions[ d ] );
            if ( witness_literal( m, plan{ seq }, pre, post ) )
                return plan{ seq };
            std::size_t i = len;
            while ( i > 0 && digits[ i - 1 ] + 1 == actions.size() )
                digits[ --i ] = 0;
            if ( i == 0 )
                break;
            ++digits[ i - 1 ];
        }
        if ( actions.empty() )
            break;
    }
    return std::nullopt;
}

plan random_plan( rng& g, const std::vector<std::string>& actions, std::size_t max_length )
{
    std::vector<std::string> seq;
    const std::size_t len = test_support::pick( g, max_length + 1 );
    for ( std::size_t i = 0; i < len; ++i )
        seq.push_back( actions[ test_support::pick( g, actions.size() ) ] );
    return plan{ seq };
}

} // namespace

TEST_CASE( "plans" )
{
    const plan p{ { "a", "b", "c" } };
    CHECK( p.size() == 3 );
    CHECK( p.at( 1 ) == "a" );
    CHECK( p.slice( 2, 3 ) == plan{ { "b", "c" } } );
    CHECK( p.slice( 3, 2 ).empty() );
    CHECK_THROWS( static_cast<void>( p.slice( 0, 1 ) ) );
    CHECK( p.slice( 1, 1 ).then( p.slice( 2, 3 ) ) == p );
    CHECK( to_string( p ) == "a b c" );
    CHECK( to_string( plan{} ) == "ε" );
}

TEST_CASE( "example model: plan images and strong executability" )
{
    const auto m = load_model( test_support::data_path( "example2_1.json" ) );
    const state_set s = states_of( m, { "s" } );
    CHECK( apply_plan( m, plan{ { "a" } }, s ) == states_of( m, { "t", "v" } ) );
    CHECK( apply_plan( m, plan{ { "a", "b" } }, s ) == states_of( m, { "u" } ) );
    CHECK( apply_plan( m, plan{}, states_of( m, { "t", "u" } ) ) == states_of( m, { "t", "u" } ) );

    CHECK( strongly_executable( m, plan{} ) == m.all() );
    CHECK( strongly_executable( m, plan{ { "a" } } ) == s );
    CHECK( strongly_executable( m, plan{ { "a", "b" } } ).none() );
}

TEST_CASE( "empty relations execute only the empty plan" )
{
    lts_model m( { "x", "y" } );
    m.declare_action( "a" );
    CHECK( strongly_executable( m, plan{} ) == m.all() );
    CHECK( strongly_executable( m, plan{ { "a" } } ).none() );
    CHECK( strongly_executable( m, plan{ { "zz" } } ).none() );
}

TEST_CASE( "strong executability agrees with the literal definition" )
{
    rng g( 21 );
    for ( int i = 0; i < 400; ++i )
    {
        const std::size_t n = 1 + test_support::pick( g, 5 );
        const auto m = test_support::random_model( g, n, { "a", "b" }, props, 0.25 + 0.1 * test_support::pick( g, 5 ) );
        const plan p = random_plan( g, { "a", "b" }, 4 );
        const auto se = strongly_executable( m, p );
        CHECK( se.test( 0 ) == se_literal( m, p, 0 ) );
        for ( std::size_t s = 0; s < n; ++s )
        {
            CHECK( se.test( s ) == se_literal( m, p, s ) );
            state_set reached = m.none();
            image_literal( m, p, s, 0, reached );
            state_set from = m.none();
            from.set( s );
            CHECK( apply_plan( m, p, from ) == reached );
        }
        CHECK( strongly_executable( m, plan{} ) == m.all() );
    }
}

TEST_CASE( "check_kh on the example model" )
{
    const auto m = load_model( test_support::data_path( "example2_1.json" ) );
    CHECK( check_kh( m, m.truth( "p" ), m.truth( "r" ) ) == plan{ { "a" } } );
    CHECK_FALSE( check_kh( m, m.truth( "p" ), m.truth( "q" ) ) );
    CHECK( check_kh( m, m.none(), m.none() ) == plan{} );
    CHECK( check_kh( m, m.truth( "r" ), m.truth( "r" ) ) == plan{} );
}

TEST_CASE( "check_kh returns the shortest, lexicographically least witness" )
{
    rng g( 22 );
    for ( int i = 0; i < 300; ++i )
    {
        const std::size_t n = 1 + test_support::pick( g, 3 );
        const auto m = test_support::random_model( g, n, { "a", "b" }, props, 0.35 );
        state_set pre( n ), post( n );
        for ( std::size_t s = 0; s < n; ++s )
        {
            pre[ s ] = test_support::pick( g, 2 );
            post[ s ] = test_support::pick( g, 2 );
        }
        // 2^n belief states bound the length of a shortest witness.
        const auto expected = brute_force_kh( m, pre, post, std::size_t{ 1 } << n );
        const auto found = check_kh( m, pre, post );
        REQUIRE( found.has_value() == expected.has_value() );
        if ( found )
        {
            CHECK( *found == *expected );
            CHECK( is_witness( m, *found, pre, post ) );
            CHECK( witness_literal( m, *found, pre, post ) );
        }
    }
}

TEST_CASE( "plan length limit" )
{
    const auto m = load_model( test_support::data_path( "example2_1.json" ) );
    const auto p = m.truth( "p" ), q = m.truth( "q" );
    lts_model chain( { "x", "y", "z" } );
    chain.add_transition( "a", "x", "y" );
    chain.add_transition( "a", "y", "z" );
    chain.set_true( "p", 0 );
    chain.set_true( "q", 2 );
    CHECK( check_kh( chain, chain.truth( "p" ), chain.truth( "q" ) ) == plan{ { "a", "a" } } );
    CHECK_FALSE( check_kh( chain, chain.truth( "p" ), chain.truth( "q" ), { 1 } ) );
    CHECK( check_kh( chain, chain.truth( "p" ), chain.truth( "q" ), { 2 } ) == plan{ { "a", "a" } } );
    CHECK_FALSE( check_kh( m, p, q ) );
}

TEST_CASE( "model checking examples" )
{
    const auto m = load_model( test_support::data_path( "example2_1.json" ) );
    std::map<kh_pair, std::optional<plan>> witnesses;
    CHECK( model_check( m, parse( "Kh(p, r)" ), witnesses ) == m.all() );
    CHECK( witnesses.at( { prop( "p" ), prop( "r" ) } ) == plan{ { "a" } } );
    CHECK( model_check( m, parse( "Kh(p, q)" ) ).none() );
    CHECK( model_check( m, top() ) == m.all() );
    CHECK( model_check( m, parse( "p | q" ) ) == states_of( m, { "s", "u" } ) );
    CHECK( model_check( m, parse( "E q & A (p -> ~q)" ) ) == m.all() );

    const auto mm = load_model( test_support::data_path( "separated_m.json" ) );
    const auto mp = load_model( test_support::data_path( "separated_m_prime.json" ) );
    CHECK( model_check( mm, parse( "Kh(p, q)" ) ) == mm.all() );
    CHECK( model_check( mp, parse( "Kh(p, q)" ) ).none() );
}

TEST_CASE( "subjective formulas are globally true or false" )
{
    rng g( 23 );
    for ( int i = 0; i < 500; ++i )
    {
        const auto m = test_support::random_model( g, 1 + test_support::pick( g, 4 ), { "a", "b" }, props );
        const formula f = test_support::random_subjective( g, props, 3 );
        const auto truth = model_check( m, f );
        CHECK_MESSAGE( ( truth.none() || truth.all() ), to_string( f ) );
    }
}

TEST_CASE( "witness composition and non-emptiness" )
{
    rng g( 24 );
    std::size_t composed = 0;
    for ( int i = 0; i < 400; ++i )
    {
        const auto m = test_support::random_model( g, 1 + test_support::pick( g, 4 ), { "a", "b" }, props, 0.4 );
        const auto a = model_check( m, test_support::random_prop( g, props, 2 ) );
        const auto b = model_check( m, test_support::random_prop( g, props, 2 ) );
        const auto c = model_check( m, test_support::random_prop( g, props, 2 ) );
        const auto ab = check_kh( m, a, b );
        const auto bc = check_kh( m, b, c );
        if ( ab && a.any() )
            CHECK( b.any() );
        if ( ab && bc )
        {
            ++composed;
            CHECK( is_witness( m, ab->then( *bc ), a, c ) );
            CHECK( witness_literal( m, ab->then( *bc ), a, c ) );
        }
    }
    CHECK( composed > 50 );
}

TEST_CASE( "A f agrees with Kh(~f, false)" )
{
    rng g( 25 );
    for ( int i = 0; i < 300; ++i )
    {
        const auto m = test_support::random_model( g, 1 + test_support::pick( g, 4 ), { "a" }, props );
        const formula f = test_support::random_any( g, props, 3, 1 );
        CHECK( model_check( m, universal( f ) ) == model_check( m, kh( neg( f ), bot() ) ) );
    }
}

TEST_CASE( "model JSON" )
{
    const auto m = load_model( test_support::data_path( "example2_1.json" ) );
    CHECK( m.states() == std::vector<std::string>{ "s", "t", "v", "u" } );
    CHECK( m.actions() == std::vector<std::string>{ "a", "b" } );
    const auto back = model_from_json( model_to_json( m ) );
    CHECK( back.states() == m.states() );
    CHECK( model_to_json( back ) == model_to_json( m ) );
    for ( const auto& a : m.actions() )
        CHECK( back.transitions( a ) == m.transitions( a ) );

    auto error_of = []( const std::string& text ) -> std::string {
        try
        {
            model_from_json( text );
        }
        catch ( const input_error& e )
        {
            return e.what();
        }
        return "";
    };
    CHECK( error_of( R"({"states": ["s"], "extra": 1})" ).find( "/extra" ) != std::string::npos );
    CHECK( error_of( R"({"states": ["s"], "relations": {"a": [["s", "x"]]}})" ).find( "/relations/a/0/1" ) !=
           std::string::npos );
    CHECK( error_of( R"({"states": ["s", "s"]})" ).find( "duplicate" ) != std::string::npos );
    CHECK( error_of( R"({"states": []})" ).find( "/states" ) != std::string::npos );
    CHECK( error_of( R"({"states": ["s"], "valuation": {"P": []}})" ).find( "/valuation/P" ) != std::string::npos );
    CHECK( error_of( R"({"states": ["s"],)" ).find( "byte" ) != std::string::npos );
    CHECK_THROWS_AS( load_model( "/nonexistent/model.json" ), input_error );
}

TEST_CASE( "graphviz output" )
{
    const auto m = load_model( test_support::data_path( "example2_1.json" ) );
    const auto dot = model_to_dot( m );
    CHECK( dot.rfind( "digraph", 0 ) == 0 );
    CHECK( dot.find( "label=\"a\"" ) != std::string::npos );
    CHECK( dot.find( "label=\"b\"" ) != std::string::npos );
}
