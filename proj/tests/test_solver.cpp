#include "khsat/errors.hpp"
#include "khsat/oracle.hpp"
#include "khsat/parser.hpp"
#include "khsat/solver.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace khsat;
using test_support::rng;

namespace
{

const std::vector<std::string> props{ "p", "q", "r" };

std::vector<branch> leaves( const formula& phi )
{
    std::vector<branch> out;
    branch_atoms( desugar( phi ), [ & ]( const branch& b ) {
        out.push_back( b );
        return true;
    } );
    return out;
}

bool global_truth( const lts_model& m, const kh_pair& a )
{
    return model_check( m, kh( a.pre, a.post ) ).any();
}

} // namespace

TEST_CASE( "the worked example" )
{
    const formula phi = parse( "Kh(p & q, r & t) | Kh(p, r)" );
    const auto v = decide( phi );
    REQUIRE( v.satisfiable() );
    const auto& w = *v.sat;
    CHECK( w.leaf.positives == std::vector<kh_pair>{ { parse( "p & q" ), parse( "r & t" ) } } );
    CHECK( w.leaf.negatives == std::vector<kh_pair>{ { prop( "p" ), prop( "r" ) } } );
    CHECK( w.leaf.phi_cur == parse( "true | false" ) );
    CHECK( w.disjunct.d.pairs() == std::vector<index_pair>{ { 0, 0 } } );
    CHECK( w.disjunct.d.closure_pairs() == std::vector<index_pair>{ { 0, 0 } } );
    CHECK( verify( w, phi ) );
    for ( const auto& [ index, p ] : w.witnesses )
    {
        const auto& atom = w.leaf.positives.at( index - 1 );
        CHECK( is_witness( w.model, p, model_check( w.model, atom.pre ), model_check( w.model, atom.post ) ) );
        CHECK( p.empty() == w.k_set.contains( index - 1 ) );
    }
}

TEST_CASE( "leaf enumeration" )
{
    const auto plain = leaves( parse( "p & ~q" ) );
    REQUIRE( plain.size() == 1 );
    CHECK( plain[ 0 ].positives.empty() );
    CHECK( plain[ 0 ].residue() == kh_pair{ parse( "p & ~q" ), bot() } );

    const auto one = leaves( parse( "Kh(p, q)" ) );
    REQUIRE( one.size() == 2 );
    CHECK( one[ 0 ].positives.empty() );
    CHECK( one[ 0 ].phi_cur == bot() );
    CHECK( one[ 1 ].positives.size() == 1 );
    CHECK( one[ 1 ].phi_cur == top() );
    CHECK( one[ 1 ].conjunction().negatives.size() == 1 );

    // Stopping early.
    std::size_t seen = 0;
    branch_atoms( desugar( parse( "Kh(p,q) | Kh(q,r) | Kh(r,p)" ) ), [ & ]( const branch& ) { return ++seen < 3; } );
    CHECK( seen == 3 );

    rng g( 61 );
    for ( int i = 0; i < 200; ++i )
    {
        const formula f = desugar( test_support::random_any( g, props, 4, 2 ) );
        const auto all = leaves( f );
        for ( std::size_t k = 1; k < all.size(); ++k )
            CHECK( all[ k - 1 ].positives.size() <= all[ k ].positives.size() );
        for ( const auto& b : all )
        {
            CHECK( kh_subterms( b.phi_cur ).empty() );
            CHECK( b.decisions.size() == b.positives.size() + b.negatives.size() );
        }
    }
}

TEST_CASE( "exactly one leaf matches a model and carries its truth set" )
{
    rng g( 62 );
    for ( int i = 0; i < 300; ++i )
    {
        const formula f = test_support::random_any( g, props, 4, 2 );
        const auto m = test_support::random_model( g, 1 + test_support::pick( g, 4 ), { "a", "b" }, props, 0.4 );
        std::size_t matching = 0;
        for ( const auto& b : leaves( f ) )
        {
            bool agrees = true;
            for ( const auto& [ atom, value ] : b.decisions )
                agrees = agrees && global_truth( m, atom ) == value;
            if ( !agrees )
                continue;
            ++matching;
            CHECK_MESSAGE( model_check( m, f ) == model_check( m, b.phi_cur ), to_string( f ) );
        }
        CHECK( matching == 1 );
    }
}

TEST_CASE( "unsatisfiable inputs" )
{
    for ( const char* text : { "Kh(p, q) & Kh(q, r) & ~Kh(p, r)", "p & ~p", "A p & E ~p", "Kh(p, false) & p",
                               "~Kh(p, p)", "false" } )
    {
        const auto v = decide( parse( text ) );
        CHECK_MESSAGE( !v.satisfiable(), text );
        CHECK( v.stats.branches >= 1 );
    }
    const auto v = decide( parse( "Kh(p, q) & Kh(q, r) & ~Kh(p, r)" ) );
    CHECK( v.stats.branches == 8 );
}

TEST_CASE( "extraction" )
{
    // Empty precondition: epsilon witness and no transitions.
    const formula phi = parse( "Kh(p, q) & A ~p" );
    const auto v = decide( phi );
    REQUIRE( v.satisfiable() );
    // A ~p is itself the positive atom Kh(~~p, false), so both preconditions
    // are empty.
    const auto& positives = v.sat->leaf.positives;
    REQUIRE( positives.size() == 2 );
    CHECK( v.sat->k_set == std::set<std::size_t>{ 0, 1 } );
    for ( std::size_t l = 1; l <= 2; ++l )
    {
        CHECK( v.sat->witnesses.at( l ).empty() );
        CHECK( v.sat->model.transitions( action_name( l ) ).empty() );
    }

    // Only negatives: no actions at all.
    const auto neg_only = decide( parse( "~Kh(p, q) & ~Kh(q, r)" ) );
    REQUIRE( neg_only.satisfiable() );
    CHECK( neg_only.sat->model.actions().empty() );
    CHECK( neg_only.sat->witnesses.empty() );

    // Hand-built S5 model: pre_1 = {w0}, post_1 = {w1}.
    s5_model s5;
    s5.states = { "w0", "w1" };
    s5.valuation.emplace( "p", state_set( 2, 1 ) );
    s5.valuation.emplace( "q", state_set( 2, 2 ) );
    atom_conjunction c;
    c.positives.push_back( { prop( "p" ), prop( "q" ) } );
    c.positives.push_back( { parse( "p & q" ), bot() } );
    const auto [ m, witnesses ] = extract_lts( s5, c );
    CHECK( m.transitions( "act1" ) == std::vector<std::pair<std::size_t, std::size_t>>{ { 0, 1 } } );
    CHECK( witnesses.at( 1 ) == plan{ { "act1" } } );
    CHECK( witnesses.at( 2 ).empty() );
    CHECK( model_check( m, c.to_formula() ).all() );
}

TEST_CASE( "verify rejects a damaged model" )
{
    const formula phi = parse( "Kh(p, q) & E p & E ~q" );
    const auto v = decide( phi );
    REQUIRE( v.satisfiable() );
    auto w = *v.sat;
    CHECK( verify( w, phi ) );
    REQUIRE( w.witnesses.at( 1 ) == plan{ { action_name( 1 ) } } );
    w.model.remove_action( action_name( 1 ) );
    CHECK_FALSE( verify( w, phi ) );

    auto bad_index = *v.sat;
    bad_index.witnesses.emplace( 7, plan{} );
    CHECK_FALSE( verify( bad_index, phi ) );

    auto wrong_formula = *v.sat;
    CHECK_FALSE( verify( wrong_formula, parse( "A ~p" ) ) );
}

TEST_CASE( "global-only inputs agree with the S5 procedure" )
{
    rng g( 63 );
    for ( int i = 0; i < 300; ++i )
    {
        std::vector<global_atom> atoms;
        std::vector<formula> parts;
        const std::size_t count = 1 + test_support::pick( g, 4 );
        for ( std::size_t k = 0; k < count; ++k )
        {
            const auto body = test_support::random_prop( g, props, 2 );
            atoms.push_back( test_support::pick( g, 2 ) ? some_of( body ) : all_of( body ) );
            parts.push_back( atoms.back().to_formula() );
        }
        CHECK( decide( conj_all( parts ) ).satisfiable() == s5_sat( atoms ).has_value() );
    }
}

TEST_CASE( "A f and Kh(~f, false) get the same verdict" )
{
    rng g( 64 );
    for ( int i = 0; i < 200; ++i )
    {
        const auto f = test_support::random_any( g, props, 3, 1 );
        const auto ctx = test_support::random_subjective( g, props, 1 );
        CHECK( decide( conj( universal( f ), ctx ) ).satisfiable() ==
               decide( conj( kh( neg( f ), bot() ), ctx ) ).satisfiable() );
    }
}

TEST_CASE( "options do not change verdicts" )
{
    rng g( 65 );
    solver_options no_seed, no_prune;
    no_seed.enumeration.seed_from_model = false;
    no_prune.enumeration.prune = false;
    no_prune.enumeration.seed_from_model = false;
    for ( int i = 0; i < 150; ++i )
    {
        const auto f = test_support::random_subjective( g, props, 2 );
        const bool expected = decide( f ).satisfiable();
        CHECK( decide( f, no_seed ).satisfiable() == expected );
        // Without pruning the count grows with 2^(|J|·|C|); keep it small.
        const auto small = test_support::random_subjective( g, props, 1 );
        CHECK( decide( small, no_prune ).satisfiable() == decide( small ).satisfiable() );
    }
}

TEST_CASE( "models stay small and oracle models are never missed" )
{
    rng g( 66 );
    const oracle_bounds bounds{ 2, 2, props };
    std::size_t sat = 0;
    for ( int i = 0; i < 200; ++i )
    {
        const auto f = test_support::random_any( g, props, 3, 2 );
        const auto v = decide( f );
        if ( v.satisfiable() )
        {
            ++sat;
            const std::size_t n = f.size();
            CHECK( v.sat->model.size() <= 3 * n * n * n + 1 );
            CHECK( v.sat->model.size() <= v.sat->disjunct.e_atoms.size() + 1 );
        }
        else
            CHECK_MESSAGE( !oracle_sat( f, bounds ), to_string( f ) );
    }
    CHECK( sat > 50 );
}
