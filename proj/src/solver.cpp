#include "khsat/solver.hpp"

#include "khsat/errors.hpp"

#include <set>

namespace khsat
{

atom_conjunction branch::conjunction() const
{
    atom_conjunction out{ positives, negatives };
    out.negatives.push_back( residue() );
    return out;
}

namespace
{

// Depth-first walk restricted to leaves with exactly `level` positives.
// Returns false once the visitor asks to stop.
bool walk( branch& b, std::size_t level, bool& truncated, const std::function<bool( const branch& )>& visit )
{
    auto atom = find_positive_atom( b.phi_cur );
    if ( !atom )
        return b.positives.size() != level || visit( b );

    const formula saved = b.phi_cur;
    if ( b.positives.size() < level )
    {
        b.phi_cur = substitute_atom( saved, *atom, top() );
        b.positives.push_back( *atom );
        b.decisions.emplace_back( *atom, true );
        const bool go_on = walk( b, level, truncated, visit );
        b.decisions.pop_back();
        b.positives.pop_back();
        if ( !go_on )
            return false;
    }
    else
        truncated = true;

    b.phi_cur = substitute_atom( saved, *atom, bot() );
    b.negatives.push_back( *atom );
    b.decisions.emplace_back( *atom, false );
    const bool go_on = walk( b, level, truncated, visit );
    b.decisions.pop_back();
    b.negatives.pop_back();
    b.phi_cur = saved;
    return go_on;
}

} // namespace

void branch_atoms( const formula& phi, const std::function<bool( const branch& )>& visit )
{
    for ( std::size_t level = 0;; ++level )
    {
        branch b{ phi, {}, {}, {} };
        bool truncated = false;
        if ( !walk( b, level, truncated, visit ) || !truncated )
            return;
    }
}

std::string action_name( std::size_t index )
{
    return "act" + std::to_string( index );
}

std::pair<lts_model, std::map<std::size_t, plan>> extract_lts( const s5_model& s5, const atom_conjunction& conj )
{
    lts_model m = s5.to_lts();
    std::map<std::size_t, plan> witnesses;
    for ( std::size_t l = 0; l < conj.positives.size(); ++l )
    {
        const auto name = action_name( l + 1 );
        m.declare_action( name );
        const state_set pre = s5.truth( conj.positives[ l ].pre );
        if ( pre.none() )
        {
            witnesses.emplace( l + 1, plan{} );
            continue;
        }
        const state_set post = s5.truth( conj.positives[ l ].post );
        for ( auto s = pre.find_first(); s != state_set::npos; s = pre.find_next( s ) )
            for ( auto t = post.find_first(); t != state_set::npos; t = post.find_next( t ) )
                m.add_transition( name, s, t );
        witnesses.emplace( l + 1, plan{ { name } } );
    }
    return { std::move( m ), std::move( witnesses ) };
}

bool verify( const sat_witness& w, const formula& phi )
{
    if ( model_check( w.model, phi ).none() )
        return false;
    const auto& positives = w.leaf.positives;
    for ( const auto& [ index, p ] : w.witnesses )
    {
        if ( index < 1 || index > positives.size() )
            return false;
        const auto& atom = positives[ index - 1 ];
        if ( !is_witness( w.model, p, model_check( w.model, atom.pre ), model_check( w.model, atom.post ) ) )
            return false;
    }
    return true;
}

verdict decide( const formula& phi, const solver_options& options )
{
    const formula f = desugar( phi );
    sat_cache cache( options.sat );
    verdict out;

    using leaf_key = std::pair<std::set<kh_pair>, std::set<kh_pair>>;
    std::set<leaf_key> refuted;

    branch_atoms( f, [ & ]( const branch& leaf ) {
        ++out.stats.branches;
        const atom_conjunction conj = leaf.conjunction();
        leaf_key key{ { conj.positives.begin(), conj.positives.end() },
                      { conj.negatives.begin(), conj.negatives.end() } };
        if ( refuted.contains( key ) )
        {
            ++out.stats.leaves_memoized;
            return true;
        }

        disjunct_enumerator disjuncts( conj, options.enumeration, &cache );
        while ( auto d = disjuncts.next() )
        {
            ++out.stats.s5_calls;
            auto s5 = s5_sat( d->atoms(), &cache );
            if ( !s5 )
                continue;

            auto [ model, witnesses ] = extract_lts( *s5, conj );
            std::set<std::size_t> k_set;
            for ( std::size_t k = 0; k < conj.positives.size(); ++k )
                if ( s5->truth( conj.positives[ k ].pre ).none() )
                    k_set.insert( k );
            branch kept = leaf;
            sat_witness w{ std::move( model ), std::move( witnesses ), std::move( kept ), *d, std::move( *s5 ),
                           std::move( k_set ) };
            out.stats.disjuncts += disjuncts.examined();
            out.stats.relations += disjuncts.relations_tried();
            if ( disjuncts.seeded() )
            {
                ++out.stats.seeded;
                if ( d->from_seed )
                    ++out.stats.seed_hits;
            }
            if ( !verify( w, phi ) )
                throw soundness_error( "extracted model does not satisfy " + to_string( phi ) );
            out.sat = std::move( w );
            return false;
        }
        out.stats.disjuncts += disjuncts.examined();
        out.stats.relations += disjuncts.relations_tried();
        if ( disjuncts.seeded() )
            ++out.stats.seeded;
        refuted.insert( std::move( key ) );
        return true;
    } );

    out.stats.sat_queries = cache.queries();
    out.stats.sat_misses = cache.misses();
    return out;
}

} // namespace khsat
