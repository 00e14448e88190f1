#include "khsat/oracle.hpp"

#include "khsat/errors.hpp"

#include <boost/functional/hash.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace khsat
{

namespace
{

constexpr std::size_t max_oracle_states = 5;

std::string state_label( std::size_t i )
{
    return "s" + std::to_string( i );
}

std::string action_label( std::size_t i )
{
    if ( i >= 26 )
        throw budget_exceeded( "at most 26 oracle actions" );
    return std::string( 1, static_cast<char>( 'a' + i ) );
}

std::uint64_t pow2( std::size_t e )
{
    if ( e >= 63 )
        throw budget_exceeded( "oracle search space overflows 64 bits" );
    return std::uint64_t{ 1 } << e;
}

lts_model build_model( std::size_t n, std::size_t k, const std::vector<std::string>& props, std::uint64_t relations,
                       std::uint64_t valuation )
{
    std::vector<std::string> states;
    for ( std::size_t i = 0; i < n; ++i )
        states.push_back( state_label( i ) );
    lts_model m( std::move( states ) );
    for ( std::size_t a = 0; a < k; ++a )
    {
        const auto name = action_label( a );
        m.declare_action( name );
        for ( std::size_t s = 0; s < n; ++s )
            for ( std::size_t t = 0; t < n; ++t )
                if ( relations >> ( a * n * n + s * n + t ) & 1 )
                    m.add_transition( name, s, t );
    }
    for ( std::size_t i = 0; i < props.size(); ++i )
    {
        m.declare_proposition( props[ i ] );
        for ( std::size_t s = 0; s < n; ++s )
            if ( valuation >> ( i * n + s ) & 1 )
                m.set_true( props[ i ], s );
    }
    return m;
}

// reach[U]: bit S set iff subset S is reachable from U along edges
// V -a-> R_a(V) with V inside dom(a). Kh(pre, post) then holds iff some
// reachable subset lies inside post.
using reach_table = std::vector<std::uint32_t>;

reach_table compute_reach( std::size_t n, std::size_t k, std::uint64_t relations )
{
    const std::size_t subsets = std::size_t{ 1 } << n;
    std::vector<std::vector<std::uint32_t>> image( k, std::vector<std::uint32_t>( subsets, 0 ) );
    std::vector<std::uint32_t> domain( k, 0 );
    for ( std::size_t a = 0; a < k; ++a )
    {
        std::vector<std::uint32_t> succ( n, 0 );
        for ( std::size_t s = 0; s < n; ++s )
        {
            succ[ s ] = static_cast<std::uint32_t>( relations >> ( a * n * n + s * n ) ) & ( ( 1u << n ) - 1 );
            if ( succ[ s ] )
                domain[ a ] |= 1u << s;
        }
        for ( std::size_t u = 1; u < subsets; ++u )
        {
            const std::size_t low = static_cast<std::size_t>( __builtin_ctzll( u ) );
            image[ a ][ u ] = image[ a ][ u & ( u - 1 ) ] | succ[ low ];
        }
    }

    reach_table reach( subsets, 0 );
    std::vector<std::uint32_t> stack;
    for ( std::size_t u = 0; u < subsets; ++u )
    {
        std::uint32_t seen = 1u << u;
        stack.assign( 1, static_cast<std::uint32_t>( u ) );
        while ( !stack.empty() )
        {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for ( std::size_t a = 0; a < k; ++a )
            {
                if ( ( v & ~domain[ a ] ) != 0 )
                    continue;
                const std::uint32_t w = image[ a ][ v ];
                if ( !( seen >> w & 1 ) )
                {
                    seen |= 1u << w;
                    stack.push_back( w );
                }
            }
        }
        reach[ u ] = seen;
    }
    return reach;
}

// kh[U * 2^n + P] holds iff Kh is true for truth sets U and P, that is iff
// some subset reachable from U lies inside P.
using kh_table = std::vector<std::uint64_t>;

kh_table compute_kh( std::size_t n, const reach_table& reach )
{
    const std::size_t subsets = std::size_t{ 1 } << n;
    kh_table out( ( subsets * subsets + 63 ) / 64, 0 );
    for ( std::size_t u = 0; u < subsets; ++u )
        for ( std::size_t p = 0; p < subsets; ++p )
        {
            std::uint32_t inside = 0;
            for ( std::size_t s = 0; s < subsets; ++s )
                if ( ( s & ~p ) == 0 )
                    inside |= 1u << s;
            if ( reach[ u ] & inside )
            {
                const std::size_t bit = u * subsets + p;
                out[ bit / 64 ] |= std::uint64_t{ 1 } << ( bit % 64 );
            }
        }
    return out;
}

// Relation tuples with pairwise distinct Kh tables, in first-occurrence
// order. Truth of any formula depends on the relations only through that
// table, so later duplicates can be skipped without changing which model is
// found first.
struct table_list
{
    std::vector<std::uint64_t> first_relation;
    std::vector<kh_table> tables;
};

std::shared_ptr<const table_list> distinct_tables( std::size_t n, std::size_t k )
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const table_list>> cache;
    std::lock_guard lock( mutex );
    auto& slot = cache[ { n, k } ];
    if ( slot )
        return slot;

    auto list = std::make_shared<table_list>();
    std::unordered_map<reach_table, bool, boost::hash<reach_table>> seen_reach;
    std::unordered_map<kh_table, bool, boost::hash<kh_table>> seen_kh;
    const std::uint64_t count = pow2( k * n * n );
    for ( std::uint64_t r = 0; r < count; ++r )
    {
        auto reach = compute_reach( n, k, r );
        if ( !seen_reach.emplace( reach, true ).second )
            continue;
        auto table = compute_kh( n, reach );
        if ( seen_kh.emplace( table, true ).second )
        {
            list->first_relation.push_back( r );
            list->tables.push_back( std::move( table ) );
        }
    }
    slot = std::move( list );
    return slot;
}

// Desugared formula flattened in post-order over state bitmasks.
struct instruction
{
    op kind;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    std::size_t prop = 0;
    // Depends on the relations.
    bool modal = false;
};

std::size_t compile( const formula& f, const std::vector<std::string>& props, std::vector<instruction>& code )
{
    instruction ins{ f.kind() };
    switch ( f.kind() )
    {
    case op::prop: {
        auto it = std::find( props.begin(), props.end(), f.name() );
        ins.prop = static_cast<std::size_t>( it - props.begin() );
        break;
    }
    case op::top:
    case op::bot:
        break;
    case op::not_:
        ins.lhs = compile( f.lhs(), props, code );
        ins.modal = code[ ins.lhs ].modal;
        break;
    case op::or_:
    case op::and_:
    case op::kh:
        ins.lhs = compile( f.lhs(), props, code );
        ins.rhs = compile( f.rhs(), props, code );
        ins.modal = f.kind() == op::kh || code[ ins.lhs ].modal || code[ ins.rhs ].modal;
        break;
    default:
        throw contract_violation( "oracle expects desugared formulas" );
    }
    code.push_back( ins );
    return code.size() - 1;
}

} // namespace

std::uint64_t oracle_model_count( const oracle_bounds& b )
{
    std::uint64_t total = 0;
    for ( std::size_t n = 1; n <= b.max_states; ++n )
    {
        const std::size_t e = b.max_actions * n * n + n * b.propositions.size();
        const std::uint64_t term = pow2( e );
        if ( total > UINT64_MAX - term )
            throw budget_exceeded( "oracle search space overflows 64 bits" );
        total += term;
    }
    return total;
}

void for_each_model( const oracle_bounds& b, const std::function<bool( const lts_model& )>& visit )
{
    oracle_model_count( b );
    for ( std::size_t n = 1; n <= b.max_states; ++n )
    {
        const std::uint64_t relations = pow2( b.max_actions * n * n );
        const std::uint64_t valuations = pow2( n * b.propositions.size() );
        for ( std::uint64_t r = 0; r < relations; ++r )
            for ( std::uint64_t v = 0; v < valuations; ++v )
                if ( !visit( build_model( n, b.max_actions, b.propositions, r, v ) ) )
                    return;
    }
}

std::optional<lts_model> oracle_sat( const formula& phi, const oracle_bounds& b, const oracle_options& options )
{
    std::vector<std::string> props = b.propositions;
    const auto used = propositions( phi );
    if ( props.empty() )
        props.assign( used.begin(), used.end() );
    for ( const auto& p : used )
        if ( std::find( props.begin(), props.end(), p ) == props.end() )
            throw input_error( "proposition '" + p + "' is outside the oracle bounds" );

    oracle_bounds effective = b;
    effective.propositions = props;
    if ( b.max_states > max_oracle_states )
        throw budget_exceeded( "oracle supports at most " + std::to_string( max_oracle_states ) + " states" );
    if ( oracle_model_count( effective ) > options.budget )
        throw budget_exceeded( "oracle bounds cover " + std::to_string( oracle_model_count( effective ) ) +
                               " models, budget is " + std::to_string( options.budget ) );

    const formula f = desugar( phi );
    std::vector<instruction> code;
    compile( f, props, code );
    const std::size_t width = code.size();
    std::vector<std::size_t> modal_nodes;
    for ( std::size_t i = 0; i < width; ++i )
        if ( code[ i ].modal )
            modal_nodes.push_back( i );

    auto step = [ & ]( std::uint32_t* value, std::size_t i, std::uint32_t full, std::uint64_t v, std::size_t n,
                       const kh_table* kh ) {
        const auto& ins = code[ i ];
        switch ( ins.kind )
        {
        case op::prop:
            value[ i ] = static_cast<std::uint32_t>( v >> ( ins.prop * n ) ) & full;
            break;
        case op::top:
            value[ i ] = full;
            break;
        case op::bot:
            value[ i ] = 0;
            break;
        case op::not_:
            value[ i ] = ~value[ ins.lhs ] & full;
            break;
        case op::or_:
            value[ i ] = value[ ins.lhs ] | value[ ins.rhs ];
            break;
        case op::and_:
            value[ i ] = value[ ins.lhs ] & value[ ins.rhs ];
            break;
        default: {
            const std::size_t bit = ( std::size_t{ value[ ins.lhs ] } << n ) + value[ ins.rhs ];
            value[ i ] = ( ( *kh )[ bit / 64 ] >> ( bit % 64 ) & 1 ) ? full : 0;
            break;
        }
        }
    };

    for ( std::size_t n = 1; n <= b.max_states; ++n )
    {
        const std::uint32_t full = ( 1u << n ) - 1;
        const std::uint64_t valuations = pow2( n * props.size() );

        // Relation-independent nodes, once per valuation.
        std::vector<std::uint32_t> base( valuations * width, 0 );
        for ( std::uint64_t v = 0; v < valuations; ++v )
            for ( std::size_t i = 0; i < width; ++i )
                if ( !code[ i ].modal )
                    step( &base[ v * width ], i, full, v, n, nullptr );

        const auto list = distinct_tables( n, b.max_actions );
        std::vector<std::uint32_t> value( width );
        for ( std::size_t t = 0; t < list->tables.size(); ++t )
        {
            for ( std::uint64_t v = 0; v < valuations; ++v )
            {
                std::copy_n( &base[ v * width ], width, value.data() );
                for ( auto i : modal_nodes )
                    step( value.data(), i, full, v, n, &list->tables[ t ] );
                if ( value.back() == 0 )
                    continue;
                auto m = build_model( n, b.max_actions, props, list->first_relation[ t ], v );
                if ( model_check( m, phi ).none() )
                    throw soundness_error( "oracle evaluation disagrees with the model checker on " +
                                           to_string( phi ) );
                return m;
            }
        }
    }
    return std::nullopt;
}

} // namespace khsat
