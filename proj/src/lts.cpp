#include "khsat/lts.hpp"

#include "khsat/errors.hpp"

#include <deque>
#include <unordered_map>

namespace khsat
{

plan plan::slice( std::size_t i, std::size_t j ) const
{
    if ( j < i )
        return {};
    if ( i < 1 || j > size() )
        throw std::out_of_range( "plan slice out of range" );
    return plan{ std::vector<std::string>( _actions.begin() + static_cast<std::ptrdiff_t>( i - 1 ),
                                           _actions.begin() + static_cast<std::ptrdiff_t>( j ) ) };
}

plan plan::then( const plan& other ) const
{
    auto actions = _actions;
    actions.insert( actions.end(), other._actions.begin(), other._actions.end() );
    return plan{ std::move( actions ) };
}

std::string to_string( const plan& p )
{
    if ( p.empty() )
        return "ε";
    std::string out;
    for ( const auto& a : p.actions() )
    {
        if ( !out.empty() )
            out += ' ';
        out += a;
    }
    return out;
}

lts_model::lts_model( std::vector<std::string> states ) : _states{ std::move( states ) }
{
    if ( _states.empty() )
        throw input_error( "a model needs at least one state" );
    for ( std::size_t i = 0; i < _states.size(); ++i )
        if ( !_index.emplace( _states[ i ], i ).second )
            throw input_error( "duplicate state '" + _states[ i ] + "'" );
    _empty = state_set( _states.size() );
}

std::optional<std::size_t> lts_model::index_of( std::string_view state ) const
{
    auto it = _index.find( state );
    if ( it == _index.end() )
        return std::nullopt;
    return it->second;
}

void lts_model::check_state( std::size_t i ) const
{
    if ( i >= size() )
        throw input_error( "state index " + std::to_string( i ) + " out of range" );
}

void lts_model::declare_action( const std::string& action )
{
    auto [ it, inserted ] = _relations.try_emplace( action );
    if ( inserted )
    {
        it->second.successors.assign( size(), state_set( size() ) );
        it->second.domain = state_set( size() );
    }
}

void lts_model::add_transition( const std::string& action, std::size_t src, std::size_t dst )
{
    check_state( src );
    check_state( dst );
    declare_action( action );
    auto& rel = _relations.find( action )->second;
    rel.successors[ src ].set( dst );
    rel.domain.set( src );
}

void lts_model::add_transition( const std::string& action, std::string_view src, std::string_view dst )
{
    auto s = index_of( src );
    auto t = index_of( dst );
    if ( !s )
        throw input_error( "unknown state '" + std::string( src ) + "'" );
    if ( !t )
        throw input_error( "unknown state '" + std::string( dst ) + "'" );
    add_transition( action, *s, *t );
}

void lts_model::remove_action( const std::string& action )
{
    auto it = _relations.find( action );
    if ( it != _relations.end() )
        _relations.erase( it );
}

void lts_model::declare_proposition( const std::string& p )
{
    _valuation.try_emplace( p, state_set( size() ) );
}

void lts_model::set_true( const std::string& p, std::size_t state )
{
    check_state( state );
    declare_proposition( p );
    _valuation.find( p )->second.set( state );
}

void lts_model::set_truth( const std::string& p, state_set states )
{
    if ( states.size() != size() )
        throw input_error( "valuation of '" + p + "' has the wrong width" );
    _valuation[ p ] = std::move( states );
}

std::vector<std::string> lts_model::actions() const
{
    std::vector<std::string> out;
    for ( const auto& [ name, rel ] : _relations )
        out.push_back( name );
    return out;
}

std::vector<std::string> lts_model::propositions() const
{
    std::vector<std::string> out;
    for ( const auto& [ name, set ] : _valuation )
        out.push_back( name );
    return out;
}

bool lts_model::has_action( const std::string& action ) const
{
    return _relations.contains( action );
}

state_set lts_model::image( const std::string& action, const state_set& from ) const
{
    state_set out( size() );
    auto it = _relations.find( action );
    if ( it == _relations.end() )
        return out;
    for ( auto s = from.find_first(); s != state_set::npos; s = from.find_next( s ) )
        out |= it->second.successors[ s ];
    return out;
}

state_set lts_model::domain( const std::string& action ) const
{
    auto it = _relations.find( action );
    return it == _relations.end() ? _empty : it->second.domain;
}

const state_set& lts_model::successors( const std::string& action, std::size_t state ) const
{
    check_state( state );
    auto it = _relations.find( action );
    return it == _relations.end() ? _empty : it->second.successors[ state ];
}

state_set lts_model::truth( const std::string& p ) const
{
    auto it = _valuation.find( p );
    return it == _valuation.end() ? _empty : it->second;
}

std::vector<std::pair<std::size_t, std::size_t>> lts_model::transitions( const std::string& action ) const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    auto it = _relations.find( action );
    if ( it == _relations.end() )
        return out;
    for ( std::size_t s = 0; s < size(); ++s )
    {
        const auto& succ = it->second.successors[ s ];
        for ( auto t = succ.find_first(); t != state_set::npos; t = succ.find_next( t ) )
            out.emplace_back( s, t );
    }
    return out;
}

state_set apply_plan( const lts_model& m, const plan& p, const state_set& from )
{
    state_set current = from;
    for ( const auto& a : p.actions() )
        current = m.image( a, current );
    return current;
}

state_set strongly_executable( const lts_model& m, const plan& p )
{
    // For a single start state the reachable set after i steps is
    // R_{pi[1:i]}(s); it must lie inside the domain of the next action.
    state_set out( m.size() );
    for ( std::size_t s = 0; s < m.size(); ++s )
    {
        state_set current( m.size() );
        current.set( s );
        bool ok = true;
        for ( const auto& a : p.actions() )
        {
            if ( !current.is_subset_of( m.domain( a ) ) )
            {
                ok = false;
                break;
            }
            current = m.image( a, current );
        }
        if ( ok )
            out.set( s );
    }
    return out;
}

bool is_witness( const lts_model& m, const plan& p, const state_set& pre, const state_set& post )
{
    return pre.is_subset_of( strongly_executable( m, p ) ) && apply_plan( m, p, pre ).is_subset_of( post );
}

std::optional<plan> check_kh( const lts_model& m, const state_set& pre, const state_set& post,
                              const kh_search_options& options )
{
    if ( pre.none() || pre.is_subset_of( post ) )
        return plan{};

    const auto actions = m.actions();
    std::vector<state_set> domains;
    for ( const auto& a : actions )
        domains.push_back( m.domain( a ) );

    struct visit
    {
        std::size_t parent;
        std::size_t action;
        std::size_t depth;
    };
    // Node 0 is `pre`. FIFO order with sorted action expansion reaches every
    // subset first along its shortest, lexicographically least plan.
    std::vector<visit> nodes{ { 0, 0, 0 } };
    std::vector<state_set> sets{ pre };
    std::unordered_map<state_set, std::size_t> seen{ { pre, 0 } };
    std::deque<std::size_t> queue{ 0 };

    auto rebuild = [ & ]( std::size_t node ) {
        std::vector<std::string> path;
        for ( ; node != 0; node = nodes[ node ].parent )
            path.push_back( actions[ nodes[ node ].action ] );
        return plan{ { path.rbegin(), path.rend() } };
    };

    while ( !queue.empty() )
    {
        const std::size_t u = queue.front();
        queue.pop_front();
        if ( sets[ u ].is_subset_of( post ) )
            return rebuild( u );
        if ( options.max_length && nodes[ u ].depth >= *options.max_length )
            continue;
        for ( std::size_t a = 0; a < actions.size(); ++a )
        {
            if ( !sets[ u ].is_subset_of( domains[ a ] ) )
                continue;
            state_set next = m.image( actions[ a ], sets[ u ] );
            if ( seen.contains( next ) )
                continue;
            const std::size_t id = nodes.size();
            seen.emplace( next, id );
            nodes.push_back( { u, a, nodes[ u ].depth + 1 } );
            sets.push_back( std::move( next ) );
            queue.push_back( id );
        }
    }
    return std::nullopt;
}

namespace
{

state_set evaluate( const lts_model& m, const formula& f, std::map<kh_pair, std::optional<plan>>* witnesses,
                    const kh_search_options& options )
{
    switch ( f.kind() )
    {
    case op::prop:
        return m.truth( f.name() );
    case op::top:
        return m.all();
    case op::bot:
        return m.none();
    case op::not_:
        return ~evaluate( m, f.lhs(), witnesses, options );
    case op::or_:
        return evaluate( m, f.lhs(), witnesses, options ) | evaluate( m, f.rhs(), witnesses, options );
    case op::and_:
        return evaluate( m, f.lhs(), witnesses, options ) & evaluate( m, f.rhs(), witnesses, options );
    case op::implies:
        return ~evaluate( m, f.lhs(), witnesses, options ) | evaluate( m, f.rhs(), witnesses, options );
    case op::iff: {
        auto a = evaluate( m, f.lhs(), witnesses, options );
        auto b = evaluate( m, f.rhs(), witnesses, options );
        return ~( a ^ b );
    }
    case op::kh: {
        auto pre = evaluate( m, f.lhs(), witnesses, options );
        auto post = evaluate( m, f.rhs(), witnesses, options );
        auto w = check_kh( m, pre, post, options );
        const bool holds = w.has_value();
        if ( witnesses )
            ( *witnesses )[ { f.lhs(), f.rhs() } ] = std::move( w );
        return holds ? m.all() : m.none();
    }
    case op::all:
        return evaluate( m, f.lhs(), witnesses, options ).all() ? m.all() : m.none();
    case op::some:
        return evaluate( m, f.lhs(), witnesses, options ).any() ? m.all() : m.none();
    }
    return m.none();
}

} // namespace

state_set model_check( const lts_model& m, const formula& f, const kh_search_options& options )
{
    return evaluate( m, f, nullptr, options );
}

state_set model_check( const lts_model& m, const formula& f, std::map<kh_pair, std::optional<plan>>& witnesses,
                       const kh_search_options& options )
{
    return evaluate( m, f, &witnesses, options );
}

} // namespace khsat
