#include "khsat/translate.hpp"

#include "khsat/errors.hpp"

namespace khsat
{

formula theta_plus( std::span<const kh_pair> positives )
{
    std::vector<formula> parts;
    for ( const auto& [ pre, post ] : positives )
        parts.push_back( disj( universal( neg( pre ) ), existential( post ) ) );
    return conj_all( parts );
}

formula theta_minus( std::span<const kh_pair> negatives )
{
    std::vector<formula> parts;
    for ( const auto& [ pre, post ] : negatives )
        parts.push_back( existential( conj( pre, neg( post ) ) ) );
    return conj_all( parts );
}

d_relation::d_relation( std::size_t n, std::vector<bool> pairs ) : _n{ n }, _pairs{ std::move( pairs ) }
{
    if ( _pairs.size() != n * n )
        throw contract_violation( "D must be an n×n relation" );
    _closure.assign( n * n, false );
    for ( std::size_t s = 0; s < n; ++s )
        for ( std::size_t t = 0; t < n; ++t )
            _closure[ s * n + t ] = s == t || !_pairs[ s * n + t ];
    for ( std::size_t k = 0; k < n; ++k )
        for ( std::size_t i = 0; i < n; ++i )
            if ( _closure[ i * n + k ] )
                for ( std::size_t j = 0; j < n; ++j )
                    if ( _closure[ k * n + j ] )
                        _closure[ i * n + j ] = true;
}

std::vector<index_pair> d_relation::pairs() const
{
    std::vector<index_pair> out;
    for ( std::size_t t = 0; t < _n; ++t )
        for ( std::size_t s = 0; s < _n; ++s )
            if ( contains( t, s ) )
                out.emplace_back( t, s );
    return out;
}

std::vector<index_pair> d_relation::closure_pairs() const
{
    std::vector<index_pair> out;
    for ( std::size_t s = 0; s < _n; ++s )
        for ( std::size_t t = 0; t < _n; ++t )
            if ( in_closure( s, t ) )
                out.emplace_back( s, t );
    return out;
}

d_relation closure_complement( std::size_t n, std::span<const index_pair> d )
{
    std::vector<bool> bits( n * n, false );
    for ( auto [ t, s ] : d )
    {
        if ( t >= n || s >= n )
            throw contract_violation( "pair (" + std::to_string( t + 1 ) + "," + std::to_string( s + 1 ) +
                                      ") outside I×I" );
        bits[ t * n + s ] = true;
    }
    return d_relation( n, std::move( bits ) );
}

formula theta_constraint::to_formula() const
{
    return second ? disj( first.to_formula(), second->to_formula() ) : first.to_formula();
}

namespace
{

formula and_not( const formula& a, const formula& b )
{
    return conj( a, neg( b ) );
}

} // namespace

std::vector<theta_constraint> theta_d( const atom_conjunction& conj, const d_relation& d )
{
    const auto& pos = conj.positives;
    if ( d.n() != pos.size() )
        throw contract_violation( "D is over " + std::to_string( d.n() ) + " indices but there are " +
                                  std::to_string( pos.size() ) + " positive atoms" );
    std::vector<theta_constraint> out;
    for ( auto [ t, s ] : d.pairs() )
        out.push_back( { some_of( and_not( pos[ t ].post, pos[ s ].pre ) ), std::nullopt } );
    const auto closure = d.closure_pairs();
    for ( const auto& neg_atom : conj.negatives )
        for ( auto [ s, t ] : closure )
            out.push_back( { some_of( and_not( neg_atom.pre, pos[ s ].pre ) ),
                             some_of( and_not( pos[ t ].post, neg_atom.post ) ) } );
    return out;
}

std::vector<global_atom> theta_disjunct::atoms() const
{
    auto out = a_atoms;
    out.insert( out.end(), e_atoms.begin(), e_atoms.end() );
    return out;
}

// {{{ disjunct_enumerator

disjunct_enumerator::disjunct_enumerator( atom_conjunction conj, enumeration_options options, sat_cache* cache )
        : _conj{ std::move( conj ) }, _options{ options }, _cache{ cache ? cache : &_own_cache }
{
}

std::size_t disjunct_enumerator::add_body( formula f )
{
    _bodies.push_back( std::move( f ) );
    return _bodies.size() - 1;
}

void disjunct_enumerator::start()
{
    _started = true;
    const auto& pos = _conj.positives;
    const auto& negs = _conj.negatives;
    _ni = pos.size();
    _nj = negs.size();
    if ( _ni >= 63 )
        throw budget_exceeded( "too many positive atoms to enumerate A/E choices" );
    _mask_count = std::uint64_t{ 1 } << _ni;

    for ( std::size_t i = 0; i < _ni; ++i )
        _post_body.push_back( add_body( pos[ i ].post ) );
    for ( std::size_t j = 0; j < _nj; ++j )
        _neg_body.push_back( add_body( and_not( negs[ j ].pre, negs[ j ].post ) ) );
    for ( std::size_t t = 0; t < _ni; ++t )
        for ( std::size_t s = 0; s < _ni; ++s )
            _d_body.push_back( add_body( and_not( pos[ t ].post, pos[ s ].pre ) ) );
    for ( std::size_t j = 0; j < _nj; ++j )
        for ( std::size_t s = 0; s < _ni; ++s )
            _left_body.push_back( add_body( and_not( negs[ j ].pre, pos[ s ].pre ) ) );
    for ( std::size_t t = 0; t < _ni; ++t )
        for ( std::size_t j = 0; j < _nj; ++j )
            _right_body.push_back( add_body( and_not( pos[ t ].post, negs[ j ].post ) ) );

    if ( _options.prune )
    {
        for ( std::uint64_t mask = 0; mask < _mask_count; ++mask )
            if ( allowed_mask( mask ) && base_feasible( mask ) )
                _feasible_masks.push_back( mask );
        // Every disjunct contains theta+ and theta- choices; none survive.
        if ( _feasible_masks.empty() )
        {
            _examined = _mask_count;
            _done = true;
            return;
        }
        // Under a fixed mask every E atom is checked on its own against
        // alpha, so a larger D only adds D atoms and removes closure
        // constraints. The largest D allowed by the mask, every pair whose
        // E(post_t & ~pre_s) survives alpha, is therefore the one to test:
        // if it fails for every mask no D succeeds. Pairs allowed by no mask
        // never occur in a surviving disjunct and are left out of the
        // enumeration.
        std::vector<bool> any_allows( _ni * _ni, false );
        bool some_mask_succeeds = false;
        for ( auto mask : _feasible_masks )
        {
            std::vector<bool> largest( _ni * _ni, false );
            for ( std::size_t k = 0; k < _ni * _ni; ++k )
                if ( sat_under( mask, _d_body[ k ] ) )
                    largest[ k ] = any_allows[ k ] = true;
            if ( !some_mask_succeeds )
                some_mask_succeeds = closure_choices_for( mask, d_relation( _ni, largest ).closure_pairs() ).has_value();
        }
        if ( !some_mask_succeeds )
        {
            _examined = _mask_count;
            _done = true;
            return;
        }
        for ( std::size_t k = 0; k < _ni * _ni; ++k )
            if ( any_allows[ k ] )
                _pair_universe.push_back( k );

        if ( _options.seed_from_model )
        {
            const std::uint64_t mask = _feasible_masks.front();
            std::vector<global_atom> atoms;
            for ( std::size_t i = 0; i < _ni; ++i )
                atoms.push_back( mask >> i & 1 ? all_of( neg( pos[ i ].pre ) ) : some_of( pos[ i ].post ) );
            for ( std::size_t j = 0; j < _nj; ++j )
                atoms.push_back( some_of( _bodies[ _neg_body[ j ] ] ) );
            if ( auto model = s5_sat( atoms, _cache ) )
            {
                std::vector<bool> bits( _ni * _ni, false );
                for ( std::size_t t = 0; t < _ni; ++t )
                    for ( std::size_t s = 0; s < _ni; ++s )
                        bits[ t * _ni + s ] = !model->truth( pos[ t ].post ).is_subset_of( model->truth( pos[ s ].pre ) );
                _seed = d_relation( _ni, std::move( bits ) );
                _seed_pending = true;
            }
        }
    }

    else
        for ( std::size_t k = 0; k < _ni * _ni; ++k )
            _pair_universe.push_back( k );

    if ( !advance_relation() )
        _done = true;
}

bool disjunct_enumerator::allowed_mask( std::uint64_t mask ) const
{
    if ( _options.mutation == translate_mutation::never_eventual_post )
        return mask == _mask_count - 1;
    return true;
}

bool disjunct_enumerator::sat_under( std::uint64_t mask, std::size_t body )
{
    auto [ it, inserted ] = _masks.try_emplace( mask );
    auto& state = it->second;
    if ( inserted )
    {
        std::vector<formula> parts;
        for ( std::size_t i = 0; i < _ni; ++i )
            if ( mask >> i & 1 )
                parts.push_back( neg( _conj.positives[ i ].pre ) );
        state.alpha = conj_all( parts );
        state.memo.assign( _bodies.size(), -1 );
    }
    if ( body == _bodies.size() )
    {
        if ( state.alpha_sat < 0 )
            state.alpha_sat = _cache->solve( state.alpha ).has_value() ? 1 : 0;
        return state.alpha_sat == 1;
    }
    auto& slot = state.memo[ body ];
    if ( slot < 0 )
    {
        const formula query = mask == 0 ? _bodies[ body ] : conj( _bodies[ body ], state.alpha );
        slot = _cache->solve( query ).has_value() ? 1 : 0;
    }
    return slot == 1;
}

bool disjunct_enumerator::base_feasible( std::uint64_t mask )
{
    // Index one past the last body stands for alpha itself.
    if ( !sat_under( mask, _bodies.size() ) )
        return false;
    for ( std::size_t i = 0; i < _ni; ++i )
        if ( !( mask >> i & 1 ) && !sat_under( mask, _post_body[ i ] ) )
            return false;
    for ( std::size_t j = 0; j < _nj; ++j )
        if ( !sat_under( mask, _neg_body[ j ] ) )
            return false;
    return true;
}

std::optional<std::vector<bool>> disjunct_enumerator::closure_choices_for( std::uint64_t mask,
                                                                          const std::vector<index_pair>& closure )
{
    std::vector<bool> right;
    if ( _options.mutation == translate_mutation::drop_closure_constraints )
        return right;
    for ( std::size_t j = 0; j < _nj; ++j )
        for ( auto [ s, t ] : closure )
        {
            if ( sat_under( mask, _left_body[ j * _ni + s ] ) )
                right.push_back( false );
            else if ( sat_under( mask, _right_body[ t * _nj + j ] ) )
                right.push_back( true );
            else
                return std::nullopt;
        }
    return right;
}

bool disjunct_enumerator::next_combination()
{
    const std::size_t universe = _pair_universe.size();
    if ( !_combination_started )
    {
        _combination_started = true;
        _d_size = 0;
        _combination.clear();
        return true;
    }
    const std::size_t k = _d_size;
    for ( std::size_t i = k; i-- > 0; )
    {
        if ( _combination[ i ] < universe - k + i )
        {
            ++_combination[ i ];
            for ( std::size_t j = i + 1; j < k; ++j )
                _combination[ j ] = _combination[ j - 1 ] + 1;
            return true;
        }
    }
    if ( k == universe )
        return false;
    _d_size = k + 1;
    _combination.resize( _d_size );
    for ( std::size_t j = 0; j < _d_size; ++j )
        _combination[ j ] = j;
    return true;
}

void disjunct_enumerator::set_relation( d_relation d )
{
    _current = std::move( d );
    _closure_pairs = _current.closure_pairs();
    _mask_pos = 0;
    const bool dropped = _options.mutation == translate_mutation::drop_closure_constraints;
    _choice.assign( dropped ? 0 : _nj * _closure_pairs.size(), false );
    ++_relations_tried;
    if ( _options.prune )
        _examined += _mask_count - _feasible_masks.size();
}

bool disjunct_enumerator::advance_relation()
{
    if ( _seed_pending )
    {
        _seed_pending = false;
        _seed_active = true;
        set_relation( *_seed );
        return true;
    }
    _seed_active = false;
    while ( next_combination() )
    {
        std::vector<bool> bits( _ni * _ni, false );
        for ( auto idx : _combination )
            bits[ _pair_universe[ idx ] ] = true;
        if ( _seed && _seed->pair_bits() == bits )
            continue;
        set_relation( d_relation( _ni, std::move( bits ) ) );
        return true;
    }
    return false;
}

theta_disjunct disjunct_enumerator::build( std::uint64_t mask, const std::vector<bool>& right_choices ) const
{
    const auto& pos = _conj.positives;
    theta_disjunct out;
    out.d = _current;
    out.from_seed = _seed_active;
    out.chose_all.resize( _ni );
    for ( std::size_t i = 0; i < _ni; ++i )
    {
        out.chose_all[ i ] = mask >> i & 1;
        if ( out.chose_all[ i ] )
            out.a_atoms.push_back( all_of( neg( pos[ i ].pre ) ) );
        else
            out.e_atoms.push_back( some_of( _bodies[ _post_body[ i ] ] ) );
    }
    for ( std::size_t j = 0; j < _nj; ++j )
        out.e_atoms.push_back( some_of( _bodies[ _neg_body[ j ] ] ) );
    for ( auto [ t, s ] : _current.pairs() )
        out.e_atoms.push_back( some_of( _bodies[ _d_body[ t * _ni + s ] ] ) );
    if ( _options.mutation != translate_mutation::drop_closure_constraints )
    {
        std::size_t k = 0;
        for ( std::size_t j = 0; j < _nj; ++j )
            for ( auto [ s, t ] : _closure_pairs )
            {
                const bool left = !right_choices[ k++ ];
                out.e_atoms.push_back(
                        some_of( _bodies[ left ? _left_body[ j * _ni + s ] : _right_body[ t * _nj + j ] ] ) );
                out.closure_choices.push_back( { j, s, t, left } );
            }
    }
    return out;
}

std::optional<theta_disjunct> disjunct_enumerator::next_pruned()
{
    while ( !_done )
    {
        if ( _mask_pos >= _feasible_masks.size() )
        {
            if ( !advance_relation() )
                _done = true;
            continue;
        }
        const std::uint64_t mask = _feasible_masks[ _mask_pos++ ];
        ++_examined;
        bool ok = true;
        for ( auto [ t, s ] : _current.pairs() )
            if ( !sat_under( mask, _d_body[ t * _ni + s ] ) )
            {
                ok = false;
                break;
            }
        if ( !ok )
            continue;
        auto right = closure_choices_for( mask, _closure_pairs );
        if ( !right )
            continue;
        auto d = build( mask, *right );
        d.index = _examined - 1;
        return d;
    }
    return std::nullopt;
}

std::optional<theta_disjunct> disjunct_enumerator::next_unpruned()
{
    while ( !_done )
    {
        if ( _mask_pos >= _mask_count )
        {
            if ( !advance_relation() )
                _done = true;
            continue;
        }
        const std::uint64_t mask = _mask_pos;
        if ( !allowed_mask( mask ) )
        {
            ++_mask_pos;
            continue;
        }
        auto d = build( mask, _choice );
        d.index = _examined++;
        // Binary increment of the closure choice vector; wrap moves on to the
        // next mask.
        std::size_t k = 0;
        while ( k < _choice.size() && _choice[ k ] )
            _choice[ k++ ] = false;
        if ( k == _choice.size() )
            ++_mask_pos;
        else
            _choice[ k ] = true;
        return d;
    }
    return std::nullopt;
}

std::optional<theta_disjunct> disjunct_enumerator::next()
{
    if ( !_started )
        start();
    return _options.prune ? next_pruned() : next_unpruned();
}

// }}}

std::uint64_t count_unpruned_disjuncts( const atom_conjunction& conj )
{
    const std::size_t ni = conj.positives.size(), nj = conj.negatives.size();
    if ( ni * ni > 24 )
        throw budget_exceeded( "too many positive atoms to count disjuncts" );
    std::uint64_t total = 0;
    const std::uint64_t relations = std::uint64_t{ 1 } << ( ni * ni );
    for ( std::uint64_t bitsmask = 0; bitsmask < relations; ++bitsmask )
    {
        std::vector<bool> bits( ni * ni );
        for ( std::size_t k = 0; k < ni * ni; ++k )
            bits[ k ] = bitsmask >> k & 1;
        const std::size_t exponent = ni + nj * d_relation( ni, std::move( bits ) ).closure_pairs().size();
        if ( exponent >= 64 )
            throw budget_exceeded( "disjunct count overflows 64 bits" );
        const std::uint64_t term = std::uint64_t{ 1 } << exponent;
        if ( total > UINT64_MAX - term )
            throw budget_exceeded( "disjunct count overflows 64 bits" );
        total += term;
    }
    return total;
}

} // namespace khsat
