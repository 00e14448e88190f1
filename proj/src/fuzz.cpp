#include "khsat/fuzz.hpp"

#include "khsat/errors.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <thread>

namespace khsat
{

namespace
{

class generator
{
public:
    generator( std::uint64_t seed, const std::vector<std::string>& props ) : _rng{ seed }, _props{ props }
    {
        if ( _props.empty() )
            throw contract_violation( "formula generator needs at least one proposition" );
    }

    formula propositional( int depth )
    {
        if ( depth == 0 || pick( 3 ) == 0 )
        {
            const auto r = pick( 12 );
            if ( r == 0 )
                return top();
            if ( r == 1 )
                return bot();
            return prop( _props[ pick( _props.size() ) ] );
        }
        switch ( pick( 3 ) )
        {
        case 0:
            return neg( propositional( depth - 1 ) );
        case 1: {
            auto a = propositional( depth - 1 );
            return conj( a, propositional( depth - 1 ) );
        }
        default: {
            auto a = propositional( depth - 1 );
            return disj( a, propositional( depth - 1 ) );
        }
        }
    }

    formula atom()
    {
        auto pre = propositional( 2 );
        return kh( pre, propositional( 2 ) );
    }

    formula atoms( std::size_t lo, std::size_t hi, bool negated )
    {
        std::vector<formula> parts;
        const std::size_t count = lo + pick( hi - lo + 1 );
        for ( std::size_t i = 0; i < count; ++i )
            parts.push_back( negated ? neg( atom() ) : atom() );
        return conj_all( parts );
    }

    // Modal budget counts Kh, A and E nodes; each becomes a Kh after
    // desugaring.
    formula general( int depth, int kh_depth )
    {
        if ( depth == 0 )
            return propositional( 0 );
        const bool modal = kh_depth < 2 && _modal_budget > 0;
        switch ( pick( modal ? 9 : 6 ) )
        {
        case 0:
        case 1:
            return propositional( 1 );
        case 2:
            return neg( general( depth - 1, kh_depth ) );
        case 3: {
            auto a = general( depth - 1, kh_depth );
            return conj( a, general( depth - 1, kh_depth ) );
        }
        case 4: {
            auto a = general( depth - 1, kh_depth );
            return disj( a, general( depth - 1, kh_depth ) );
        }
        case 5: {
            auto a = general( depth - 1, kh_depth );
            return implies( a, general( depth - 1, kh_depth ) );
        }
        case 6:
        case 7: {
            --_modal_budget;
            auto pre = general( depth - 1, kh_depth + 1 );
            return kh( pre, general( depth - 1, kh_depth + 1 ) );
        }
        default:
            --_modal_budget;
            return pick( 2 ) ? universal( general( depth - 1, kh_depth + 1 ) )
                             : existential( general( depth - 1, kh_depth + 1 ) );
        }
    }

private:
    std::size_t pick( std::size_t n ) { return std::uniform_int_distribution<std::size_t>( 0, n - 1 )( _rng ); }

    std::mt19937_64 _rng;
    const std::vector<std::string>& _props;
    int _modal_budget = 3;
};

struct trial_result
{
    bool oracle_sat = false;
    bool solver_sat = false;
    std::optional<fuzz_disagreement> disagreement;
};

trial_result run_trial( const fuzz_options& options, std::size_t trial )
{
    const std::uint64_t seed = trial_seed( options.seed, trial );
    const formula phi = random_formula( seed, options.mode, options.bounds.propositions );
    trial_result out;
    out.oracle_sat = oracle_sat( phi, options.bounds, options.oracle ).has_value();
    try
    {
        out.solver_sat = decide( phi, options.solver ).satisfiable();
    }
    catch ( const soundness_error& e )
    {
        out.disagreement = fuzz_disagreement{ trial, seed, phi, "soundness", e.what() };
        return out;
    }
    if ( out.oracle_sat && !out.solver_sat )
        out.disagreement =
                fuzz_disagreement{ trial, seed, phi, "oracle-sat-solver-unsat", "oracle found a model within bounds" };
    return out;
}

} // namespace

std::uint64_t trial_seed( std::uint64_t seed, std::size_t trial )
{
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * ( trial + 1 );
    z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ULL;
    z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebULL;
    return z ^ ( z >> 31 );
}

formula random_formula( std::uint64_t seed, fuzz_mode mode, const std::vector<std::string>& props )
{
    generator g( seed, props );
    switch ( mode )
    {
    case fuzz_mode::positive:
        return g.atoms( 1, 3, false );
    case fuzz_mode::negative:
        return g.atoms( 1, 3, true );
    case fuzz_mode::mixed: {
        auto positives = g.atoms( 1, 2, false );
        return conj( positives, g.atoms( 1, 2, true ) );
    }
    case fuzz_mode::general:
        break;
    }
    return g.general( 4, 0 );
}

fuzz_report fuzz( const fuzz_options& options )
{
    std::vector<trial_result> results( options.trials );
    const std::size_t jobs = std::max<std::size_t>( 1, std::min( options.jobs, options.trials ) );
    if ( jobs == 1 )
    {
        for ( std::size_t i = 0; i < options.trials; ++i )
            results[ i ] = run_trial( options, i );
    }
    else
    {
        std::vector<std::exception_ptr> errors( jobs );
        std::vector<std::thread> workers;
        for ( std::size_t w = 0; w < jobs; ++w )
            workers.emplace_back( [ &, w ] {
                try
                {
                    for ( std::size_t i = w; i < options.trials; i += jobs )
                        results[ i ] = run_trial( options, i );
                }
                catch ( ... )
                {
                    errors[ w ] = std::current_exception();
                }
            } );
        for ( auto& t : workers )
            t.join();
        for ( auto& e : errors )
            if ( e )
                std::rethrow_exception( e );
    }

    fuzz_report report;
    report.trials = options.trials;
    for ( auto& r : results )
    {
        report.oracle_sat += r.oracle_sat;
        report.solver_sat += r.solver_sat;
        report.solver_only_sat += r.solver_sat && !r.oracle_sat;
        report.both_unsat += !r.solver_sat && !r.oracle_sat && !r.disagreement;
        if ( r.disagreement )
            report.disagreements.push_back( std::move( *r.disagreement ) );
    }
    return report;
}

std::string to_json_line( const fuzz_disagreement& d )
{
    nlohmann::ordered_json j;
    j[ "trial" ] = d.trial;
    j[ "seed" ] = d.seed;
    j[ "formula" ] = to_string( d.phi );
    j[ "kind" ] = d.kind;
    j[ "detail" ] = d.detail;
    return j.dump();
}

fuzz_mode parse_fuzz_mode( const std::string& name )
{
    if ( name == "general" )
        return fuzz_mode::general;
    if ( name == "positive" )
        return fuzz_mode::positive;
    if ( name == "negative" )
        return fuzz_mode::negative;
    if ( name == "mixed" )
        return fuzz_mode::mixed;
    throw input_error( "unknown fuzz mode '" + name + "' (general, positive, negative, mixed)" );
}

} // namespace khsat
