#include "khsat/cli.hpp"

#include "khsat/errors.hpp"
#include "khsat/fuzz.hpp"
#include "khsat/model_io.hpp"
#include "khsat/oracle.hpp"
#include "khsat/parser.hpp"
#include "khsat/solver.hpp"
#include "khsat/translate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace khsat::cli
{

namespace
{

using json = nlohmann::ordered_json;

std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw khsat::input_error( "cannot read '" + path + "'" );
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file( const std::string& path, const std::string& text )
{
    std::ofstream out( path, std::ios::binary );
    if ( !out )
        throw khsat::input_error( "cannot write '" + path + "'" );
    out << text;
}

formula load_formula( const std::string& path )
{
    try
    {
        return parse( read_file( path ) );
    }
    catch ( const parse_error& e )
    {
        throw khsat::input_error( path + ":" + e.what() );
    }
}

std::vector<std::string> split( const std::string& text, char sep )
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in( text );
    while ( std::getline( in, item, sep ) )
        if ( !item.empty() )
            out.push_back( item );
    return out;
}

std::vector<std::string> parse_props( const std::string& text )
{
    auto props = split( text, ',' );
    for ( const auto& p : props )
        if ( !is_proposition_name( p ) )
            throw khsat::input_error( "'" + p + "' is not a proposition name" );
    return props;
}

// "t,s;t,s" with 1-based indices.
std::vector<index_pair> parse_pairs( const std::string& text )
{
    std::vector<index_pair> out;
    for ( const auto& item : split( text, ';' ) )
    {
        const auto parts = split( item, ',' );
        std::size_t t = 0, s = 0;
        std::size_t used_t = 0, used_s = 0;
        try
        {
            if ( parts.size() == 2 )
            {
                t = std::stoul( parts[ 0 ], &used_t );
                s = std::stoul( parts[ 1 ], &used_s );
            }
        }
        catch ( const std::exception& )
        {
            used_t = 0;
        }
        if ( parts.size() != 2 || used_t != parts[ 0 ].size() || used_s != parts[ 1 ].size() || t == 0 || s == 0 )
            throw khsat::input_error( "malformed pair '" + item + "' (expected t,s with 1-based indices)" );
        out.emplace_back( t - 1, s - 1 );
    }
    return out;
}

json pairs_json( const std::vector<index_pair>& pairs )
{
    json out = json::array();
    for ( auto [ a, b ] : pairs )
        out.push_back( { a + 1, b + 1 } );
    return out;
}

std::string pairs_text( const std::vector<index_pair>& pairs )
{
    std::string out = "{";
    for ( std::size_t i = 0; i < pairs.size(); ++i )
        out += ( i ? ", (" : "(" ) + std::to_string( pairs[ i ].first + 1 ) + "," +
               std::to_string( pairs[ i ].second + 1 ) + ")";
    return out + "}";
}

json atoms_json( const std::vector<kh_pair>& atoms, bool negated )
{
    json out = json::array();
    for ( const auto& a : atoms )
        out.push_back( to_string( negated ? neg( kh( a.pre, a.post ) ) : kh( a.pre, a.post ) ) );
    return out;
}

json plan_json( const plan& p )
{
    json out = json::array();
    for ( const auto& a : p.actions() )
        out.push_back( a );
    return out;
}

std::string truth_text( const lts_model& m, const state_set& s )
{
    std::string out = "{";
    bool first = true;
    for ( auto i = s.find_first(); i != state_set::npos; i = s.find_next( i ) )
    {
        out += ( first ? "" : ", " ) + m.state_name( i );
        first = false;
    }
    return out + "}";
}

json truth_json( const lts_model& m, const state_set& s )
{
    json out = json::array();
    for ( auto i = s.find_first(); i != state_set::npos; i = s.find_next( i ) )
        out.push_back( m.state_name( i ) );
    return out;
}

json stats_json( const solver_stats& s )
{
    json out;
    out[ "branches" ] = s.branches;
    out[ "leaves_memoized" ] = s.leaves_memoized;
    out[ "disjuncts" ] = s.disjuncts;
    out[ "relations" ] = s.relations;
    out[ "s5_calls" ] = s.s5_calls;
    out[ "sat_queries" ] = s.sat_queries;
    out[ "sat_misses" ] = s.sat_misses;
    out[ "seeded" ] = s.seeded;
    out[ "seed_hits" ] = s.seed_hits;
    return out;
}

json verdict_json( const formula& phi, const verdict& v )
{
    json out;
    out[ "result" ] = v.satisfiable() ? "SAT" : "UNSAT";
    out[ "formula" ] = to_string( phi );
    if ( v.sat )
    {
        const auto& w = *v.sat;
        out[ "model" ] = json::parse( model_to_json( w.model ) );
        json witnesses = json::object();
        for ( const auto& [ index, p ] : w.witnesses )
        {
            const auto& atom = w.leaf.positives[ index - 1 ];
            witnesses[ std::to_string( index ) ] = { { "atom", to_string( kh( atom.pre, atom.post ) ) },
                                                     { "plan", plan_json( p ) } };
        }
        out[ "witnesses" ] = witnesses;

        json decisions = json::array();
        for ( const auto& [ atom, value ] : w.leaf.decisions )
            decisions.push_back( { { "atom", to_string( kh( atom.pre, atom.post ) ) }, { "value", value } } );
        json branch_j;
        branch_j[ "decisions" ] = decisions;
        branch_j[ "phi_cur" ] = to_string( w.leaf.phi_cur );
        branch_j[ "positives" ] = atoms_json( w.leaf.positives, false );
        branch_j[ "negatives" ] = atoms_json( w.leaf.negatives, true );
        branch_j[ "residue" ] = to_string( neg( kh( w.leaf.phi_cur, bot() ) ) );

        json disjunct;
        disjunct[ "index" ] = w.disjunct.index;
        disjunct[ "from_seed" ] = w.disjunct.from_seed;
        disjunct[ "D" ] = pairs_json( w.disjunct.d.pairs() );
        disjunct[ "closure" ] = pairs_json( w.disjunct.d.closure_pairs() );
        json a_atoms = json::array(), e_atoms = json::array();
        for ( const auto& a : w.disjunct.a_atoms )
            a_atoms.push_back( to_string( a.to_formula() ) );
        for ( const auto& e : w.disjunct.e_atoms )
            e_atoms.push_back( to_string( e.to_formula() ) );
        disjunct[ "A" ] = a_atoms;
        disjunct[ "E" ] = e_atoms;

        json k_set = json::array();
        for ( auto k : w.k_set )
            k_set.push_back( k + 1 );

        out[ "trace" ] = { { "branch", branch_j }, { "disjunct", disjunct }, { "k_set", k_set } };
    }
    out[ "stats" ] = stats_json( v.stats );
    return out;
}

void print_verdict_text( std::ostream& out, const verdict& v )
{
    if ( !v.sat )
    {
        out << "UNSAT (" << v.stats.branches << " branches, " << v.stats.disjuncts << " disjuncts)\n";
        return;
    }
    const auto& w = *v.sat;
    out << "SAT\n";
    out << "branch:";
    for ( const auto& p : w.leaf.positives )
        out << ' ' << kh( p.pre, p.post );
    for ( const auto& n : w.leaf.negatives )
        out << ' ' << neg( kh( n.pre, n.post ) );
    out << " | residue " << neg( kh( w.leaf.phi_cur, bot() ) ) << '\n';
    out << "D = " << pairs_text( w.disjunct.d.pairs() ) << ", C = " << pairs_text( w.disjunct.d.closure_pairs() )
        << '\n';
    for ( const auto& [ index, p ] : w.witnesses )
    {
        const auto& atom = w.leaf.positives[ index - 1 ];
        out << "witness " << index << ' ' << kh( atom.pre, atom.post ) << ": " << to_string( p ) << '\n';
    }
    out << model_to_json( w.model ) << '\n';
}

int cmd_sat( const std::string& path, bool as_json, const std::string& dot, bool no_prune, bool no_seed,
             const std::string& dimacs, std::ostream& out )
{
    const formula phi = load_formula( path );
    solver_options options;
    options.enumeration.prune = !no_prune;
    options.enumeration.seed_from_model = !no_seed;
    std::ofstream dimacs_out;
    if ( !dimacs.empty() )
    {
        dimacs_out.open( dimacs, std::ios::binary );
        if ( !dimacs_out )
            throw khsat::input_error( "cannot write '" + dimacs + "'" );
        options.sat.dimacs_log = &dimacs_out;
    }
    const verdict v = decide( phi, options );
    if ( as_json )
        out << verdict_json( phi, v ).dump( 2 ) << '\n';
    else
        print_verdict_text( out, v );
    if ( v.sat && !dot.empty() )
        write_file( dot, model_to_dot( v.sat->model ) );
    return v.satisfiable() ? exit_code::sat : exit_code::unsat;
}

int cmd_mc( const std::string& model_path, const std::string& formula_text, bool as_json,
            std::optional<std::size_t> depth_limit, const std::string& dot, std::ostream& out )
{
    const lts_model m = load_model( model_path );
    const formula phi = parse( formula_text );
    std::map<kh_pair, std::optional<plan>> witnesses;
    kh_search_options options{ depth_limit };
    const state_set truth = model_check( m, phi, witnesses, options );
    if ( as_json )
    {
        json j;
        j[ "formula" ] = to_string( phi );
        j[ "truth_set" ] = truth_json( m, truth );
        json ws = json::array();
        for ( const auto& [ atom, p ] : witnesses )
            ws.push_back( { { "atom", to_string( kh( atom.pre, atom.post ) ) },
                            { "plan", p ? plan_json( *p ) : json( nullptr ) } } );
        j[ "witnesses" ] = ws;
        out << j.dump( 2 ) << '\n';
    }
    else
    {
        out << "truth set: " << truth_text( m, truth ) << '\n';
        for ( const auto& [ atom, p ] : witnesses )
            out << kh( atom.pre, atom.post ) << ": " << ( p ? to_string( *p ) : "no plan" ) << '\n';
    }
    if ( !dot.empty() )
        write_file( dot, model_to_dot( m ) );
    return truth.any() ? exit_code::sat : exit_code::unsat;
}

void print_thetas( std::ostream& out, const atom_conjunction& conj, const std::optional<std::vector<index_pair>>& d )
{
    out << "theta+: " << theta_plus( conj.positives ) << '\n';
    out << "theta-: " << theta_minus( conj.negatives ) << '\n';
    if ( !d )
        return;
    for ( auto [ t, s ] : *d )
        if ( t >= conj.positives.size() || s >= conj.positives.size() )
        {
            out << "theta_D: pair (" << t + 1 << "," << s + 1 << ") outside I = {1.." << conj.positives.size()
                << "}\n";
            return;
        }
    const auto rel = closure_complement( conj.positives.size(), *d );
    out << "D = " << pairs_text( rel.pairs() ) << ", C = " << pairs_text( rel.closure_pairs() ) << '\n';
    std::vector<formula> parts;
    for ( const auto& c : theta_d( conj, rel ) )
        parts.push_back( c.to_formula() );
    out << "theta_D: " << conj_all( parts ) << '\n';
}

int cmd_translate( const std::string& path, const std::string& pairs, std::ostream& out )
{
    const formula phi = load_formula( path );
    std::optional<std::vector<index_pair>> d;
    if ( !pairs.empty() )
        d = parse_pairs( pairs );
    const formula f = desugar( phi );
    if ( auto conj = as_atom_conjunction( f ) )
    {
        print_thetas( out, *conj, d );
        return exit_code::sat;
    }
    std::size_t leaf_index = 0;
    branch_atoms( f, [ & ]( const branch& leaf ) {
        out << "leaf " << ++leaf_index << ": " << leaf.conjunction().to_formula() << '\n';
        print_thetas( out, leaf.conjunction(), d );
        return true;
    } );
    return exit_code::sat;
}

int cmd_oracle( const std::string& path, const oracle_bounds& bounds, std::uint64_t budget, bool as_json,
                std::ostream& out )
{
    const formula phi = load_formula( path );
    const auto m = oracle_sat( phi, bounds, { budget } );
    if ( as_json )
    {
        json j;
        j[ "result" ] = m ? "found" : "none";
        j[ "formula" ] = to_string( phi );
        if ( m )
            j[ "model" ] = json::parse( model_to_json( *m ) );
        out << j.dump( 2 ) << '\n';
    }
    else if ( m )
        out << "model found\n" << model_to_json( *m ) << '\n';
    else
        out << "no model within bounds\n";
    return m ? exit_code::sat : exit_code::unsat;
}

int cmd_fuzz( const fuzz_options& options, std::ostream& out, std::ostream& err )
{
    const auto report = fuzz( options );
    for ( const auto& d : report.disagreements )
        out << to_json_line( d ) << '\n';
    err << "trials " << report.trials << ", solver sat " << report.solver_sat << ", oracle sat " << report.oracle_sat
        << ", solver-only sat " << report.solver_only_sat << ", disagreements " << report.disagreements.size()
        << '\n';
    return report.disagreements.empty() ? 0 : 1;
}

} // namespace

int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Satisfiability and model checking for the knowing-how logic", "khsat" };
    app.require_subcommand( 1 );

    std::string file, model_path, formula_text, dot, dimacs, pairs, props, mode = "general";
    bool as_json = false, no_prune = false, no_seed = false;
    std::optional<std::size_t> depth_limit;
    oracle_bounds bounds;
    std::uint64_t budget = oracle_options{}.budget;
    fuzz_options fuzz_opts;

    auto* sat_cmd = app.add_subcommand( "sat", "decide satisfiability of a formula file" );
    sat_cmd->add_option( "FILE", file, "formula file" )->required();
    sat_cmd->add_flag( "--json", as_json, "machine-readable verdict and trace" );
    sat_cmd->add_option( "--dot", dot, "write the model as Graphviz" );
    sat_cmd->add_flag( "--no-prune", no_prune, "enumerate every disjunct without satisfiability pruning" );
    sat_cmd->add_flag( "--no-seed", no_seed, "do not try the model-guided D first" );
    sat_cmd->add_option( "--dimacs", dimacs, "log every propositional query in DIMACS form" );

    auto* mc_cmd = app.add_subcommand( "mc", "model check a formula on a model file" );
    mc_cmd->add_option( "MODEL", model_path, "model JSON" )->required();
    mc_cmd->add_option( "FORMULA", formula_text, "formula text" )->required();
    mc_cmd->add_flag( "--json", as_json, "machine-readable output" );
    mc_cmd->add_option( "--depth-limit", depth_limit, "longest plan searched" );
    mc_cmd->add_option( "--dot", dot, "write the model as Graphviz" );

    auto* tr_cmd = app.add_subcommand( "translate", "print the global-modality translations" );
    tr_cmd->add_option( "FILE", file, "formula file" )->required();
    tr_cmd->add_option( "--d", pairs, "guessed pairs \"t,s;t,s\", 1-based" );

    auto* or_cmd = app.add_subcommand( "oracle", "bounded brute-force model search" );
    or_cmd->add_option( "FILE", file, "formula file" )->required();
    or_cmd->add_option( "--max-states", bounds.max_states )->check( CLI::PositiveNumber );
    or_cmd->add_option( "--max-actions", bounds.max_actions );
    or_cmd->add_option( "--props", props, "comma-separated propositions" );
    or_cmd->add_option( "--budget", budget, "largest number of models searched" );
    or_cmd->add_flag( "--json", as_json, "machine-readable output" );

    auto* fz_cmd = app.add_subcommand( "fuzz", "differential test of the solver against the oracle" );
    fz_cmd->add_option( "--seed", fuzz_opts.seed );
    fz_cmd->add_option( "--trials", fuzz_opts.trials );
    fz_cmd->add_option( "--mode", mode, "general, positive, negative or mixed" );
    fz_cmd->add_option( "--max-states", fuzz_opts.bounds.max_states )->check( CLI::PositiveNumber );
    fz_cmd->add_option( "--max-actions", fuzz_opts.bounds.max_actions );
    fz_cmd->add_option( "--props", props, "comma-separated propositions" );
    fz_cmd->add_option( "--jobs", fuzz_opts.jobs, "worker threads" );

    try
    {
        std::vector<std::string> reversed( args.rbegin(), args.rend() );
        app.parse( reversed );
    }
    catch ( const CLI::CallForHelp& )
    {
        out << app.help();
        return 0;
    }
    catch ( const CLI::CallForAllHelp& )
    {
        out << app.help( "", CLI::AppFormatMode::All );
        return 0;
    }
    catch ( const CLI::ParseError& e )
    {
        err << "error: " << e.what() << '\n';
        return exit_code::input_error;
    }

    try
    {
        if ( sat_cmd->parsed() )
            return cmd_sat( file, as_json, dot, no_prune, no_seed, dimacs, out );
        if ( mc_cmd->parsed() )
            return cmd_mc( model_path, formula_text, as_json, depth_limit, dot, out );
        if ( tr_cmd->parsed() )
            return cmd_translate( file, pairs, out );
        if ( or_cmd->parsed() )
        {
            bounds.propositions = parse_props( props );
            return cmd_oracle( file, bounds, budget, as_json, out );
        }
        fuzz_opts.mode = parse_fuzz_mode( mode );
        if ( !props.empty() )
            fuzz_opts.bounds.propositions = parse_props( props );
        return cmd_fuzz( fuzz_opts, out, err );
    }
    catch ( const khsat::soundness_error& e )
    {
        err << "internal soundness error: " << e.what() << '\n';
        return exit_code::soundness_error;
    }
    catch ( const khsat::input_error& e )
    {
        err << "error: " << e.what() << '\n';
        return exit_code::input_error;
    }
    catch ( const budget_exceeded& e )
    {
        err << "error: " << e.what() << '\n';
        return exit_code::input_error;
    }
}

} // namespace khsat::cli
