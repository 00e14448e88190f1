#include "khsat/model_io.hpp"

#include "khsat/errors.hpp"
#include "khsat/parser.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace khsat
{

using nlohmann::json;

namespace
{

[[noreturn]] void schema_fail( const std::string& where, const std::string& what )
{
    throw input_error( "model schema error at " + where + ": " + what );
}

const std::string& as_string( const json& j, const std::string& where )
{
    if ( !j.is_string() )
        schema_fail( where, "expected a string" );
    return j.get_ref<const std::string&>();
}

std::size_t state_ref( const lts_model& m, const json& j, const std::string& where )
{
    const auto& name = as_string( j, where );
    auto idx = m.index_of( name );
    if ( !idx )
        schema_fail( where, "unknown state '" + name + "'" );
    return *idx;
}

std::string escape_dot( std::string_view s )
{
    std::string out;
    for ( char c : s )
    {
        if ( c == '"' || c == '\\' )
            out += '\\';
        out += c;
    }
    return out;
}

std::string quote_dot( std::string_view s )
{
    return "\"" + escape_dot( s ) + "\"";
}

} // namespace

lts_model model_from_json( std::string_view text )
{
    json doc;
    try
    {
        doc = json::parse( text );
    }
    catch ( const json::parse_error& e )
    {
        throw input_error( "malformed model JSON at byte " + std::to_string( e.byte ) + ": " + e.what() );
    }

    if ( !doc.is_object() )
        schema_fail( "/", "expected an object" );
    for ( const auto& [ key, value ] : doc.items() )
        if ( key != "states" && key != "relations" && key != "valuation" )
            schema_fail( "/" + key, "unknown key" );
    if ( !doc.contains( "states" ) )
        schema_fail( "/states", "missing" );

    const auto& states = doc[ "states" ];
    if ( !states.is_array() )
        schema_fail( "/states", "expected an array" );
    std::vector<std::string> names;
    for ( std::size_t i = 0; i < states.size(); ++i )
        names.push_back( as_string( states[ i ], "/states/" + std::to_string( i ) ) );
    if ( names.empty() )
        schema_fail( "/states", "at least one state required" );

    lts_model m = [ & ] {
        try
        {
            return lts_model( names );
        }
        catch ( const input_error& e )
        {
            schema_fail( "/states", e.what() );
        }
    }();

    if ( doc.contains( "relations" ) )
    {
        const auto& rels = doc[ "relations" ];
        if ( !rels.is_object() )
            schema_fail( "/relations", "expected an object" );
        for ( const auto& [ action, pairs ] : rels.items() )
        {
            const std::string where = "/relations/" + action;
            if ( action.empty() )
                schema_fail( where, "empty action name" );
            if ( !pairs.is_array() )
                schema_fail( where, "expected an array of [src, dst] pairs" );
            m.declare_action( action );
            for ( std::size_t i = 0; i < pairs.size(); ++i )
            {
                const std::string at = where + "/" + std::to_string( i );
                const auto& pr = pairs[ i ];
                if ( !pr.is_array() || pr.size() != 2 )
                    schema_fail( at, "expected [src, dst]" );
                m.add_transition( action, state_ref( m, pr[ 0 ], at + "/0" ), state_ref( m, pr[ 1 ], at + "/1" ) );
            }
        }
    }

    if ( doc.contains( "valuation" ) )
    {
        const auto& val = doc[ "valuation" ];
        if ( !val.is_object() )
            schema_fail( "/valuation", "expected an object" );
        for ( const auto& [ p, members ] : val.items() )
        {
            const std::string where = "/valuation/" + p;
            if ( !is_proposition_name( p ) )
                schema_fail( where, "'" + p + "' is not a proposition symbol" );
            if ( !members.is_array() )
                schema_fail( where, "expected an array of states" );
            m.declare_proposition( p );
            for ( std::size_t i = 0; i < members.size(); ++i )
                m.set_true( p, state_ref( m, members[ i ], where + "/" + std::to_string( i ) ) );
        }
    }
    return m;
}

lts_model load_model( const std::string& path )
{
    std::ifstream in( path );
    if ( !in )
        throw input_error( "cannot read model file '" + path + "'" );
    std::stringstream buf;
    buf << in.rdbuf();
    try
    {
        return model_from_json( buf.str() );
    }
    catch ( const input_error& e )
    {
        throw input_error( path + ": " + e.what() );
    }
}

std::string model_to_json( const lts_model& m, int indent )
{
    nlohmann::ordered_json doc;
    doc[ "states" ] = m.states();
    doc[ "relations" ] = nlohmann::ordered_json::object();
    for ( const auto& a : m.actions() )
    {
        nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
        for ( auto [ s, t ] : m.transitions( a ) )
            pairs.push_back( { m.state_name( s ), m.state_name( t ) } );
        doc[ "relations" ][ a ] = std::move( pairs );
    }
    doc[ "valuation" ] = nlohmann::ordered_json::object();
    for ( const auto& p : m.propositions() )
    {
        nlohmann::ordered_json members = nlohmann::ordered_json::array();
        const auto set = m.truth( p );
        for ( auto s = set.find_first(); s != state_set::npos; s = set.find_next( s ) )
            members.push_back( m.state_name( s ) );
        doc[ "valuation" ][ p ] = std::move( members );
    }
    return doc.dump( indent );
}

std::string model_to_dot( const lts_model& m, std::string_view graph_name )
{
    std::ostringstream os;
    os << "digraph " << quote_dot( graph_name ) << " {\n";
    const auto props = m.propositions();
    for ( std::size_t s = 0; s < m.size(); ++s )
    {
        std::string label = escape_dot( m.state_name( s ) ) + "\\n{";
        bool first = true;
        for ( const auto& p : props )
            if ( m.truth( p ).test( s ) )
            {
                label += ( first ? "" : "," ) + p;
                first = false;
            }
        label += "}";
        os << "  " << quote_dot( m.state_name( s ) ) << " [label=\"" << label << "\"];\n";
    }
    for ( const auto& a : m.actions() )
        for ( auto [ s, t ] : m.transitions( a ) )
            os << "  " << quote_dot( m.state_name( s ) ) << " -> " << quote_dot( m.state_name( t ) )
               << " [label=" << quote_dot( a ) << "];\n";
    os << "}\n";
    return os.str();
}

} // namespace khsat
