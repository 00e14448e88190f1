#include "khsat/formula.hpp"

#include <boost/container_hash/hash.hpp>

#include <cassert>
#include <functional>
#include <ostream>
#include <sstream>
#include <utility>

namespace khsat
{

struct formula::node
{
    op kind;
    std::string name;
    formula lhs{ null_tag{} };
    formula rhs{ null_tag{} };
    std::size_t size = 1;
    std::size_t hash = 0;
    bool modal_free = true;
};

namespace
{

bool has_lhs( op k )
{
    return k != op::prop && k != op::top && k != op::bot;
}

bool has_rhs( op k )
{
    switch ( k )
    {
    case op::or_:
    case op::and_:
    case op::implies:
    case op::iff:
    case op::kh:
        return true;
    default:
        return false;
    }
}

} // namespace

namespace
{

formula make_node( op kind, std::string name, formula lhs, formula rhs )
{
    auto n = std::make_shared<formula::node>();
    n->kind = kind;
    n->name = std::move( name );
    std::size_t h = std::hash<std::string>{}( n->name );
    boost::hash_combine( h, static_cast<int>( kind ) );
    if ( has_lhs( kind ) )
    {
        n->size += lhs.size();
        n->modal_free = n->modal_free && lhs.modal_free();
        boost::hash_combine( h, lhs.hash() );
        n->lhs = std::move( lhs );
    }
    if ( has_rhs( kind ) )
    {
        n->size += rhs.size();
        n->modal_free = n->modal_free && rhs.modal_free();
        boost::hash_combine( h, rhs.hash() );
        n->rhs = std::move( rhs );
    }
    if ( kind == op::kh || kind == op::all || kind == op::some )
        n->modal_free = false;
    n->hash = h;
    return formula{ std::move( n ) };
}

} // namespace

formula::formula( std::shared_ptr<const node> n ) : _node{ std::move( n ) } {}

formula::formula() : formula( top() ) {}

op formula::kind() const { return _node->kind; }
const std::string& formula::name() const { return _node->name; }
const formula& formula::lhs() const
{
    assert( has_lhs( kind() ) );
    return _node->lhs;
}
const formula& formula::rhs() const
{
    assert( has_rhs( kind() ) );
    return _node->rhs;
}
std::size_t formula::size() const { return _node->size; }
std::size_t formula::hash() const { return _node->hash; }
bool formula::modal_free() const { return _node->modal_free; }

bool operator==( const formula& a, const formula& b )
{
    if ( a._node == b._node )
        return true;
    if ( a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind() || a.name() != b.name() )
        return false;
    if ( has_lhs( a.kind() ) && !( a.lhs() == b.lhs() ) )
        return false;
    if ( has_rhs( a.kind() ) && !( a.rhs() == b.rhs() ) )
        return false;
    return true;
}

std::strong_ordering operator<=>( const formula& a, const formula& b )
{
    if ( a._node == b._node )
        return std::strong_ordering::equal;
    if ( auto c = a.kind() <=> b.kind(); c != 0 )
        return c;
    if ( auto c = a.name() <=> b.name(); c != 0 )
        return c;
    if ( has_lhs( a.kind() ) )
        if ( auto c = a.lhs() <=> b.lhs(); c != 0 )
            return c;
    if ( has_rhs( a.kind() ) )
        if ( auto c = a.rhs() <=> b.rhs(); c != 0 )
            return c;
    return std::strong_ordering::equal;
}

// Leaf nodes carry no children and are built directly.
namespace
{

std::shared_ptr<const formula::node> make_leaf( op kind, std::string name )
{
    auto n = std::make_shared<formula::node>();
    n->kind = kind;
    n->name = std::move( name );
    std::size_t h = std::hash<std::string>{}( n->name );
    boost::hash_combine( h, static_cast<int>( kind ) );
    n->hash = h;
    return n;
}

const std::shared_ptr<const formula::node>& shared_top()
{
    static const auto n = make_leaf( op::top, "" );
    return n;
}

const std::shared_ptr<const formula::node>& shared_bot()
{
    static const auto n = make_leaf( op::bot, "" );
    return n;
}

} // namespace

formula prop( std::string name )
{
    return formula{ make_leaf( op::prop, std::move( name ) ) };
}

formula top() { return formula{ shared_top() }; }
formula bot() { return formula{ shared_bot() }; }
formula neg( formula f ) { return make_node( op::not_, "", std::move( f ), top() ); }
formula disj( formula a, formula b ) { return make_node( op::or_, "", std::move( a ), std::move( b ) ); }
formula conj( formula a, formula b ) { return make_node( op::and_, "", std::move( a ), std::move( b ) ); }
formula implies( formula a, formula b ) { return make_node( op::implies, "", std::move( a ), std::move( b ) ); }
formula iff( formula a, formula b ) { return make_node( op::iff, "", std::move( a ), std::move( b ) ); }
formula kh( formula pre, formula post ) { return make_node( op::kh, "", std::move( pre ), std::move( post ) ); }
formula universal( formula f ) { return make_node( op::all, "", std::move( f ), top() ); }
formula existential( formula f ) { return make_node( op::some, "", std::move( f ), top() ); }

formula conj_all( const std::vector<formula>& fs )
{
    if ( fs.empty() )
        return top();
    formula result = fs.front();
    for ( std::size_t i = 1; i < fs.size(); ++i )
        result = conj( result, fs[ i ] );
    return result;
}

formula disj_all( const std::vector<formula>& fs )
{
    if ( fs.empty() )
        return bot();
    formula result = fs.front();
    for ( std::size_t i = 1; i < fs.size(); ++i )
        result = disj( result, fs[ i ] );
    return result;
}

formula negate( const formula& f )
{
    switch ( f.kind() )
    {
    case op::top:
        return bot();
    case op::bot:
        return top();
    case op::not_:
        return f.lhs();
    default:
        return neg( f );
    }
}

// {{{ Printing

namespace
{

int precedence( op k )
{
    switch ( k )
    {
    case op::iff:
        return 1;
    case op::implies:
        return 2;
    case op::or_:
        return 3;
    case op::and_:
        return 4;
    case op::not_:
    case op::all:
    case op::some:
        return 5;
    default:
        return 6;
    }
}

const char* symbol( op k )
{
    switch ( k )
    {
    case op::iff:
        return " <-> ";
    case op::implies:
        return " -> ";
    case op::or_:
        return " | ";
    case op::and_:
        return " & ";
    case op::not_:
        return "~";
    case op::all:
        return "A ";
    case op::some:
        return "E ";
    default:
        return "";
    }
}

void print( std::ostream& os, const formula& f, int required )
{
    const int own = precedence( f.kind() );
    const bool parens = own < required;
    if ( parens )
        os << '(';
    switch ( f.kind() )
    {
    case op::prop:
        os << f.name();
        break;
    case op::top:
        os << "true";
        break;
    case op::bot:
        os << "false";
        break;
    case op::not_:
    case op::all:
    case op::some:
        os << symbol( f.kind() );
        print( os, f.lhs(), own );
        break;
    case op::kh:
        os << "Kh(";
        print( os, f.lhs(), 0 );
        os << ", ";
        print( os, f.rhs(), 0 );
        os << ')';
        break;
    case op::implies:
        // right-associative
        print( os, f.lhs(), own + 1 );
        os << symbol( f.kind() );
        print( os, f.rhs(), own );
        break;
    default:
        print( os, f.lhs(), own );
        os << symbol( f.kind() );
        print( os, f.rhs(), own + 1 );
        break;
    }
    if ( parens )
        os << ')';
}

} // namespace

std::string to_string( const formula& f )
{
    std::ostringstream os;
    print( os, f, 0 );
    return os.str();
}

std::ostream& operator<<( std::ostream& os, const formula& f )
{
    print( os, f, 0 );
    return os;
}

// }}}

formula desugar( const formula& f )
{
    switch ( f.kind() )
    {
    case op::prop:
    case op::top:
    case op::bot:
        return f;
    case op::not_:
        return neg( desugar( f.lhs() ) );
    case op::or_:
        return disj( desugar( f.lhs() ), desugar( f.rhs() ) );
    case op::and_:
        return conj( desugar( f.lhs() ), desugar( f.rhs() ) );
    case op::implies:
        return disj( neg( desugar( f.lhs() ) ), desugar( f.rhs() ) );
    case op::iff: {
        auto a = desugar( f.lhs() );
        auto b = desugar( f.rhs() );
        return conj( disj( neg( a ), b ), disj( neg( b ), a ) );
    }
    case op::kh:
        return kh( desugar( f.lhs() ), desugar( f.rhs() ) );
    case op::all:
        // A f == Kh(~f, false)
        return kh( negate( desugar( f.lhs() ) ), bot() );
    case op::some:
        // E f == ~A ~f == ~Kh(f, false)
        return neg( kh( desugar( f.lhs() ), bot() ) );
    }
    return f;
}

std::set<std::string> propositions( const formula& f )
{
    std::set<std::string> out;
    std::function<void( const formula& )> walk = [ & ]( const formula& g ) {
        if ( g.is( op::prop ) )
            out.insert( g.name() );
        if ( has_lhs( g.kind() ) )
            walk( g.lhs() );
        if ( has_rhs( g.kind() ) )
            walk( g.rhs() );
    };
    walk( f );
    return out;
}

formula atom::to_formula() const
{
    auto f = kh( args.pre, args.post );
    return pol == polarity::positive ? f : neg( f );
}

formula atom_conjunction::to_formula() const
{
    std::vector<formula> parts;
    for ( const auto& p : positives )
        parts.push_back( kh( p.pre, p.post ) );
    for ( const auto& n : negatives )
        parts.push_back( neg( kh( n.pre, n.post ) ) );
    return conj_all( parts );
}

formula substitute_atom( const formula& f, const kh_pair& target, const formula& value )
{
    if ( f.modal_free() )
        return f;
    if ( f.is( op::kh ) && f.lhs() == target.pre && f.rhs() == target.post )
        return value;
    switch ( f.kind() )
    {
    case op::not_:
    case op::all:
    case op::some:
        return make_node( f.kind(), "", substitute_atom( f.lhs(), target, value ), top() );
    default:
        return make_node( f.kind(), "", substitute_atom( f.lhs(), target, value ),
                          substitute_atom( f.rhs(), target, value ) );
    }
}

std::optional<kh_pair> find_positive_atom( const formula& f )
{
    if ( f.modal_free() )
        return std::nullopt;
    if ( has_lhs( f.kind() ) )
        if ( auto found = find_positive_atom( f.lhs() ) )
            return found;
    if ( has_rhs( f.kind() ) )
        if ( auto found = find_positive_atom( f.rhs() ) )
            return found;
    if ( f.is( op::kh ) )
        return kh_pair{ f.lhs(), f.rhs() };
    return std::nullopt;
}

std::set<kh_pair> kh_subterms( const formula& f )
{
    std::set<kh_pair> out;
    std::function<void( const formula& )> walk = [ & ]( const formula& g ) {
        if ( g.modal_free() )
            return;
        if ( g.is( op::kh ) )
            out.insert( { g.lhs(), g.rhs() } );
        if ( has_lhs( g.kind() ) )
            walk( g.lhs() );
        if ( has_rhs( g.kind() ) )
            walk( g.rhs() );
    };
    walk( f );
    return out;
}

std::set<kh_pair> positive_atoms( const formula& f )
{
    std::set<kh_pair> out;
    for ( const auto& p : kh_subterms( f ) )
        if ( p.pre.modal_free() && p.post.modal_free() )
            out.insert( p );
    return out;
}

std::optional<atom_conjunction> as_atom_conjunction( const formula& f )
{
    atom_conjunction out;
    std::function<bool( const formula& )> walk = [ & ]( const formula& g ) {
        if ( g.is( op::and_ ) )
            return walk( g.lhs() ) && walk( g.rhs() );
        if ( g.is( op::top ) )
            return true;
        const bool negative = g.is( op::not_ );
        const formula& body = negative ? g.lhs() : g;
        if ( !body.is( op::kh ) || !body.lhs().modal_free() || !body.rhs().modal_free() )
            return false;
        ( negative ? out.negatives : out.positives ).push_back( { body.lhs(), body.rhs() } );
        return true;
    };
    if ( !walk( f ) )
        return std::nullopt;
    return out;
}

} // namespace khsat
