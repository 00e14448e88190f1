#include "khsat/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace khsat
{

namespace
{

enum class tok
{
    ident,
    kw_true,
    kw_false,
    kw_kh,
    kw_a,
    kw_e,
    tilde,
    amp,
    bar,
    arrow,
    dbl_arrow,
    lparen,
    rparen,
    comma,
    end,
};

struct token
{
    tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

bool ident_char( char c )
{
    return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_';
}

std::vector<token> tokenize( std::string_view text )
{
    std::vector<token> out;
    std::size_t line = 1, column = 1;
    std::size_t i = 0;

    auto advance = [ & ]( std::size_t n ) {
        for ( std::size_t k = 0; k < n; ++k, ++i )
        {
            if ( text[ i ] == '\n' )
            {
                ++line;
                column = 1;
            }
            else
                ++column;
        }
    };

    while ( i < text.size() )
    {
        const char c = text[ i ];
        if ( std::isspace( static_cast<unsigned char>( c ) ) )
        {
            advance( 1 );
            continue;
        }
        if ( c == '#' )
        {
            while ( i < text.size() && text[ i ] != '\n' )
                advance( 1 );
            continue;
        }

        const std::size_t l = line, col = column;
        auto emit = [ & ]( tok kind, std::size_t len ) {
            out.push_back( { kind, std::string( text.substr( i, len ) ), l, col } );
            advance( len );
        };

        if ( std::isalpha( static_cast<unsigned char>( c ) ) )
        {
            std::size_t j = i;
            while ( j < text.size() && ident_char( text[ j ] ) )
                ++j;
            const std::string_view word = text.substr( i, j - i );
            if ( word == "true" )
                emit( tok::kw_true, word.size() );
            else if ( word == "false" )
                emit( tok::kw_false, word.size() );
            else if ( word == "Kh" )
                emit( tok::kw_kh, word.size() );
            else if ( word == "A" )
                emit( tok::kw_a, word.size() );
            else if ( word == "E" )
                emit( tok::kw_e, word.size() );
            else if ( std::islower( static_cast<unsigned char>( c ) ) )
                emit( tok::ident, word.size() );
            else
                throw parse_error( l, col, "unknown token '" + std::string( word ) + "'" );
            continue;
        }

        const std::string_view rest = text.substr( i );
        if ( rest.starts_with( "<->" ) )
            emit( tok::dbl_arrow, 3 );
        else if ( rest.starts_with( "->" ) )
            emit( tok::arrow, 2 );
        else if ( c == '~' )
            emit( tok::tilde, 1 );
        else if ( c == '&' )
            emit( tok::amp, 1 );
        else if ( c == '|' )
            emit( tok::bar, 1 );
        else if ( c == '(' )
            emit( tok::lparen, 1 );
        else if ( c == ')' )
            emit( tok::rparen, 1 );
        else if ( c == ',' )
            emit( tok::comma, 1 );
        else
            throw parse_error( l, col, std::string( "unknown token '" ) + c + "'" );
    }
    out.push_back( { tok::end, "", line, column } );
    return out;
}

class parser
{
public:
    explicit parser( std::vector<token> tokens ) : _tokens{ std::move( tokens ) } {}

    formula parse_all()
    {
        auto f = parse_iff();
        if ( peek().kind != tok::end )
            fail( "unexpected '" + peek().text + "'" );
        return f;
    }

private:
    const token& peek() const { return _tokens[ _pos ]; }

    [[noreturn]] void fail( const std::string& message ) const
    {
        throw parse_error( peek().line, peek().column, message );
    }

    bool accept( tok kind )
    {
        if ( peek().kind != kind )
            return false;
        ++_pos;
        return true;
    }

    void expect( tok kind, const char* what )
    {
        if ( !accept( kind ) )
        {
            if ( peek().kind == tok::end )
                fail( std::string( "expected " ) + what + " before end of input" );
            fail( std::string( "expected " ) + what + ", found '" + peek().text + "'" );
        }
    }

    formula parse_iff()
    {
        auto f = parse_implies();
        while ( accept( tok::dbl_arrow ) )
            f = iff( f, parse_implies() );
        return f;
    }

    formula parse_implies()
    {
        auto f = parse_or();
        if ( accept( tok::arrow ) )
            return implies( f, parse_implies() );
        return f;
    }

    formula parse_or()
    {
        auto f = parse_and();
        while ( accept( tok::bar ) )
            f = disj( f, parse_and() );
        return f;
    }

    formula parse_and()
    {
        auto f = parse_unary();
        while ( accept( tok::amp ) )
            f = conj( f, parse_unary() );
        return f;
    }

    formula parse_unary()
    {
        if ( accept( tok::tilde ) )
            return neg( parse_unary() );
        if ( accept( tok::kw_a ) )
            return universal( parse_unary() );
        if ( accept( tok::kw_e ) )
            return existential( parse_unary() );
        return parse_primary();
    }

    formula parse_primary()
    {
        const token& t = peek();
        switch ( t.kind )
        {
        case tok::ident:
            ++_pos;
            return prop( t.text );
        case tok::kw_true:
            ++_pos;
            return top();
        case tok::kw_false:
            ++_pos;
            return bot();
        case tok::kw_kh: {
            ++_pos;
            expect( tok::lparen, "'(' after Kh" );
            auto pre = parse_iff();
            expect( tok::comma, "','" );
            auto post = parse_iff();
            expect( tok::rparen, "')'" );
            return kh( pre, post );
        }
        case tok::lparen: {
            ++_pos;
            auto f = parse_iff();
            expect( tok::rparen, "')'" );
            return f;
        }
        case tok::end:
            fail( "unexpected end of input" );
        default:
            fail( "unexpected '" + t.text + "'" );
        }
    }

    std::vector<token> _tokens;
    std::size_t _pos = 0;
};

} // namespace

formula parse( std::string_view text )
{
    return parser{ tokenize( text ) }.parse_all();
}

bool is_proposition_name( std::string_view name )
{
    if ( name.empty() || !std::islower( static_cast<unsigned char>( name.front() ) ) )
        return false;
    for ( char c : name )
        if ( !ident_char( c ) )
            return false;
    return name != "true" && name != "false";
}

} // namespace khsat
