#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace khsat
{

// Malformed user input: formula text, model files, command-line values.
class input_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public input_error
{
public:
    parse_error( std::size_t line, std::size_t column, const std::string& message )
            : input_error( std::to_string( line ) + ":" + std::to_string( column ) + ": " + message ),
              _line{ line }, _column{ column }
    {
    }

    [[nodiscard]] std::size_t line() const { return _line; }
    [[nodiscard]] std::size_t column() const { return _column; }

private:
    std::size_t _line;
    std::size_t _column;
};

// A caller broke an operation's precondition (e.g. a modality inside a
// propositional query).
class contract_violation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

// A SAT answer failed independent re-verification. Never swallowed.
class soundness_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class budget_exceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace khsat
