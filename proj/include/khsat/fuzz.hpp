#pragma once

#include "khsat/formula.hpp"
#include "khsat/oracle.hpp"
#include "khsat/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace khsat
{

enum class fuzz_mode : std::uint8_t
{
    // Arbitrary formulas, Kh nesting up to depth two.
    general,
    // Conjunctions of positive atoms.
    positive,
    // Conjunctions of negative atoms.
    negative,
    // Conjunctions of both.
    mixed,
};

struct fuzz_options
{
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    oracle_bounds bounds{ 3, 2, { "p", "q", "r" } };
    fuzz_mode mode = fuzz_mode::general;
    solver_options solver;
    oracle_options oracle;
    std::size_t jobs = 1;
};

struct fuzz_disagreement
{
    std::size_t trial;
    std::uint64_t seed;
    formula phi;
    // "oracle-sat-solver-unsat" or "soundness".
    std::string kind;
    std::string detail;
};

struct fuzz_report
{
    std::size_t trials = 0;
    std::size_t solver_sat = 0;
    std::size_t oracle_sat = 0;
    // Solver SAT with a model larger than the oracle bounds reach.
    std::size_t solver_only_sat = 0;
    std::size_t both_unsat = 0;
    std::vector<fuzz_disagreement> disagreements;
};

// Seed of one trial, derived from the run seed.
std::uint64_t trial_seed( std::uint64_t seed, std::size_t trial );

formula random_formula( std::uint64_t seed, fuzz_mode mode, const std::vector<std::string>& props );

fuzz_report fuzz( const fuzz_options& options );

// One JSON object, no trailing newline.
std::string to_json_line( const fuzz_disagreement& d );

fuzz_mode parse_fuzz_mode( const std::string& name );

} // namespace khsat
