#ifndef JETKT_PROBLEM_HPP
#define JETKT_PROBLEM_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jetkt/cdiff.hpp"
#include "jetkt/equation.hpp"

namespace jetkt {

// Diagnostic codes:
//   E_LEX                 character outside the language
//   E_SYNTAX              unexpected token
//   E_LIMIT               exponent, subscript or expression size out of range
//   E_DECLARATION         bad or repeated declaration
//   E_UNKNOWN_SYMBOL      name not declared
//   E_SUBSCRIPT           subscript letter is not an independent variable
//   E_OPERATOR            total derivative D_* where a function is expected
//   E_SOLVED_FORM         left side not a derivative symbol, or right side not reduced
//   E_DUPLICATE_LEADING   two equations with the same leading symbol
//   E_LEADING_OVERLAP     a leading symbol is a derivative of another
//   E_PARITY              antifield inside an equation, operator entry or function
//   E_SHAPE               operator or cosymmetry size does not match the system
//   E_ANTIFIELD           antifield declaration inconsistent with the system
//   E_EMPTY               no equations
struct Diagnostic {
    std::string code;
    int line = 1;
    int column = 1;
    std::string message;

    std::string format(const std::string& file = "") const;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(Diagnostic d) : std::runtime_error(d.format()), diagnostic_(std::move(d)) {}
    const Diagnostic& diagnostic() const { return diagnostic_; }

private:
    Diagnostic diagnostic_;
};

struct AntifieldDecl {
    std::string name;
    int rank = 1;
    int tier = 1;
};

struct NamedOperator {
    std::string name;
    CDiffOp op;
};

struct NamedPoly {
    std::string name;
    DiffPoly value;
};

struct NamedSection {
    std::string name;
    Section value;
};

class ProblemFile {
public:
    std::vector<std::string> independents;
    std::vector<std::string> dependents;
    std::vector<AntifieldDecl> antifields;
    std::vector<SolvedEquation> equations;
    std::vector<NamedOperator> compat;
    std::vector<NamedPoly> densities;
    std::vector<NamedSection> cosymmetries;

    // Tier ranks: number of equations, then the row count of each compat operator.
    std::vector<int> tier_ranks() const;
    JetContext context() const;
    // Throws jetkt::Error when the equations are not confluent.
    EquationSystem system() const;

    // DSL spelling of symbols, polynomials and operators.
    std::string name(JetSymbol s) const;
    std::string render(const DiffPoly& p) const;
    std::string render(const CDiffOp& op) const;       // [[a, b], [c, d]]
    std::string render_row(const CDiffOp& op, int row) const;
    std::string render_entry(const CDiffOp& op, int row, int col) const;
    std::string render_equation(std::size_t a) const;
};

ProblemFile parse_problem(std::string_view text);

// Canonical text; parse_problem(render_problem(p)) reproduces p.
std::string render_problem(const ProblemFile& problem);

} // namespace jetkt

#endif
