#ifndef JETKT_EXPR_HPP
#define JETKT_EXPR_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "jetkt/error.hpp"

namespace jetkt {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr int kMaxIndependents = 7;
inline constexpr int kMaxCount = 63;

// Symmetric multi-index over the independent variables. Counts are stored
// per variable (0-based); the order is the sum of counts.
class MultiIndex {
public:
    MultiIndex() = default;
    static MultiIndex single(int var);
    static MultiIndex from_counts(const std::vector<int>& counts);

    int count(int var) const { return counts_[static_cast<std::size_t>(var)]; }
    int order() const;
    bool empty() const { return order() == 0; }

    MultiIndex operator+(const MultiIndex& other) const;
    MultiIndex with_added(int var, int times = 1) const;
    // True when every count of *this is <= the matching count of other.
    bool divides(const MultiIndex& other) const;
    // other - *this; requires divides(other).
    MultiIndex complement_in(const MultiIndex& other) const;

    // Variables listed with repetition, in increasing variable order.
    std::vector<int> expand() const;

    std::uint64_t packed() const;
    static MultiIndex unpack(std::uint64_t bits);

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    // Graded order first, then by counts (variable 0 least significant).
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b)
    {
        return a.packed_order_key() <=> b.packed_order_key();
    }

private:
    std::uint64_t packed_order_key() const;
    std::array<std::uint8_t, kMaxIndependents> counts_{};
};

enum class SymbolKind : std::uint8_t { Base = 0, Dependent = 1, Antifield = 2 };

// A jet coordinate packed into 64 bits so that integer order is the global
// symbol order: base symbols, then dependents by (j, sigma), then antifields
// by (tier, component, sigma).
class JetSymbol {
public:
    JetSymbol() = default;

    static JetSymbol base(int i);
    static JetSymbol dependent(int j, const MultiIndex& sigma = {});
    static JetSymbol antifield(int tier, int component, const MultiIndex& sigma = {});

    SymbolKind kind() const { return static_cast<SymbolKind>(bits_ >> 62); }
    bool is_base() const { return kind() == SymbolKind::Base; }
    bool is_dependent() const { return kind() == SymbolKind::Dependent; }
    bool is_antifield() const { return kind() == SymbolKind::Antifield; }

    // Base: variable index; Dependent: j; Antifield: tier.
    int index() const { return static_cast<int>((bits_ >> 56) & 0x3f); }
    int component() const { return static_cast<int>((bits_ >> 50) & 0x3f); }
    int tier() const { return is_antifield() ? index() : 0; }
    MultiIndex sigma() const;
    int order() const { return static_cast<int>((bits_ >> 42) & 0xff); }

    int parity() const { return is_antifield() ? (index() & 1) : 0; }
    bool odd() const { return parity() == 1; }
    int antighost() const { return tier(); }

    // The symbol with sigma extended by one more derivative in variable var.
    // Base symbols have no prolongation.
    JetSymbol prolonged(int var, int times = 1) const;
    JetSymbol prolonged(const MultiIndex& tau) const;
    // Same fiber coordinate with sigma = 0.
    JetSymbol root() const;

    std::uint64_t bits() const { return bits_; }

    friend bool operator==(const JetSymbol&, const JetSymbol&) = default;
    friend auto operator<=>(const JetSymbol&, const JetSymbol&) = default;

private:
    explicit JetSymbol(std::uint64_t bits) : bits_(bits) {}
    static JetSymbol make(SymbolKind kind, int index, int component, const MultiIndex& sigma);
    std::uint64_t bits_ = 0;
};

struct Factor {
    JetSymbol symbol;
    std::uint32_t exponent = 1;
    friend bool operator==(const Factor&, const Factor&) = default;
    friend auto operator<=>(const Factor&, const Factor&) = default;
};

// Product of symbols in canonical (increasing) order; odd symbols appear with
// exponent 1.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(JetSymbol s, std::uint32_t exponent = 1);

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }

    int parity() const;
    int antighost() const;
    int degree() const;
    // Degree counted over one kind of symbol only.
    int degree_of(SymbolKind kind) const;
    int max_order() const;
    std::uint32_t exponent_of(JetSymbol s) const;

    // Canonical product with its Koszul sign; sign 0 means the product vanishes.
    static std::pair<int, Monomial> multiply(const Monomial& a, const Monomial& b);

    // Left derivative d/ds: (sign * exponent, remaining monomial). Returns
    // multiplier 0 when s does not occur.
    std::pair<long, Monomial> left_derivative(JetSymbol s) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.factors_ <=> b.factors_; }

private:
    friend class DiffPoly;
    std::vector<Factor> factors_;
};

class JetContext;

// Graded-commutative polynomial in jet and antifield coordinates with exact
// rational coefficients. Zero coefficients are never stored.
class DiffPoly {
public:
    using TermMap = std::map<Monomial, Rational>;

    DiffPoly() = default;
    DiffPoly(long constant);                       // NOLINT(google-explicit-constructor)
    DiffPoly(const Rational& constant);            // NOLINT(google-explicit-constructor)
    explicit DiffPoly(JetSymbol s);
    DiffPoly(const Monomial& m, const Rational& c);

    // Tags the polynomial with a jet context; tag 0 is compatible with every context.
    DiffPoly& tag(std::uint32_t context_id);
    std::uint32_t context_id() const { return context_; }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    std::size_t size() const { return terms_.size(); }

    // -1 when inhomogeneous; the zero polynomial reports 0.
    int parity() const;
    int antighost() const;
    int max_order() const;
    int degree() const;

    DiffPoly operator-() const;
    DiffPoly& operator+=(const DiffPoly& other);
    DiffPoly& operator-=(const DiffPoly& other);
    DiffPoly& operator*=(const Rational& c);
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
    friend DiffPoly operator*(DiffPoly a, const Rational& c) { return a *= c; }
    friend DiffPoly operator*(const Rational& c, DiffPoly a) { return a *= c; }
    friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.terms_ == b.terms_; }

    void add_term(const Monomial& m, const Rational& c);

    // Symbols occurring anywhere, sorted.
    std::vector<JetSymbol> symbols() const;
    bool contains(const std::function<bool(JetSymbol)>& pred) const;
    // Keep only terms whose monomial satisfies pred.
    DiffPoly filter(const std::function<bool(const Monomial&)>& pred) const;

    // Canonical rendering: terms sorted by (antighost, degree, symbol order).
    std::string render(const JetContext& ctx) const;
    // Same term order with caller-supplied symbol names.
    std::string render(const std::function<std::string(JetSymbol)>& name) const;

private:
    void check_context(const DiffPoly& other);
    TermMap terms_;
    std::uint32_t context_ = 0;
};

DiffPoly pow(const DiffPoly& base, unsigned exponent);

// Graded left partial derivative.
DiffPoly partial_derivative(const DiffPoly& f, JetSymbol s);

// Homogeneous derivation X given by its values on symbols:
// X(f) = sum_s X(s) * d^L f / ds. `image` may return zero for inert symbols.
DiffPoly apply_derivation(const DiffPoly& f, const std::function<DiffPoly(JetSymbol)>& image);

using SubstitutionRule = std::map<JetSymbol, DiffPoly>;

// Homomorphic substitution of symbols. Throws on parity mismatch.
DiffPoly substitute(const DiffPoly& f, const SubstitutionRule& rule);

std::string render_rational(const Rational& q);

} // namespace jetkt

#endif
