#ifndef JETKT_JET_HPP
#define JETKT_JET_HPP

#include <map>
#include <string>
#include <vector>

#include "jetkt/context.hpp"
#include "jetkt/expr.hpp"

namespace jetkt {

// D_i = d/dx_i + sum over jet symbols s of s_{+i} d/ds. Acts on dependent and
// antifield coordinates alike, so it is the total derivative on horizontal jets.
DiffPoly total_derivative(const DiffPoly& f, int var);
DiffPoly total_derivative(const DiffPoly& f, const MultiIndex& sigma);
// (-D)_sigma f = (-1)^{|sigma|} D_sigma f.
DiffPoly adjoint_total_derivative(const DiffPoly& f, const MultiIndex& sigma);

// Ordered tuple of polynomials: an element of kappa, P_i, their duals or of
// kappa-hat(alpha). Components are indexed like the module's fiber basis.
struct Section {
    std::vector<DiffPoly> components;

    Section() = default;
    explicit Section(std::size_t rank) : components(rank) {}
    Section(std::initializer_list<DiffPoly> list) : components(list) {}
    explicit Section(std::vector<DiffPoly> comps) : components(std::move(comps)) {}

    std::size_t size() const { return components.size(); }
    DiffPoly& operator[](std::size_t i) { return components[i]; }
    const DiffPoly& operator[](std::size_t i) const { return components[i]; }
    bool is_zero() const;

    Section& operator+=(const Section& other);
    Section& operator-=(const Section& other);
    friend Section operator+(Section a, const Section& b) { return a += b; }
    friend Section operator-(Section a, const Section& b) { return a -= b; }
    friend Section operator*(const Rational& c, Section a);
    friend bool operator==(const Section&, const Section&) = default;

    std::string render(const JetContext& ctx) const;
};

// Pairing <a, b> = sum_k a_k * b_k (a on the left).
DiffPoly pairing(const Section& a, const Section& b);

// Generator of an evolutionary field: fiber coordinate (sigma = 0 symbol) to
// its component of the generating section.
using EvolutionaryGenerator = std::map<JetSymbol, DiffPoly>;

// Ev_phi(f) = sum D_sigma(phi^k) d^L f / d v^k_sigma; a derivation of parity
// parity(phi^k) - parity(v^k) that commutes with every D_i.
DiffPoly evolutionary_apply(const EvolutionaryGenerator& phi, const DiffPoly& f);
EvolutionaryGenerator generator_on_dependents(const Section& phi);

// Variational derivative with respect to the listed fiber coordinates
// (sigma = 0 symbols): E_k(f) = sum_sigma (-D)_sigma(d^L f / d v^k_sigma).
Section euler(const DiffPoly& density, const std::vector<JetSymbol>& targets);
std::vector<JetSymbol> dependent_targets(const JetContext& ctx);
std::vector<JetSymbol> antifield_targets(const JetContext& ctx);

// Horizontal q-form; only strictly increasing index tuples are stored.
class HorizontalForm {
public:
    HorizontalForm(int n, int degree) : n_(n), degree_(degree) {}

    // The (n-1)-form sum_i (-1)^i J_i dx_0 ^ .. ^ (omit i) ^ .. dx_{n-1}, whose
    // differential is (sum_i D_i J_i) dx_0 ^ .. ^ dx_{n-1}.
    static HorizontalForm from_current(const std::vector<DiffPoly>& flux);
    static HorizontalForm function(int n, const DiffPoly& f);

    int n() const { return n_; }
    int degree() const { return degree_; }
    const std::map<std::vector<int>, DiffPoly>& components() const { return components_; }
    const DiffPoly& component(const std::vector<int>& indices) const;
    void set(std::vector<int> indices, DiffPoly value);
    void add(std::vector<int> indices, const DiffPoly& value);
    bool is_zero() const { return components_.empty(); }

    // Coefficient of the volume form (degree n only).
    DiffPoly top_coefficient() const;
    // Inverse of from_current (degree n-1 only).
    std::vector<DiffPoly> current() const;

    friend bool operator==(const HorizontalForm&, const HorizontalForm&) = default;
    std::string render(const JetContext& ctx) const;

private:
    int n_;
    int degree_;
    std::map<std::vector<int>, DiffPoly> components_;
};

// d-bar omega = sum_i dx_i ^ D_i(omega). Degree n maps to the zero (n+1)-form.
HorizontalForm horizontal_d(const HorizontalForm& omega);

} // namespace jetkt

#endif
