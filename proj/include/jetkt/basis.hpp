#ifndef JETKT_BASIS_HPP
#define JETKT_BASIS_HPP

#include <map>
#include <utility>
#include <vector>

#include "jetkt/context.hpp"
#include "jetkt/jet.hpp"
#include "jetkt/linalg.hpp"

namespace jetkt {

// Monomials of total degree <= max_degree in the given symbols; odd symbols
// occur at most once. Sorted in the canonical monomial order.
std::vector<Monomial> monomials_up_to(const std::vector<JetSymbol>& symbols, int max_degree);

// Monomials in x_0..x_{n-1} of degree <= max_degree.
std::vector<Monomial> base_monomials(int n, int max_degree);

// Antifield monomials of antighost exactly p with jet order <= max_order.
std::vector<Monomial> antifield_monomials(const JetContext& ctx, int p, int max_order);

// Products a * b for all pairs, skipping vanishing ones.
std::vector<Monomial> products(const std::vector<Monomial>& a, const std::vector<Monomial>& b);

// Assigns consecutive coordinates to (component, monomial) keys in order of
// first appearance, so vectors built from a fixed sequence are reproducible.
class Coordinates {
public:
    int index(int component, const Monomial& m);
    SparseVec vectorize(const DiffPoly& p, int component = 0);
    SparseVec vectorize(const Section& s);
    int size() const { return static_cast<int>(keys_.size()); }

private:
    std::map<std::pair<int, Monomial>, int> keys_;
};

} // namespace jetkt

#endif
