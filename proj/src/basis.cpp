#include "jetkt/basis.hpp"

#include <algorithm>
#include <set>

namespace jetkt {

namespace {

void extend(const std::vector<JetSymbol>& symbols, std::size_t start, int remaining, const Monomial& current,
            std::vector<Monomial>& out)
{
    out.push_back(current);
    if (remaining == 0) {
        return;
    }
    for (std::size_t k = start; k < symbols.size(); ++k) {
        const JetSymbol s = symbols[k];
        if (s.odd() && current.exponent_of(s) > 0) {
            continue;
        }
        auto [sign, next] = Monomial::multiply(current, Monomial(s));
        if (sign == 0) {
            continue;
        }
        // Even symbols may repeat, so the next choice starts at k again.
        extend(symbols, s.odd() ? k + 1 : k, remaining - 1, next, out);
    }
}

} // namespace

std::vector<Monomial> monomials_up_to(const std::vector<JetSymbol>& symbols, int max_degree)
{
    std::vector<JetSymbol> sorted = symbols;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Monomial> out;
    extend(sorted, 0, std::max(max_degree, 0), Monomial{}, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Monomial> base_monomials(int n, int max_degree)
{
    std::vector<JetSymbol> xs;
    for (int i = 0; i < n; ++i) {
        xs.push_back(JetSymbol::base(i));
    }
    return monomials_up_to(xs, max_degree);
}

std::vector<Monomial> antifield_monomials(const JetContext& ctx, int p, int max_order)
{
    std::vector<JetSymbol> symbols;
    for (int t = 1; t <= std::min(p, ctx.tier_count()); ++t) {
        const auto s = ctx.antifield_symbols(t, max_order);
        symbols.insert(symbols.end(), s.begin(), s.end());
    }
    std::vector<Monomial> out;
    for (const auto& m : monomials_up_to(symbols, p)) {
        if (m.antighost() == p) {
            out.push_back(m);
        }
    }
    return out;
}

std::vector<Monomial> products(const std::vector<Monomial>& a, const std::vector<Monomial>& b)
{
    std::set<Monomial> seen;
    std::vector<Monomial> out;
    for (const auto& x : a) {
        for (const auto& y : b) {
            auto [sign, m] = Monomial::multiply(x, y);
            if (sign != 0 && seen.insert(m).second) {
                out.push_back(m);
            }
        }
    }
    return out;
}

int Coordinates::index(int component, const Monomial& m)
{
    auto [it, inserted] = keys_.try_emplace({component, m}, static_cast<int>(keys_.size()));
    return it->second;
}

SparseVec Coordinates::vectorize(const DiffPoly& p, int component)
{
    std::map<int, Rational> entries;
    for (const auto& [m, c] : p.terms()) {
        entries[index(component, m)] += c;
    }
    return make_sparse(std::move(entries));
}

SparseVec Coordinates::vectorize(const Section& s)
{
    std::map<int, Rational> entries;
    for (std::size_t k = 0; k < s.size(); ++k) {
        for (const auto& [m, c] : s[k].terms()) {
            entries[index(static_cast<int>(k), m)] += c;
        }
    }
    return make_sparse(std::move(entries));
}

} // namespace jetkt
