#ifndef JETKT_CONTEXT_HPP
#define JETKT_CONTEXT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "jetkt/expr.hpp"

namespace jetkt {

// Declared variables of a jet space: n independents, m dependents and the
// antifield tiers 1..k-1 with their fiber ranks. Tier i antifields have
// antighost i and parity i mod 2.
class JetContext {
public:
    JetContext(std::vector<std::string> independents, std::vector<std::string> dependents,
               std::vector<int> tier_ranks = {});

    int n() const { return static_cast<int>(independents_.size()); }
    int m() const { return static_cast<int>(dependents_.size()); }
    const std::vector<std::string>& independents() const { return independents_; }
    const std::vector<std::string>& dependents() const { return dependents_; }

    int tier_count() const { return static_cast<int>(tier_ranks_.size()); }
    // tier is 1-based.
    int tier_rank(int tier) const;
    const std::vector<int>& tier_ranks() const { return tier_ranks_; }
    JetContext with_tiers(std::vector<int> tier_ranks) const;

    // Identifies the declared independents and dependents; antifield tiers
    // extend a context without changing its id.
    std::uint32_t id() const { return id_; }

    int independent_index(const std::string& name) const;
    int dependent_index(const std::string& name) const;

    DiffPoly x(int i) const;
    DiffPoly u(int j, const MultiIndex& sigma = {}) const;
    DiffPoly c(int tier, int component, const MultiIndex& sigma = {}) const;
    DiffPoly constant(const Rational& q) const;

    // Canonical symbol rendering: x, u[1]_{x^2 t}, c1[1]_{x}.
    std::string render(JetSymbol s) const;
    std::string render(const MultiIndex& sigma) const;

    // All dependent (or antifield) symbols of jet order <= max_order.
    std::vector<JetSymbol> dependent_symbols(int max_order) const;
    std::vector<JetSymbol> antifield_symbols(int tier, int max_order) const;
    std::vector<MultiIndex> multi_indices(int max_order) const;

    friend bool operator==(const JetContext& a, const JetContext& b)
    {
        return a.independents_ == b.independents_ && a.dependents_ == b.dependents_ &&
               a.tier_ranks_ == b.tier_ranks_;
    }

private:
    std::vector<std::string> independents_;
    std::vector<std::string> dependents_;
    std::vector<int> tier_ranks_;
    std::uint32_t id_ = 0;
};

} // namespace jetkt

#endif
