#ifndef JETKT_TESTS_SUPPORT_HPP
#define JETKT_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "jetkt/cdiff.hpp"
#include "jetkt/equation.hpp"

namespace jetkt::testing {

inline MultiIndex mi(std::vector<int> counts)
{
    return MultiIndex::from_counts(counts);
}

// Context (x, t) with one dependent u.
inline JetContext xt_context(std::vector<int> tiers = {})
{
    return JetContext({"x", "t"}, {"u"}, std::move(tiers));
}

inline JetSymbol u(std::vector<int> counts = {})
{
    return JetSymbol::dependent(0, MultiIndex::from_counts(counts));
}

inline DiffPoly U(std::vector<int> counts = {})
{
    return DiffPoly(u(std::move(counts)));
}

// u_t = u u_x + u_xxx
inline EquationSystem kdv()
{
    JetContext ctx = xt_context();
    return EquationSystem(ctx, {{u({0, 1}), U() * U({1}) + U({3})}});
}

// u_t = u_xx
inline EquationSystem heat()
{
    return EquationSystem(xt_context(), {{u({0, 1}), U({2})}});
}

// u_t = u u_x + u_xx
inline EquationSystem burgers()
{
    return EquationSystem(xt_context(), {{u({0, 1}), U() * U({1}) + U({2})}});
}

// F = (u_x, u_y) on (x, y).
inline EquationSystem gradient_system()
{
    JetContext ctx({"x", "y"}, {"u"});
    return EquationSystem(ctx, {{u({1}), DiffPoly{}}, {u({0, 1}), DiffPoly{}}});
}

// Delta_1 = (D_y, -D_x): P_1 (rank 2) -> P_2 (rank 1).
inline CDiffOp gradient_compat()
{
    CDiffOp op(1, 2);
    op.add(0, 0, mi({0, 1}), DiffPoly(1L));
    op.add(0, 1, mi({1}), DiffPoly(-1L));
    return op;
}

// Random polynomials over a fixed symbol pool.
class PolyGen {
public:
    explicit PolyGen(std::uint32_t seed, int n = 2) : rng_(seed), n_(n) {}

    std::mt19937& rng() { return rng_; }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Rational coefficient()
    {
        int num = uniform(-5, 5);
        if (num == 0) {
            num = 1;
        }
        return Rational(num, uniform(1, 3));
    }

    MultiIndex sigma(int max_order)
    {
        std::vector<int> counts(static_cast<std::size_t>(n_));
        int order = uniform(0, max_order);
        for (int k = 0; k < order; ++k) {
            counts[static_cast<std::size_t>(uniform(0, n_ - 1))]++;
        }
        return MultiIndex::from_counts(counts);
    }

    JetSymbol symbol(int max_order, int dependents = 1, bool base = true, std::vector<int> tiers = {})
    {
        const int kinds = 1 + (base ? 1 : 0) + static_cast<int>(tiers.size());
        const int pick = uniform(0, kinds - 1);
        if (pick == 0) {
            return JetSymbol::dependent(uniform(0, dependents - 1), sigma(max_order));
        }
        if (base && pick == 1) {
            return JetSymbol::base(uniform(0, n_ - 1));
        }
        const int tier = tiers[static_cast<std::size_t>(pick - 1 - (base ? 1 : 0))];
        return JetSymbol::antifield(tier, 0, sigma(max_order));
    }

    // Even polynomial in dependents (and optionally base coordinates).
    DiffPoly poly(int terms, int max_degree, int max_order, int dependents = 1, bool base = true)
    {
        DiffPoly p;
        for (int k = 0; k < terms; ++k) {
            DiffPoly m(coefficient());
            const int deg = uniform(0, max_degree);
            for (int d = 0; d < deg; ++d) {
                m = m * DiffPoly(symbol(max_order, dependents, base));
            }
            p += m;
        }
        return p;
    }

    // Mixed polynomial including antifields of the given tiers.
    DiffPoly graded_poly(int terms, int max_degree, int max_order, std::vector<int> tiers)
    {
        DiffPoly p;
        for (int k = 0; k < terms; ++k) {
            DiffPoly m(coefficient());
            const int deg = uniform(0, max_degree);
            for (int d = 0; d < deg; ++d) {
                m = m * DiffPoly(symbol(max_order, 1, true, tiers));
            }
            p += m;
        }
        return p;
    }

    CDiffOp op(int rows, int cols, int max_order, int terms = 2, int coeff_degree = 1, int dependents = 1)
    {
        CDiffOp o(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                for (int k = 0; k < terms; ++k) {
                    o.add(r, c, sigma(max_order), poly(1, coeff_degree, 1, dependents));
                }
            }
        }
        return o;
    }

private:
    std::mt19937 rng_;
    int n_;
};

} // namespace jetkt::testing

#endif
