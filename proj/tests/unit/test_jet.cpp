#include <doctest.h>

#include "jetkt/jet.hpp"
#include "support.hpp"

using namespace jetkt;
using namespace jetkt::testing;

TEST_CASE("total_derivative examples")
{
    const JetContext ctx = xt_context({1});
    CHECK(total_derivative(ctx.x(0), 0) == DiffPoly(1L));
    CHECK(total_derivative(U() * U({1}), 0) == U({1}) * U({1}) + U() * U({2}));
    CHECK(total_derivative(ctx.c(1, 0), 0) == ctx.c(1, 0, mi({1})));
    CHECK(total_derivative(ctx.c(1, 0), 0).parity() == 1);

    CHECK(total_derivative(U(), mi({2})) == U({2}));
    CHECK(total_derivative(total_derivative(U(), 0), 1) == total_derivative(total_derivative(U(), 1), 0));
    CHECK(total_derivative(U(), mi({1, 1})) == U({1, 1}));
    const DiffPoly f = U() * U({1}) + ctx.x(1);
    CHECK(total_derivative(f, MultiIndex{}) == f);
}

TEST_CASE("linearize examples")
{
    const JetContext ctx = xt_context();
    CHECK(linearize(Section{U({2})}, ctx) == CDiffOp::derivative(mi({2})));
    CHECK(linearize(Section{U() * U({1})}, ctx) ==
          CDiffOp::multiplication(U({1})) + CDiffOp::derivative(mi({1}), U()));
    CDiffOp expected = CDiffOp::derivative(mi({0, 1})) - CDiffOp::multiplication(U({1})) -
                       CDiffOp::derivative(mi({1}), U()) - CDiffOp::derivative(mi({3}));
    CHECK(linearize(kdv().F(), ctx) == expected);
}

TEST_CASE("euler examples")
{
    const JetContext ctx = xt_context();
    const auto targets = dependent_targets(ctx);
    CHECK(euler(Rational(1, 2) * U({1}) * U({1}), targets)[0] == -U({2}));
    CHECK(euler(total_derivative(U() * U({2}), 0), targets)[0].is_zero());
    CHECK(euler(Rational(1, 6) * pow(U(), 3), targets)[0] == Rational(1, 2) * U() * U());
}

TEST_CASE("evolutionary_apply examples")
{
    const JetContext ctx = xt_context();
    const DiffPoly phi = U() * U() + ctx.x(0);
    const EvolutionaryGenerator g = generator_on_dependents(Section{phi});
    CHECK(evolutionary_apply(g, U({1})) == total_derivative(phi, 0));
    const EvolutionaryGenerator ux = generator_on_dependents(Section{U({1})});
    CHECK(evolutionary_apply(ux, U() * U({1})) == U({1}) * U({1}) + U() * U({2}));
    CHECK(evolutionary_apply(g, ctx.x(0) * ctx.x(0)).is_zero());
}

TEST_CASE("horizontal_d examples")
{
    const JetContext ctx = xt_context();
    HorizontalForm w(2, 1);
    w.set({0}, U());
    HorizontalForm expected(2, 2);
    expected.set({0, 1}, -U({0, 1}));
    CHECK(horizontal_d(w) == expected);

    const HorizontalForm f = HorizontalForm::function(2, ctx.x(0) * U({1}));
    HorizontalForm df(2, 1);
    df.set({0}, U({1}) + ctx.x(0) * U({2}));
    df.set({1}, ctx.x(0) * U({1, 1}));
    CHECK(horizontal_d(f) == df);

    HorizontalForm v(2, 1);
    v.set({0}, U() * U({1}));
    CHECK(horizontal_d(horizontal_d(v)).is_zero());

    // The current (J_x, J_t) has differential (D_x J_x + D_t J_t) dx^dt.
    const HorizontalForm cur = HorizontalForm::from_current({U() * U(), U({1})});
    CHECK(horizontal_d(cur).top_coefficient() == total_derivative(U() * U(), 0) + U({1, 1}));
    CHECK(cur.current() == std::vector<DiffPoly>{U() * U(), U({1})});
}

TEST_CASE("jet calculus identities on random samples")
{
    PolyGen gen(101);
    const JetContext ctx = xt_context();
    const auto targets = dependent_targets(ctx);
    for (int trial = 0; trial < 60; ++trial) {
        const DiffPoly f = gen.poly(4, 3, 2);
        const DiffPoly g = gen.poly(3, 2, 2);
        CHECK(total_derivative(total_derivative(f, 0), 1) == total_derivative(total_derivative(f, 1), 0));
        CHECK(euler(total_derivative(f, 0), targets)[0].is_zero());
        CHECK(euler(total_derivative(f, 1), targets)[0].is_zero());

        // Product rule for linearization.
        const CDiffOp lfg = linearize(Section{f * g}, ctx);
        CHECK(lfg == cdiff_compose(CDiffOp::multiplication(f), linearize(Section{g}, ctx)) +
                         cdiff_compose(CDiffOp::multiplication(g), linearize(Section{f}, ctx)));

        // Evolutionary fields commute with total derivatives.
        const auto phi = generator_on_dependents(Section{gen.poly(2, 2, 1)});
        CHECK(evolutionary_apply(phi, total_derivative(f, 0)) == total_derivative(evolutionary_apply(phi, f), 0));

        // Helmholtz: linearizations of Euler images are self-adjoint.
        const CDiffOp l = linearize(euler(f, targets), ctx);
        CHECK(cdiff_adjoint(l) == l);

        // Infinitesimal Stokes formula.
        const Section chi{gen.poly(2, 2, 1)};
        const Section e = euler(f, targets);
        const DiffPoly lhs = euler(evolutionary_apply(generator_on_dependents(chi), f), targets)[0];
        const DiffPoly rhs = cdiff_apply(linearize(e, ctx), chi)[0] + cdiff_apply(cdiff_adjoint(linearize(chi, ctx)), e)[0];
        CHECK(lhs == rhs);
    }
}

TEST_CASE("two dependents: Stokes formula and Helmholtz")
{
    PolyGen gen(7);
    const JetContext ctx({"x", "t"}, {"u", "v"});
    const auto targets = dependent_targets(ctx);
    for (int trial = 0; trial < 20; ++trial) {
        const DiffPoly f = gen.poly(4, 3, 2, 2);
        const Section e = euler(f, targets);
        const CDiffOp l = linearize(e, ctx);
        CHECK(cdiff_adjoint(l) == l);
        const Section chi{gen.poly(2, 2, 1, 2), gen.poly(2, 2, 1, 2)};
        const Section lhs = euler(evolutionary_apply(generator_on_dependents(chi), f), targets);
        const Section rhs = cdiff_apply(l, chi) + cdiff_apply(cdiff_adjoint(linearize(chi, ctx)), e);
        CHECK(lhs == rhs);
    }
}
