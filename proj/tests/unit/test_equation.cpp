#include <doctest.h>

#include "jetkt/equation.hpp"
#include "support.hpp"

using namespace jetkt;
using namespace jetkt::testing;

TEST_CASE("reduce examples")
{
    const EquationSystem e = kdv();
    CHECK(e.reduce(U({0, 1})) == U() * U({1}) + U({3}));
    CHECK(e.reduce(U({1, 1})) == U({1}) * U({1}) + U() * U({2}) + U({4}));
    CHECK(heat().reduce(U({0, 2})) == U({4}));
    const DiffPoly f = U({2}) * U({0, 1});
    CHECK(e.reduce(e.reduce(f)) == e.reduce(f));
}

TEST_CASE("decompose examples")
{
    const EquationSystem e = kdv();
    auto [lambda, r] = e.decompose(e.F(0));
    CHECK(lambda == CDiffOp::identity(1));
    CHECK(r.is_zero());

    auto [lx, rx] = e.decompose(U({1, 1}));
    CHECK(lx == CDiffOp::derivative(mi({1})));
    CHECK(rx == U({1}) * U({1}) + U() * U({2}) + U({4}));

    auto [l0, r0] = e.decompose(U() * U({3}));
    CHECK(l0.is_zero());
    CHECK(r0 == U() * U({3}));
}

TEST_CASE("solved form validation")
{
    const JetContext ctx = xt_context();
    CHECK_THROWS_AS(EquationSystem(ctx, {{u({0, 1}), U({0, 2})}}), Error);
    CHECK_THROWS_AS(EquationSystem(ctx, {{u({0, 1}), U()}, {u({1, 1}), U()}}), Error);
    // u_x = u and u_t = x are not compatible: D_t(u) != D_x(x).
    try {
        EquationSystem bad(ctx, {{u({1}), U()}, {u({0, 1}), ctx.x(0)}});
        FAIL("expected a confluence failure");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotConfluent);
    }
    CHECK_NOTHROW(gradient_system());
}

TEST_CASE("equation ideal properties")
{
    PolyGen gen(3);
    const EquationSystem e = kdv();
    const JetContext& ctx = e.context();
    for (int trial = 0; trial < 40; ++trial) {
        const DiffPoly f = gen.poly(3, 2, 2);
        const DiffPoly g = gen.poly(3, 2, 2);
        CHECK(e.reduce(f * g) == e.reduce(e.reduce(f) * e.reduce(g)));

        auto [lambda, r] = e.decompose(f);
        CHECK(r == e.reduce(f));
        CHECK(cdiff_apply(lambda, e.F())[0] + r == f);

        // Elements of I^2 have linearizations vanishing on the equation.
        const CDiffOp d1 = gen.op(1, 1, 2);
        const CDiffOp d2 = gen.op(1, 1, 2);
        const DiffPoly sq = cdiff_apply(d1, e.F())[0] * cdiff_apply(d2, e.F())[0];
        CHECK(e.reduce(linearize(Section{sq}, ctx)).is_zero());
    }
}
