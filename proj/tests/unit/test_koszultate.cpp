#include <doctest.h>

#include "jetkt/basis.hpp"
#include "jetkt/koszultate.hpp"
#include "support.hpp"

using namespace jetkt;
using namespace jetkt::testing;

namespace {

KTSetup kdv_setup()
{
    return kt_setup(kdv(), {});
}

KTSetup gradient_setup()
{
    return kt_setup(gradient_system(), {gradient_compat()});
}

// Random element of kappa-hat with components drawn from the window basis.
Section random_section(PolyGen& gen, const KTSetup& setup, const std::vector<Monomial>& basis, int terms = 2)
{
    Section s(static_cast<std::size_t>(setup.total_rank()));
    for (auto& c : s.components) {
        for (int k = 0; k < terms; ++k) {
            c += DiffPoly(basis[static_cast<std::size_t>(gen.uniform(0, static_cast<int>(basis.size()) - 1))],
                          gen.coefficient());
        }
    }
    return s;
}

} // namespace

TEST_CASE("kt_setup examples")
{
    CHECK_NOTHROW(gradient_setup());
    const KTSetup k = kdv_setup();
    CHECK(k.normal());
    CHECK(k.k() == 2);
    try {
        kt_setup(kdv(), {CDiffOp::derivative(mi({1}))});
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ValidationFailed);
    }
    CHECK_THROWS_AS(kt_setup(kdv(), {CDiffOp(1, 2)}), Error);
}

TEST_CASE("kt_delta examples")
{
    const KTSetup k = kdv_setup();
    CHECK(kt_delta(k, k.context().c(1, 0)) == kdv().F(0));
    CHECK(kt_delta(k, U() * U({2})).is_zero());

    const KTSetup g = gradient_setup();
    const JetContext& ctx = g.context();
    CHECK(kt_delta(g, ctx.c(2, 0)) == ctx.c(1, 0, mi({0, 1})) - ctx.c(1, 1, mi({1})));
    CHECK(kt_delta(g, ctx.c(1, 1, mi({1}))) == U({1, 1}));
}

TEST_CASE("kt_delta_squared_check")
{
    const KTSetup g = gradient_setup();
    const auto report = kt_delta_squared_check(g, {2, 2, 1, 0});
    CHECK(report.passed());
    CHECK(report.basis_size > 100);
    CHECK(kt_delta(g, kt_delta(g, g.context().c(2, 0))).is_zero());

    CHECK(kt_delta_squared_check(kdv_setup(), {2, 2, 2, 0}).passed());

    CDiffOp flipped(1, 2);
    flipped.add(0, 0, mi({0, 1}), DiffPoly(1L));
    flipped.add(0, 1, mi({1}), DiffPoly(1L));
    CHECK_THROWS_AS(kt_setup(gradient_system(), {flipped}), Error);
    const KTSetup bad = KTSetup::unchecked(gradient_system(), {flipped});
    const auto bad_report = kt_delta_squared_check(bad, {2, 1, 0, 0});
    CHECK_FALSE(bad_report.passed());
    bool found = false;
    for (const auto& [m, v] : bad_report.failures) {
        if (m == DiffPoly(JetSymbol::antifield(2, 0))) {
            found = true;
            CHECK(v == Rational(2) * U({1, 1}));
        }
    }
    CHECK(found);
}

TEST_CASE("lphi_star examples")
{
    const KTSetup k = kdv_setup();
    CHECK(lphi_star(k, Section{U() * U({1})}).is_zero());

    const KTSetup g = gradient_setup();
    const JetContext& ctx = g.context();
    const Section theta{DiffPoly{}, DiffPoly{}, ctx.x(0) * ctx.x(1)};
    // Delta_1^* = (-D_y, D_x)^T applied to x y.
    CHECK(lphi_star(g, theta) == Section{-ctx.x(0), ctx.x(1), DiffPoly{}});
    CHECK(lphi_star(g, Section(3)).is_zero());

    // Arity zero in P-hat: delta vanishes and only the shift acts.
    const Section constant{DiffPoly{}, DiffPoly{}, U({1})};
    CHECK(kt_delta_hat(g, constant).is_zero());
    CHECK(total_differential(g, constant) == Section{-U({1, 1}), U({2}), DiffPoly{}});
}

TEST_CASE("bicomplex structure on random sections")
{
    PolyGen gen(41);
    for (const KTSetup& setup : {kdv_setup(), gradient_setup()}) {
        const auto basis = truncation_basis(setup, {3, 2, 1, 0});
        for (int trial = 0; trial < 40; ++trial) {
            const Section theta = random_section(gen, setup, basis);
            CHECK(lphi_star(setup, lphi_star(setup, theta)).is_zero());
            CHECK(kt_delta_hat(setup, kt_delta_hat(setup, theta)).is_zero());
            CHECK((kt_delta_hat(setup, lphi_star(setup, theta)) + lphi_star(setup, kt_delta_hat(setup, theta))).is_zero());
            CHECK(total_differential(setup, total_differential(setup, theta)).is_zero());

            // The Euler operator in the antifield directions is a chain map.
            const DiffPoly w = DiffPoly(basis[static_cast<std::size_t>(gen.uniform(0, static_cast<int>(basis.size()) - 1))],
                                        gen.coefficient());
            CHECK(euler_antifields(setup, kt_delta(setup, w)) == total_differential(setup, euler_antifields(setup, w)));
            if (w.antighost() >= 1) {
                const DiffPoly dw = kt_delta(setup, w);
                CHECK((dw.is_zero() || dw.antighost() == w.antighost() - 1));
            }
        }
    }
}

TEST_CASE("selfadjoint_project examples")
{
    const KTSetup g = gradient_setup();
    const JetContext& ctx = g.context();
    // Even tier: the multiplication operator u is self-adjoint, D_x is skew.
    CDiffOp mult(3, 3);
    mult.add(2, 2, {}, U());
    const MultiLinOp sa = MultiLinOp::from_operator(g, mult);
    CHECK(sa.arity == 1);
    CHECK(selfadjoint_project(g, sa).psi == sa.psi);
    CDiffOp dx(3, 3);
    dx.add(2, 2, mi({1}), DiffPoly(1L));
    CHECK(selfadjoint_project(g, MultiLinOp::from_operator(g, dx)).psi.is_zero());
    CDiffOp skew(3, 3);
    skew.add(2, 2, mi({1}), U());
    skew.add(2, 2, {}, Rational(1, 2) * U({1}));
    CHECK(cdiff_adjoint(skew) == -skew);
    CHECK(selfadjoint_project(g, MultiLinOp::from_operator(g, skew)).psi.is_zero());
    CHECK(MultiLinOp::from_operator(g, mult).as_operator(g) == mult);

    PolyGen gen(8);
    const auto basis = truncation_basis(g, {3, 2, 1, 0});
    for (int trial = 0; trial < 30; ++trial) {
        const Section theta = random_section(gen, g, basis);
        const Section s = selfadjoint_project(g, theta);
        CHECK(selfadjoint_project(g, s) == s);
        // delta + l_Phi^* preserves the self-adjoint subspace.
        const Section d = total_differential(g, s);
        CHECK(selfadjoint_project(g, d) == d);
    }
    CHECK_THROWS_AS(selfadjoint_project(g, Section(2)), Error);
    (void)ctx;
}

TEST_CASE("truncated homology guards")
{
    const KTSetup k = kdv_setup();
    try {
        homology_window(k, {1, 2, 2, 0}, 1);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ComputationRejected);
    }
    CHECK_THROWS_AS(homology_window(k, {2, 2, 2, 0}, 0), Error);
    // Top of the antighost window of a normal equation with no chains in degree 3.
    const KTSetup g = gradient_setup();
    CHECK(homology_window(g, {4, 1, 1, 0}, 3).dim == 0);
}

TEST_CASE("KdV truncated homology at antighost one")
{
    const KTSetup k = kdv_setup();
    std::vector<Section> reps;
    const HomologyWindow w = homology_window(k, {2, 2, 2, 0}, 1, &reps);
    CHECK(w.dim == 3);
    CHECK(reps.size() == 3);
}
