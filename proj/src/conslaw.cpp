#include "jetkt/conslaw.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "jetkt/basis.hpp"
#include "jetkt/parallel.hpp"

namespace jetkt {

namespace {

struct Shape {
    int order = 0;
    int degree = 0;      // in dependent symbols
    int base_degree = 0; // in base symbols
    int min_degree = -1; // smallest dependent degree of a term; -1 for zero
};

Shape shape_of(const DiffPoly& p)
{
    Shape s;
    for (const auto& [m, c] : p.terms()) {
        for (const auto& f : m.factors()) {
            if (!f.symbol.is_base()) {
                s.order = std::max(s.order, f.symbol.order());
            }
        }
        const int d = m.degree_of(SymbolKind::Dependent);
        s.degree = std::max(s.degree, d);
        s.base_degree = std::max(s.base_degree, m.degree_of(SymbolKind::Base));
        s.min_degree = s.min_degree < 0 ? d : std::min(s.min_degree, d);
    }
    return s;
}

Shape shape_of(const Section& sec)
{
    Shape s;
    for (const auto& c : sec.components) {
        const Shape t = shape_of(c);
        s.order = std::max(s.order, t.order);
        s.degree = std::max(s.degree, t.degree);
        s.base_degree = std::max(s.base_degree, t.base_degree);
        if (t.min_degree >= 0) {
            s.min_degree = s.min_degree < 0 ? t.min_degree : std::min(s.min_degree, t.min_degree);
        }
    }
    return s;
}

Shape shape_of(const CDiffOp& op)
{
    Shape s;
    for (int r = 0; r < op.rows(); ++r) {
        for (int c = 0; c < op.cols(); ++c) {
            for (const auto& [sigma, a] : op.entry(r, c)) {
                const Shape t = shape_of(a);
                s.order = std::max(s.order, t.order);
                s.degree = std::max(s.degree, t.degree);
                s.base_degree = std::max(s.base_degree, t.base_degree);
            }
        }
    }
    return s;
}

// Higher jet order first, then higher degree, so pivots land on the most
// complex monomial of each solution.
bool ranks_before(const Monomial& a, const Monomial& b)
{
    const auto key = [](const Monomial& m) {
        int order = 0;
        for (const auto& f : m.factors()) {
            if (!f.symbol.is_base()) {
                order = std::max(order, f.symbol.order());
            }
        }
        return std::make_tuple(order, m.degree_of(SymbolKind::Dependent), m.degree_of(SymbolKind::Base));
    };
    const auto ka = key(a);
    const auto kb = key(b);
    if (ka != kb) {
        return ka > kb;
    }
    return a < b;
}

std::vector<Monomial> coefficient_window(const EquationSystem& system, int order, int degree, int base_degree,
                                         bool on_shell)
{
    std::vector<JetSymbol> symbols;
    for (JetSymbol s : system.context().dependent_symbols(std::max(order, 0))) {
        if (!on_shell || !system.is_principal(s)) {
            symbols.push_back(s);
        }
    }
    auto out = products(base_monomials(system.context().n(), std::max(base_degree, 0)),
                        monomials_up_to(symbols, std::max(degree, 0)));
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

DiffPoly monomial_poly(const EquationSystem& system, const Monomial& m)
{
    return DiffPoly(m, Rational(1)).tag(system.context().id());
}

CDiffOp lin_F(const EquationSystem& system)
{
    return linearize(system.F(), system.context());
}

// Elementary operator with one coefficient monomial at (r, c, sigma).
struct OpUnknown {
    int row;
    int col;
    MultiIndex sigma;
    Monomial coefficient;
};

std::vector<OpUnknown> op_unknowns(int rows, int cols, const std::vector<MultiIndex>& sigmas,
                                   const std::vector<Monomial>& window)
{
    std::vector<OpUnknown> out;
    for (const auto& m : window) {
        for (const auto& sigma : sigmas) {
            for (int r = 0; r < rows; ++r) {
                for (int c = 0; c < cols; ++c) {
                    out.push_back({r, c, sigma, m});
                }
            }
        }
    }
    return out;
}

CDiffOp unknown_op(const EquationSystem& system, const OpUnknown& u, int rows, int cols)
{
    CDiffOp op(rows, cols);
    op.add(u.row, u.col, u.sigma, monomial_poly(system, u.coefficient));
    return op;
}

// Coordinates for operator entries: component ids keyed by (row, col, sigma).
class OpCoordinates {
public:
    explicit OpCoordinates(Coordinates& coords, int base) : coords_(coords), base_(base) {}

    void add(const CDiffOp& op, std::map<int, Rational>& acc)
    {
        for (int r = 0; r < op.rows(); ++r) {
            for (int c = 0; c < op.cols(); ++c) {
                for (const auto& [sigma, a] : op.entry(r, c)) {
                    auto [it, inserted] = ids_.try_emplace(std::make_tuple(r, c, sigma), base_ + static_cast<int>(ids_.size()));
                    for (const auto& [m, q] : a.terms()) {
                        acc[coords_.index(it->second, m)] += q;
                    }
                }
            }
        }
    }

private:
    Coordinates& coords_;
    int base_;
    std::map<std::tuple<int, int, MultiIndex>, int> ids_;
};

void add_section(Coordinates& coords, const Section& s, int base, std::map<int, Rational>& acc)
{
    for (std::size_t k = 0; k < s.size(); ++k) {
        for (const auto& [m, q] : s[k].terms()) {
            acc[coords.index(base + static_cast<int>(k), m)] += q;
        }
    }
}

constexpr int kApplyBase = 0;
constexpr int kOpBase = 1 << 20;
constexpr int kConstraintBase = 1 << 21;

} // namespace

std::vector<Cosymmetry> cosymmetry_solve(const EquationSystem& system, const TruncationSpec& bounds)
{
    if (bounds.jet_order_max < 0 || bounds.poly_degree_max < 0 || bounds.base_degree_max < 0) {
        throw Error(ErrorCode::ComputationRejected,
                    "empty ansatz: jet order, degree and base degree bounds must be nonnegative");
    }
    const int N = system.size();
    const auto window = coefficient_window(system, bounds.jet_order_max, bounds.poly_degree_max,
                                           bounds.base_degree_max, true);
    if (window.empty()) {
        throw Error(ErrorCode::ComputationRejected, "empty ansatz basis; raise the bounds");
    }
    std::vector<std::pair<int, Monomial>> unknowns;
    for (const auto& m : window) {
        for (int a = 0; a < N; ++a) {
            unknowns.emplace_back(a, m);
        }
    }
    const CDiffOp adj = cdiff_adjoint(lin_F(system));
    std::vector<Section> images(unknowns.size());
    parallel_for(unknowns.size(), [&](std::size_t k) {
        Section psi(static_cast<std::size_t>(N));
        psi[static_cast<std::size_t>(unknowns[k].first)] = monomial_poly(system, unknowns[k].second);
        images[k] = system.reduce(cdiff_apply(adj, psi));
    });
    Coordinates coords;
    std::vector<SparseVec> columns;
    columns.reserve(images.size());
    for (const auto& s : images) {
        columns.push_back(coords.vectorize(s));
    }
    auto solutions = kernel(columns);
    std::reverse(solutions.begin(), solutions.end());

    std::vector<Cosymmetry> out;
    for (const auto& v : solutions) {
        Cosymmetry c;
        c.psi = Section(static_cast<std::size_t>(N));
        for (const auto& [k, q] : v) {
            const auto& [a, m] = unknowns[static_cast<std::size_t>(k)];
            c.psi[static_cast<std::size_t>(a)] += DiffPoly(m, q).tag(system.context().id());
        }
        if (!system.reduce(cdiff_apply(adj, c.psi)).is_zero()) {
            throw Error(ErrorCode::ComputationRejected, "internal error: solver output violates l_F^*(psi) = 0");
        }
        const Shape s = shape_of(c.psi);
        c.order = s.order;
        c.degree = s.degree;
        out.push_back(std::move(c));
    }
    return out;
}

Section prop41_residual(const EquationSystem& system, const Section& psi)
{
    if (static_cast<int>(psi.size()) != system.size()) {
        throw Error(ErrorCode::SignatureMismatch, "psi must have one component per equation");
    }
    const JetContext& ctx = system.context();
    return cdiff_apply(cdiff_adjoint(lin_F(system)), psi) +
           cdiff_apply(cdiff_adjoint(linearize(psi, ctx)), system.F());
}

ThetaVerdict theta_membership(const EquationSystem& system, const Section& psi, int bound)
{
    const int N = system.size();
    if (static_cast<int>(psi.size()) != N) {
        throw Error(ErrorCode::SignatureMismatch, "psi must have one component per equation");
    }
    ThetaVerdict verdict;
    verdict.bound = bound;
    verdict.box = CDiffOp(N, N);
    verdict.vanishes_on_shell = system.reduce(psi).is_zero();
    if (psi.is_zero()) {
        verdict.member = true;
        return verdict;
    }
    const Shape ps = shape_of(psi);
    const Shape fs = shape_of(system.F());
    const int degree = ps.degree - std::max(fs.min_degree, 0);
    if (degree < 0) {
        return verdict;
    }
    const auto window = coefficient_window(system, ps.order, degree, ps.base_degree, false);
    const auto unknowns = op_unknowns(N, N, system.context().multi_indices(std::max(bound, 0)), window);
    const Section F = system.F();

    std::vector<std::pair<CDiffOp, Section>> images(unknowns.size());
    parallel_for(unknowns.size(), [&](std::size_t k) {
        const CDiffOp b = unknown_op(system, unknowns[k], N, N);
        images[k] = {b + cdiff_adjoint(b), cdiff_apply(b, F)};
    });
    Coordinates coords;
    OpCoordinates op_coords(coords, kOpBase);
    std::vector<SparseVec> columns;
    columns.reserve(images.size());
    for (const auto& [skew, applied] : images) {
        std::map<int, Rational> acc;
        op_coords.add(skew, acc);
        add_section(coords, applied, kApplyBase, acc);
        columns.push_back(make_sparse(std::move(acc)));
    }
    std::map<int, Rational> rhs;
    add_section(coords, psi, kApplyBase, rhs);
    const auto x = solve(columns, make_sparse(std::move(rhs)));
    if (!x) {
        return verdict;
    }
    verdict.member = true;
    for (const auto& [k, q] : *x) {
        verdict.box += q * unknown_op(system, unknowns[static_cast<std::size_t>(k)], N, N);
    }
    return verdict;
}

Prop42Verdict prop42_certificate(const EquationSystem& system, const Section& psi, int bound)
{
    const int N = system.size();
    if (static_cast<int>(psi.size()) != N) {
        throw Error(ErrorCode::SignatureMismatch, "psi must have one component per equation");
    }
    const JetContext& ctx = system.context();
    const int m = ctx.m();
    const CDiffOp lF = lin_F(system);
    const Section r = cdiff_apply(cdiff_adjoint(lF), psi);
    if (!system.reduce(r).is_zero()) {
        throw Error(ErrorCode::ValidationFailed, "psi does not satisfy l_F^*(psi) = 0 on the equation");
    }
    Prop42Verdict verdict;
    verdict.bound = bound;
    verdict.delta = CDiffOp(m, N);
    for (int i = 0; i < m; ++i) {
        auto [lambda, rem] = system.decompose(r[static_cast<std::size_t>(i)]);
        for (int a = 0; a < N; ++a) {
            verdict.delta.add(i, a, lambda.entry(0, a));
        }
    }
    verdict.nabla = CDiffOp(N, N);
    const CDiffOp target = system.reduce(linearize(psi, ctx) + cdiff_adjoint(verdict.delta));
    if (target.is_zero()) {
        verdict.certified = true;
        return verdict;
    }
    const Shape ts = shape_of(target);
    const auto window = coefficient_window(system, ts.order, ts.degree, ts.base_degree, true);
    const auto unknowns = op_unknowns(N, N, ctx.multi_indices(std::max(bound, 0)), window);

    std::vector<std::pair<CDiffOp, CDiffOp>> images(unknowns.size());
    parallel_for(unknowns.size(), [&](std::size_t k) {
        const CDiffOp b = unknown_op(system, unknowns[k], N, N);
        images[k] = {system.reduce(b - cdiff_adjoint(b)), system.reduce(cdiff_compose(b, lF))};
    });
    Coordinates coords;
    OpCoordinates skew_coords(coords, kOpBase);
    OpCoordinates eq_coords(coords, kConstraintBase);
    std::vector<SparseVec> columns;
    columns.reserve(images.size());
    for (const auto& [skew, composed] : images) {
        std::map<int, Rational> acc;
        skew_coords.add(skew, acc);
        eq_coords.add(composed, acc);
        columns.push_back(make_sparse(std::move(acc)));
    }
    std::map<int, Rational> rhs;
    eq_coords.add(target, rhs);
    const auto x = solve(columns, make_sparse(std::move(rhs)));
    if (!x) {
        return verdict;
    }
    verdict.certified = true;
    for (const auto& [k, q] : *x) {
        verdict.nabla += q * unknown_op(system, unknowns[static_cast<std::size_t>(k)], N, N);
    }
    return verdict;
}

DivergenceCheck current_divergence_check(const EquationSystem& system, const HorizontalForm& omega)
{
    const int n = system.context().n();
    if (omega.n() != n || omega.degree() != n - 1) {
        throw Error(ErrorCode::InvalidArgument, "a conserved current is a horizontal form of degree n-1");
    }
    DivergenceCheck out;
    out.divergence = horizontal_d(omega).top_coefficient();
    auto [lambda, rem] = system.decompose(out.divergence);
    out.lambda = std::move(lambda);
    out.remainder = std::move(rem);
    out.conserved = out.remainder.is_zero();
    return out;
}

Section current_to_cosymmetry(const EquationSystem& system, const HorizontalForm& omega)
{
    const DivergenceCheck check = current_divergence_check(system, omega);
    if (!check.conserved) {
        throw Error(ErrorCode::ValidationFailed, "form is not conserved on the equation");
    }
    return system.reduce(cdiff_apply(cdiff_adjoint(check.lambda), Section{DiffPoly(1L)}));
}

std::optional<HorizontalForm> reconstruct_current(const EquationSystem& system, const Section& psi)
{
    const JetContext& ctx = system.context();
    const int n = ctx.n();
    const DiffPoly target = pairing(psi, system.F());
    if (target.is_zero()) {
        return HorizontalForm(n, n - 1);
    }
    const Shape ts = shape_of(target);
    for (int extra_base = 0; extra_base <= 1; ++extra_base) {
        const auto window = coefficient_window(system, std::max(ts.order - 1, 0), ts.degree,
                                               ts.base_degree + extra_base, false);
        std::vector<std::pair<int, Monomial>> unknowns;
        for (const auto& m : window) {
            for (int i = 0; i < n; ++i) {
                unknowns.emplace_back(i, m);
            }
        }
        std::vector<DiffPoly> images(unknowns.size());
        parallel_for(unknowns.size(), [&](std::size_t k) {
            images[k] = total_derivative(monomial_poly(system, unknowns[k].second), unknowns[k].first);
        });
        Coordinates coords;
        std::vector<SparseVec> columns;
        columns.reserve(images.size());
        for (const auto& p : images) {
            columns.push_back(coords.vectorize(p));
        }
        const auto x = solve(columns, coords.vectorize(target));
        if (!x) {
            continue;
        }
        std::vector<DiffPoly> flux(static_cast<std::size_t>(n));
        for (const auto& [k, q] : *x) {
            const auto& [i, m] = unknowns[static_cast<std::size_t>(k)];
            flux[static_cast<std::size_t>(i)] += DiffPoly(m, q).tag(ctx.id());
        }
        return HorizontalForm::from_current(flux);
    }
    return std::nullopt;
}

std::optional<HorizontalForm> current_from_density(const EquationSystem& system, const DiffPoly& rho, int time)
{
    const JetContext& ctx = system.context();
    const int n = ctx.n();
    if (time < 0 || time >= n) {
        throw Error(ErrorCode::InvalidArgument, "time variable out of range");
    }
    std::vector<DiffPoly> flux(static_cast<std::size_t>(n));
    flux[static_cast<std::size_t>(time)] = rho;
    const DiffPoly g = system.reduce(total_derivative(rho, time));
    if (g.is_zero()) {
        return HorizontalForm::from_current(flux);
    }
    if (n == 1) {
        return std::nullopt;
    }
    const Shape gs = shape_of(g);
    for (int extra_base = 0; extra_base <= 1; ++extra_base) {
        const auto window = coefficient_window(system, std::max(gs.order - 1, 0), gs.degree,
                                               gs.base_degree + extra_base, true);
        std::vector<std::pair<int, Monomial>> unknowns;
        for (const auto& m : window) {
            for (int i = 0; i < n; ++i) {
                if (i != time) {
                    unknowns.emplace_back(i, m);
                }
            }
        }
        std::vector<DiffPoly> images(unknowns.size());
        parallel_for(unknowns.size(), [&](std::size_t k) {
            images[k] = system.reduce(total_derivative(monomial_poly(system, unknowns[k].second), unknowns[k].first));
        });
        Coordinates coords;
        std::vector<SparseVec> columns;
        columns.reserve(images.size());
        for (const auto& p : images) {
            columns.push_back(coords.vectorize(p));
        }
        const auto x = solve(columns, coords.vectorize(-g));
        if (!x) {
            continue;
        }
        for (const auto& [k, q] : *x) {
            const auto& [i, m] = unknowns[static_cast<std::size_t>(k)];
            flux[static_cast<std::size_t>(i)] += DiffPoly(m, q).tag(ctx.id());
        }
        return HorizontalForm::from_current(flux);
    }
    return std::nullopt;
}

namespace {

RouteEntry evaluate(const EquationSystem& system, std::string label, const Section& psi, bool from_solver,
                    int bound)
{
    RouteEntry e;
    e.label = std::move(label);
    e.psi = psi;
    e.from_solver = from_solver;
    e.residual = prop41_residual(system, psi);
    e.prop41_zero = e.residual.is_zero();
    e.vanishes_on_shell = system.reduce(psi).is_zero();
    for (int b = 0; b <= bound; ++b) {
        e.theta.push_back(theta_membership(system, psi, b));
        if (e.theta.back().member) {
            break;
        }
    }
    if (!e.vanishes_on_shell) {
        e.prop42 = prop42_certificate(system, psi, bound);
    }
    if (!e.prop41_zero) {
        e.route41 = "not_a_cycle";
    } else if (e.theta.back().member) {
        e.route41 = "trivial";
    } else {
        e.route41 = "not_found_up_to_bound";
    }
    if (e.vanishes_on_shell) {
        e.route42 = "trivial";
    } else if (e.prop42 && e.prop42->certified) {
        e.route42 = "nontrivial";
    } else {
        e.route42 = "uncertified";
    }
    e.agree = (e.route41 == "trivial") == (e.route42 == "trivial");
    return e;
}

} // namespace

CompareReport compare_routes(const KTSetup& setup, const TruncationSpec& bounds, int bound)
{
    if (!setup.normal()) {
        throw Error(ErrorCode::ComputationRejected,
                    "route comparison requires a normal equation (no compatibility operators)");
    }
    const EquationSystem& system = setup.system();
    const JetContext& ctx = system.context();
    CompareReport report;
    report.bound = bound;
    report.basis = cosymmetry_solve(system, bounds);
    for (std::size_t k = 0; k < report.basis.size(); ++k) {
        std::ostringstream label;
        label << "basis[" << k << "]";
        report.entries.push_back(evaluate(system, label.str(), report.basis[k].psi, true, bound));
    }

    const int N = system.size();
    const DiffPoly F0 = system.F(0);
    Section dxF(static_cast<std::size_t>(N));
    dxF[0] = total_derivative(F0, 0);
    report.entries.push_back(evaluate(system, "D_" + ctx.independents()[0] + "(F)", dxF, false, std::max(bound, 1)));

    const JetSymbol lead = system.equations()[0].leading;
    const DiffPoly v = DiffPoly(lead.root()).tag(ctx.id());
    CDiffOp box(N, N);
    box.add(0, 0, MultiIndex::single(0), v);
    box.add(0, 0, {}, Rational(1, 2) * total_derivative(v, 0));
    const std::string v_name = ctx.dependents()[static_cast<std::size_t>(lead.index())];
    const std::string x_name = ctx.independents()[0];
    report.entries.push_back(evaluate(system, "(" + v_name + "*D_" + x_name + " + 1/2*" + v_name + "_" + x_name + ")(F)",
                                      cdiff_apply(box, system.F()), false, std::max(bound, 1)));

    for (const auto& e : report.entries) {
        if (e.from_solver) {
            report.nontrivial_41 += e.route41 == "not_found_up_to_bound" ? 1 : 0;
            report.nontrivial_42 += e.route42 == "nontrivial" ? 1 : 0;
        }
    }
    return report;
}

} // namespace jetkt
