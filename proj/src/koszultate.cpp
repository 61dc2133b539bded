#include "jetkt/koszultate.hpp"

#include <sstream>

#include "jetkt/basis.hpp"
#include "jetkt/parallel.hpp"

namespace jetkt {

namespace {

std::vector<int> tier_ranks(const EquationSystem& system, const std::vector<CDiffOp>& compat)
{
    std::vector<int> ranks{system.size()};
    for (std::size_t i = 0; i < compat.size(); ++i) {
        const CDiffOp& op = compat[i];
        if (op.cols() != ranks.back()) {
            std::ostringstream os;
            os << "compatibility operator " << (i + 1) << " has " << op.cols() << " columns, expected "
               << ranks.back();
            throw Error(ErrorCode::SignatureMismatch, os.str());
        }
        for (int r = 0; r < op.rows(); ++r) {
            for (int c = 0; c < op.cols(); ++c) {
                for (const auto& [sigma, a] : op.entry(r, c)) {
                    if (a.contains([](JetSymbol s) { return s.is_antifield(); })) {
                        throw Error(ErrorCode::ParityMismatch,
                                    "compatibility operator coefficients must not contain antifields");
                    }
                }
            }
        }
        ranks.push_back(op.rows());
    }
    return ranks;
}

// Antifield degree of a monomial.
int antifield_degree(const Monomial& m)
{
    return m.degree_of(SymbolKind::Antifield);
}

} // namespace

KTSetup::KTSetup(const EquationSystem& system, std::vector<CDiffOp> compat_ops)
    : system_(system),
      context_(system.context().with_tiers(tier_ranks(system, compat_ops))),
      compat_(std::move(compat_ops)),
      targets_(antifield_targets(context_))
{
    for (int a = 0; a < system_.size(); ++a) {
        phi_.emplace(JetSymbol::antifield(1, a), system_.F(a));
    }
    for (std::size_t i = 0; i < compat_.size(); ++i) {
        const int tier = static_cast<int>(i) + 1;
        const Section image = cdiff_apply(compat_[i], antifields(tier));
        for (std::size_t b = 0; b < image.size(); ++b) {
            phi_.emplace(JetSymbol::antifield(tier + 1, static_cast<int>(b)), image[b]);
        }
    }
}

KTSetup KTSetup::unchecked(const EquationSystem& system, std::vector<CDiffOp> compat_ops)
{
    return KTSetup(system, std::move(compat_ops));
}

KTSetup kt_setup(const EquationSystem& system, std::vector<CDiffOp> compat_ops)
{
    KTSetup setup(system, std::move(compat_ops));
    const JetContext& ctx = setup.context();
    if (!setup.compat_.empty()) {
        const Section residue = cdiff_apply(setup.compat_.front(), system.F());
        if (!residue.is_zero()) {
            throw Error(ErrorCode::ValidationFailed,
                        "Delta_1(F) is not zero: residue " + residue.render(ctx));
        }
    }
    for (std::size_t i = 0; i + 1 < setup.compat_.size(); ++i) {
        const CDiffOp comp = cdiff_compose(setup.compat_[i + 1], setup.compat_[i]);
        if (!comp.is_zero()) {
            std::ostringstream os;
            os << "Delta_" << (i + 2) << " o Delta_" << (i + 1) << " is not zero: " << comp.render(ctx);
            throw Error(ErrorCode::ValidationFailed, os.str());
        }
    }
    return setup;
}

int KTSetup::offset(int tier) const
{
    int off = 0;
    for (int t = 1; t < tier; ++t) {
        off += rank(t);
    }
    return off;
}

int KTSetup::total_rank() const
{
    return static_cast<int>(targets_.size());
}

Section KTSetup::Phi() const
{
    Section s(targets_.size());
    for (std::size_t k = 0; k < targets_.size(); ++k) {
        s[k] = phi_.at(targets_[k]);
    }
    return s;
}

Section KTSetup::antifields(int tier) const
{
    Section s(static_cast<std::size_t>(rank(tier)));
    for (int b = 0; b < rank(tier); ++b) {
        s[static_cast<std::size_t>(b)] = context_.c(tier, b);
    }
    return s;
}

DiffPoly kt_delta(const KTSetup& setup, const DiffPoly& f)
{
    return evolutionary_apply(setup.phi(), f);
}

std::vector<Monomial> truncation_basis(const KTSetup& setup, const TruncationSpec& trunc, int p)
{
    const JetContext& ctx = setup.context();
    const auto coefficients = products(base_monomials(ctx.n(), trunc.base_degree_max),
                                       monomials_up_to(ctx.dependent_symbols(trunc.jet_order_max),
                                                       trunc.poly_degree_max));
    std::vector<Monomial> out;
    const int lo = p >= 0 ? p : 0;
    const int hi = p >= 0 ? p : trunc.antighost_max;
    for (int a = lo; a <= hi; ++a) {
        const auto anti = antifield_monomials(ctx, a, trunc.jet_order_max);
        const auto block = products(coefficients, anti);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

DeltaSquaredReport kt_delta_squared_check(const KTSetup& setup, const TruncationSpec& trunc)
{
    const auto basis = truncation_basis(setup, trunc);
    std::vector<DiffPoly> results(basis.size());
    parallel_for(basis.size(), [&](std::size_t i) {
        const DiffPoly m = DiffPoly(basis[i], Rational(1)).tag(setup.context().id());
        results[i] = kt_delta(setup, kt_delta(setup, m));
    });
    DeltaSquaredReport report;
    report.basis_size = basis.size();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!results[i].is_zero()) {
            report.failures.emplace_back(DiffPoly(basis[i], Rational(1)), results[i]);
        }
    }
    return report;
}

int section_parity(const KTSetup& setup, const Section& theta)
{
    int parity = -2;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (theta[k].is_zero()) {
            continue;
        }
        const int p = theta[k].parity();
        if (p < 0) {
            return -1;
        }
        const int total = (p + setup.targets()[k].parity()) % 2;
        if (parity == -2) {
            parity = total;
        } else if (parity != total) {
            return -1;
        }
    }
    return parity == -2 ? 0 : parity;
}

Section kt_delta_hat(const KTSetup& setup, const Section& theta)
{
    if (static_cast<int>(theta.size()) != setup.total_rank()) {
        throw Error(ErrorCode::SignatureMismatch, "section is not in kappa-hat of the setup");
    }
    Section out(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        DiffPoly d = kt_delta(setup, theta[k]);
        out[k] = setup.targets()[k].odd() ? -d : d;
    }
    return out;
}

Section lphi_star(const KTSetup& setup, const Section& theta)
{
    if (static_cast<int>(theta.size()) != setup.total_rank()) {
        throw Error(ErrorCode::SignatureMismatch, "section is not in kappa-hat of the setup");
    }
    Section out(theta.size());
    for (std::size_t i = 0; i < setup.compat_ops().size(); ++i) {
        const int tier = static_cast<int>(i) + 1;
        Section upper(static_cast<std::size_t>(setup.rank(tier + 1)));
        for (int b = 0; b < setup.rank(tier + 1); ++b) {
            upper[static_cast<std::size_t>(b)] = theta[static_cast<std::size_t>(setup.offset(tier + 1) + b)];
        }
        const Section lowered = cdiff_apply(cdiff_adjoint(setup.compat_ops()[i]), upper);
        for (int a = 0; a < setup.rank(tier); ++a) {
            out[static_cast<std::size_t>(setup.offset(tier) + a)] = lowered[static_cast<std::size_t>(a)];
        }
    }
    return out;
}

Section total_differential(const KTSetup& setup, const Section& theta)
{
    return kt_delta_hat(setup, theta) + lphi_star(setup, theta);
}

Section euler_antifields(const KTSetup& setup, const DiffPoly& density)
{
    return euler(density, setup.targets());
}

MultiLinOp MultiLinOp::from_section(const KTSetup& setup, const Section& psi)
{
    if (static_cast<int>(psi.size()) != setup.total_rank()) {
        throw Error(ErrorCode::SignatureMismatch, "multilinear operator must take values in kappa-hat");
    }
    int arity = -1;
    for (const auto& comp : psi.components) {
        for (const auto& [m, c] : comp.terms()) {
            const int d = antifield_degree(m);
            if (arity >= 0 && d != arity) {
                throw Error(ErrorCode::InvalidArgument, "section is not homogeneous in the antifields");
            }
            arity = d;
        }
    }
    return MultiLinOp{arity < 0 ? 0 : arity, psi};
}

MultiLinOp MultiLinOp::from_operator(const KTSetup& setup, const CDiffOp& op)
{
    if (op.rows() != setup.total_rank() || op.cols() != setup.total_rank()) {
        throw Error(ErrorCode::SignatureMismatch, "operator signature is not self-dual");
    }
    Section c(setup.targets().size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = DiffPoly(setup.targets()[k]).tag(setup.context().id());
    }
    return from_section(setup, cdiff_apply(op, c));
}

CDiffOp MultiLinOp::as_operator(const KTSetup& setup) const
{
    if (arity != 1) {
        throw Error(ErrorCode::InvalidArgument, "operator form exists for arity one only");
    }
    return linearize(psi, setup.targets());
}

Section selfadjoint_project(const KTSetup& setup, const Section& theta)
{
    if (static_cast<int>(theta.size()) != setup.total_rank()) {
        throw Error(ErrorCode::SignatureMismatch, "signature is not self-dual");
    }
    std::map<int, DiffPoly> pairing_by_arity;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const DiffPoly c = DiffPoly(setup.targets()[k]);
        for (const auto& [m, coeff] : theta[k].terms()) {
            pairing_by_arity[antifield_degree(m)] += c * DiffPoly(m, coeff);
        }
    }
    Section out(theta.size());
    for (const auto& [d, density] : pairing_by_arity) {
        out += Rational(1, d + 1) * euler_antifields(setup, density);
    }
    return out;
}

MultiLinOp selfadjoint_project(const KTSetup& setup, const MultiLinOp& psi)
{
    return MultiLinOp{psi.arity, selfadjoint_project(setup, psi.psi)};
}

HomologyWindow homology_window(const KTSetup& setup, const TruncationSpec& trunc, int p,
                               std::vector<Section>* representatives)
{
    if (p < 1) {
        throw Error(ErrorCode::InvalidArgument, "homology is computed for antighost p >= 1");
    }
    if (trunc.antighost_max < p + 1) {
        std::ostringstream os;
        os << "truncation window too small: antighost " << p << " needs antighost_max >= " << (p + 1);
        throw Error(ErrorCode::ComputationRejected, os.str());
    }
    const JetContext& ctx = setup.context();
    const auto chains = truncation_basis(setup, trunc, p);
    const auto higher = truncation_basis(setup, trunc, p + 1);
    const std::vector<JetSymbol> dep_targets = dependent_targets(ctx);

    std::vector<Section> cycle_test(chains.size());
    std::vector<Section> images(chains.size());
    parallel_for(chains.size(), [&](std::size_t i) {
        const DiffPoly w = DiffPoly(chains[i], Rational(1)).tag(ctx.id());
        const DiffPoly dw = kt_delta(setup, w);
        cycle_test[i] = p == 1 ? euler(dw, dep_targets) : euler_antifields(setup, dw);
        images[i] = euler_antifields(setup, w);
    });
    std::vector<Section> boundaries(higher.size());
    parallel_for(higher.size(), [&](std::size_t i) {
        const DiffPoly w = DiffPoly(higher[i], Rational(1)).tag(ctx.id());
        boundaries[i] = euler_antifields(setup, kt_delta(setup, w));
    });

    Coordinates test_coords;
    std::vector<SparseVec> test_columns;
    test_columns.reserve(chains.size());
    for (const auto& s : cycle_test) {
        test_columns.push_back(test_coords.vectorize(s));
    }
    const auto cycle_coeffs = kernel(test_columns);

    Coordinates coords;
    std::vector<SparseVec> image_vecs;
    image_vecs.reserve(images.size());
    for (const auto& s : images) {
        image_vecs.push_back(coords.vectorize(s));
    }
    EchelonBasis boundary_basis;
    for (const auto& s : boundaries) {
        boundary_basis.insert(coords.vectorize(s));
    }

    EchelonBasis cycle_basis;
    EchelonBasis quotient = boundary_basis;
    HomologyWindow window;
    window.jet_order = trunc.jet_order_max;
    window.chain_dim = chains.size();
    window.boundary_rank = boundary_basis.rank();
    for (const auto& z : cycle_coeffs) {
        Section image(setup.targets().size());
        std::map<int, Rational> acc;
        for (const auto& [b, q] : z) {
            for (const auto& [idx, v] : image_vecs[static_cast<std::size_t>(b)]) {
                acc[idx] += q * v;
            }
        }
        const SparseVec vec = make_sparse(std::move(acc));
        if (vec.empty()) {
            continue;
        }
        cycle_basis.insert(vec);
        if (quotient.insert(vec)) {
            ++window.dim;
            if (representatives != nullptr) {
                for (const auto& [b, q] : z) {
                    image += q * images[static_cast<std::size_t>(b)];
                }
                representatives->push_back(image);
            }
        }
    }
    window.cycle_rank = cycle_basis.rank();
    return window;
}

HomologyResult truncated_homology(const KTSetup& setup, const TruncationSpec& trunc, int p)
{
    HomologyResult result;
    result.p = p;
    result.windows.push_back(homology_window(setup, trunc, p, &result.representatives));
    TruncationSpec next = trunc;
    next.jet_order_max += 1;
    result.windows.push_back(homology_window(setup, next, p));
    result.dim = result.windows.front().dim;
    result.stable = result.windows[0].dim == result.windows[1].dim;
    return result;
}

} // namespace jetkt
