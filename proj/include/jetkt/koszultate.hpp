#ifndef JETKT_KOSZULTATE_HPP
#define JETKT_KOSZULTATE_HPP

#include <string>
#include <utility>
#include <vector>

#include "jetkt/equation.hpp"

namespace jetkt {

// Finite window into the antifield polynomial algebra. poly_degree_max bounds
// the degree in dependent jet symbols only; antifield degree is bounded by
// the antighost number.
struct TruncationSpec {
    int antighost_max = 2;
    int jet_order_max = 2;
    int poly_degree_max = 2;
    int base_degree_max = 0;
};

// Equation with its compatibility chain Delta_1, .., Delta_{k-2}. The context
// carries antifield tiers 1..k-1 where tier i has the rank of P_i.
class KTSetup {
public:
    const EquationSystem& system() const { return system_; }
    const JetContext& context() const { return context_; }
    const std::vector<CDiffOp>& compat_ops() const { return compat_; }
    int k() const { return static_cast<int>(compat_.size()) + 2; }
    bool normal() const { return compat_.empty(); }

    // Ranks of P_1, .., P_{k-1}; offset of tier i in kappa-hat sections.
    int rank(int tier) const { return context_.tier_rank(tier); }
    int offset(int tier) const;
    int total_rank() const;

    // Antifield roots in kappa-hat component order.
    const std::vector<JetSymbol>& targets() const { return targets_; }
    // Phi as a generator: c1_a -> F_a, c^{i+1}_b -> (Delta_i(c^i))_b.
    const EvolutionaryGenerator& phi() const { return phi_; }
    // The section Phi in component order of P = P_1 + .. + P_{k-1}.
    Section Phi() const;
    // c^i as a section of P_i.
    Section antifields(int tier) const;

    friend KTSetup kt_setup(const EquationSystem& system, std::vector<CDiffOp> compat_ops);
    // Builds the setup without verifying Delta_1(F) = 0 and Delta_{i+1} Delta_i = 0.
    static KTSetup unchecked(const EquationSystem& system, std::vector<CDiffOp> compat_ops);

private:
    KTSetup(const EquationSystem& system, std::vector<CDiffOp> compat_ops);
    EquationSystem system_;
    JetContext context_;
    std::vector<CDiffOp> compat_;
    std::vector<JetSymbol> targets_;
    EvolutionaryGenerator phi_;
};

KTSetup kt_setup(const EquationSystem& system, std::vector<CDiffOp> compat_ops);

// delta = Ev_Phi, an odd derivation lowering the antighost number by one.
DiffPoly kt_delta(const KTSetup& setup, const DiffPoly& f);

// The monomial basis of the window: base x dependent x antifield monomials
// with antighost 0..antighost_max (or exactly p when p >= 0).
std::vector<Monomial> truncation_basis(const KTSetup& setup, const TruncationSpec& trunc, int p = -1);

struct DeltaSquaredReport {
    std::size_t basis_size = 0;
    // (basis monomial, nonzero delta^2 of it)
    std::vector<std::pair<DiffPoly, DiffPoly>> failures;
    bool passed() const { return failures.empty(); }
};

DeltaSquaredReport kt_delta_squared_check(const KTSetup& setup, const TruncationSpec& trunc);

// delta acting on kappa-hat: component of tier i gets the sign (-1)^i, which
// makes the Euler operator in antifield directions a chain map.
Section kt_delta_hat(const KTSetup& setup, const Section& theta);

// l_Phi^*: the tier i component is Delta_i^*(theta_{i+1}). Only the shift
// Delta depends on antifields, so it vanishes for normal equations.
Section lphi_star(const KTSetup& setup, const Section& theta);

// Total parity of a kappa-hat section: component parity plus tier parity.
// -1 when inhomogeneous, 0 for zero.
int section_parity(const KTSetup& setup, const Section& theta);

// Euler operator in the antifield directions, landing in kappa-hat.
Section euler_antifields(const KTSetup& setup, const DiffPoly& density);

// An element of kappa-hat^pol read as a graded symmetric multilinear operator
// in the antifields: every component is homogeneous of degree `arity` in the
// antifield coordinates.
struct MultiLinOp {
    int arity = 0;
    Section psi;

    static MultiLinOp from_section(const KTSetup& setup, const Section& psi);
    // Arity-1 element psi = op(c) for a square operator on P.
    static MultiLinOp from_operator(const KTSetup& setup, const CDiffOp& op);
    // Arity-1 operator form (the linearization in the antifields).
    CDiffOp as_operator(const KTSetup& setup) const;
};

// Projection onto self-adjoint elements, S(psi) = E_c(<c, psi>) / (arity + 1);
// at arity one this is (op + op^*) / 2 with graded signs.
MultiLinOp selfadjoint_project(const KTSetup& setup, const MultiLinOp& psi);
// Arity-wise projection of an arbitrary kappa-hat section.
Section selfadjoint_project(const KTSetup& setup, const Section& theta);

// delta + l_Phi^* on kappa-hat.
Section total_differential(const KTSetup& setup, const Section& theta);

struct HomologyWindow {
    int jet_order = 0;
    int dim = 0;
    std::size_t chain_dim = 0;
    int cycle_rank = 0;
    int boundary_rank = 0;
};

struct HomologyResult {
    int p = 0;
    int dim = 0;
    bool stable = false;
    // Euler images (kappa-hat sections) of representative cycles.
    std::vector<Section> representatives;
    std::vector<HomologyWindow> windows;
};

// Homology of the complex of densities modulo total divergences at antighost
// p, computed through the Euler operator in the antifield directions. Cycles
// at p = 1 are detected with the Euler operator in the dependent directions.
// The result is computed at trunc and at jet order + 1; stable when they agree.
HomologyResult truncated_homology(const KTSetup& setup, const TruncationSpec& trunc, int p);
// Single-window computation.
HomologyWindow homology_window(const KTSetup& setup, const TruncationSpec& trunc, int p,
                               std::vector<Section>* representatives = nullptr);

} // namespace jetkt

#endif
