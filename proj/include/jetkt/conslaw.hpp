#ifndef JETKT_CONSLAW_HPP
#define JETKT_CONSLAW_HPP

#include <optional>
#include <string>
#include <vector>

#include "jetkt/koszultate.hpp"

namespace jetkt {

struct Cosymmetry {
    Section psi; // on-shell normal form, one component per equation
    int order = 0;
    int degree = 0;
    std::string provenance = "solver";
};

// Basis of the solutions of reduce(l_F^*(psi)) = 0 within the polynomial
// ansatz given by jet_order_max, poly_degree_max and base_degree_max. Basis
// elements are in reduced echelon form led by their highest-ranked monomial
// (jet order, then degree) and listed from the simplest up.
std::vector<Cosymmetry> cosymmetry_solve(const EquationSystem& system, const TruncationSpec& bounds);

// l_F^*(psi) + l_psi^*(F), computed off shell.
Section prop41_residual(const EquationSystem& system, const Section& psi);

struct ThetaVerdict {
    bool member = false;
    int bound = 0;
    CDiffOp box;                    // skew-adjoint witness with box(F) = psi
    bool vanishes_on_shell = false; // reduce(psi) == 0
};

// Searches for a skew-adjoint box of order <= bound with box(F) = psi.
ThetaVerdict theta_membership(const EquationSystem& system, const Section& psi, int bound);

struct Prop42Verdict {
    bool certified = false;
    int bound = 0;
    CDiffOp delta; // l_F^*(psi) = delta(F), from the elimination trace
    CDiffOp nabla; // self-adjoint, l_psi + delta^* = nabla o l_F on shell
};

// Throws ValidationFailed when psi does not satisfy reduce(l_F^*(psi)) = 0.
Prop42Verdict prop42_certificate(const EquationSystem& system, const Section& psi, int bound);

struct DivergenceCheck {
    bool conserved = false;
    DiffPoly divergence; // coefficient of d-bar omega
    CDiffOp lambda;      // divergence = lambda(F) + remainder
    DiffPoly remainder;
};

DivergenceCheck current_divergence_check(const EquationSystem& system, const HorizontalForm& omega);

// psi = lambda^*(1) reduced on shell; throws ValidationFailed if omega is not conserved.
Section current_to_cosymmetry(const EquationSystem& system, const HorizontalForm& omega);

// A current J with sum_i D_i J_i = <psi, F> identically, found by a polynomial
// ansatz sized from <psi, F>; nullopt when none exists in that class.
std::optional<HorizontalForm> reconstruct_current(const EquationSystem& system, const Section& psi);

// Completes a density rho (in the direction of independent `time`) to a
// current: fluxes J_i, i != time, with reduce(D_time(rho) + sum_i D_i J_i) = 0.
// nullopt when no polynomial flux exists in the ansatz sized from D_time(rho).
std::optional<HorizontalForm> current_from_density(const EquationSystem& system, const DiffPoly& rho, int time);

struct RouteEntry {
    std::string label;
    Section psi;
    bool from_solver = false;
    bool prop41_zero = false;
    Section residual;
    std::vector<ThetaVerdict> theta; // searches at bounds 0, 1, .. until found
    bool vanishes_on_shell = false;
    std::optional<Prop42Verdict> prop42; // for solutions of l_F^*(psi) = 0 on shell
    std::string route41;                 // "trivial", "not_found_up_to_bound" or "not_a_cycle"
    std::string route42;                 // "trivial", "nontrivial" or "uncertified"
    bool agree = false;
};

struct CompareReport {
    std::vector<Cosymmetry> basis;
    std::vector<RouteEntry> entries;
    int bound = 0;
    int nontrivial_41 = 0;
    int nontrivial_42 = 0;
};

// The two characterizations of conservation laws side by side, for a normal
// equation. Besides the solver basis the report probes psi = D_x(F) and the
// on-shell-vanishing psi = (u D_x + u_x / 2)(F) whose skew witness has order one.
CompareReport compare_routes(const KTSetup& setup, const TruncationSpec& bounds, int bound);

} // namespace jetkt

#endif
