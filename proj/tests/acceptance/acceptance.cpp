#include <algorithm>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fuzz/corpus.hpp"
#include "jetkt/basis.hpp"
#include "jetkt/conslaw.hpp"
#include "jetkt/koszultate.hpp"
#include "jetkt/linalg.hpp"
#include "support.hpp"

using namespace jetkt;
using namespace jetkt::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string count(int good, int total)
{
    return std::to_string(good) + "/" + std::to_string(total);
}

Section fresh(int first, int rank)
{
    Section s(static_cast<std::size_t>(rank));
    for (int k = 0; k < rank; ++k) {
        s[static_cast<std::size_t>(k)] = DiffPoly(JetSymbol::dependent(first + k));
    }
    return s;
}

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

// Span equality of two families of scalar sections.
bool same_span(const std::vector<DiffPoly>& a, const std::vector<DiffPoly>& b)
{
    Coordinates coords;
    std::vector<SparseVec> va;
    std::vector<SparseVec> vb;
    for (const auto& p : a) {
        va.push_back(coords.vectorize(p));
    }
    for (const auto& p : b) {
        vb.push_back(coords.vectorize(p));
    }
    std::vector<SparseVec> all = va;
    all.insert(all.end(), vb.begin(), vb.end());
    const int r = rank(all);
    return r == rank(va) && r == rank(vb);
}

// KdV l_F^* written out by hand: -D_t psi + u D_x psi + D_x^3 psi.
DiffPoly kdv_adjoint_by_hand(const DiffPoly& psi)
{
    return -total_derivative(psi, 1) + U() * total_derivative(psi, 0) + total_derivative(psi, mi({3}));
}

Outcome criterion1()
{
    Outcome o;
    constexpr int kCases = 200;
    PolyGen gen(1001);
    const JetContext ctx = xt_context();
    const auto targets = dependent_targets(ctx);
    int commute = 0, involution = 0, divergence = 0, euler_kills = 0, helmholtz = 0, stokes = 0;
    for (int trial = 0; trial < kCases; ++trial) {
        const DiffPoly f = gen.poly(4, 3, 2);
        commute += total_derivative(total_derivative(f, 0), 1) == total_derivative(total_derivative(f, 1), 0);

        const int rows = gen.uniform(1, 2);
        const int cols = gen.uniform(1, 2);
        const CDiffOp op = gen.op(rows, cols, 2);
        const CDiffOp adj = cdiff_adjoint(op);
        involution += cdiff_adjoint(adj) == op;

        std::vector<std::string> deps{"u"};
        for (int k = 0; k < rows + cols; ++k) {
            deps.push_back("v" + std::to_string(k));
        }
        const JetContext ext({"x", "t"}, deps);
        const Section p = fresh(1, cols);
        const Section q = fresh(1 + cols, rows);
        const DiffPoly defect = pairing(cdiff_apply(op, p), q) - pairing(p, cdiff_apply(adj, q));
        divergence += euler(defect, dependent_targets(ext)).is_zero();

        const int var = gen.uniform(0, 1);
        euler_kills += euler(total_derivative(f, var), targets).is_zero();

        const Section e = euler(f, targets);
        const CDiffOp l = linearize(e, ctx);
        helmholtz += cdiff_adjoint(l) == l;

        const Section chi{gen.poly(2, 2, 1)};
        const Section lhs = euler(evolutionary_apply(generator_on_dependents(chi), f), targets);
        const Section rhs = cdiff_apply(l, chi) + cdiff_apply(cdiff_adjoint(linearize(chi, ctx)), e);
        stokes += lhs == rhs;
    }
    o.require(commute == kCases, "[D_x, D_t] = 0");
    o.require(involution == kCases, "adjoint involution");
    o.require(divergence == kCases, "divergence identity");
    o.require(euler_kills == kCases, "E o D_i = 0");
    o.require(helmholtz == kCases, "Helmholtz self-adjointness");
    o.require(stokes == kCases, "Stokes formula");
    o.note("commutation " + count(commute, kCases) + ", involution " + count(involution, kCases) + ", divergence " +
           count(divergence, kCases) + ", E o D " + count(euler_kills, kCases) + ", Helmholtz " +
           count(helmholtz, kCases) + ", Stokes " + count(stokes, kCases));
    return o;
}

Outcome criterion2()
{
    Outcome o;
    const KTSetup kdv_setup = kt_setup(kdv(), {});
    const KTSetup grad_setup = kt_setup(gradient_system(), {gradient_compat()});

    const DeltaSquaredReport a = kt_delta_squared_check(kdv_setup, {2, 3, 2, 0});
    const DeltaSquaredReport b = kt_delta_squared_check(grad_setup, {3, 2, 2, 0});
    o.require(a.passed(), "delta^2 = 0 for KdV");
    o.require(b.passed(), "delta^2 = 0 for the gradient system");
    o.note("delta^2 = 0 on " + std::to_string(a.basis_size) + " KdV and " + std::to_string(b.basis_size) +
           " gradient basis monomials");

    PolyGen gen(2002);
    constexpr int kSections = 100;
    int square = 0, anticommute = 0;
    const auto basis = truncation_basis(grad_setup, {3, 2, 1, 0});
    for (int trial = 0; trial < kSections; ++trial) {
        const Section theta = random_section(gen, grad_setup, basis);
        square += lphi_star(grad_setup, lphi_star(grad_setup, theta)).is_zero();
        anticommute += (kt_delta_hat(grad_setup, lphi_star(grad_setup, theta)) +
                        lphi_star(grad_setup, kt_delta_hat(grad_setup, theta)))
                           .is_zero();
    }
    o.require(square == kSections, "(l_Phi^*)^2 = 0");
    o.require(anticommute == kSections, "delta l_Phi^* + l_Phi^* delta = 0");
    o.note("(l*)^2 = 0 " + count(square, kSections) + ", anticommutation " + count(anticommute, kSections));

    constexpr int kSamples = 50;
    int idempotent = 0, commutes = 0, commutes_sp = 0;
    for (int trial = 0; trial < kSamples; ++trial) {
        const KTSetup& setup = trial % 2 ? grad_setup : kdv_setup;
        const int arity = 1 + trial % 2;
        std::vector<Monomial> homogeneous;
        for (const auto& m : truncation_basis(setup, {3, 2, 1, 0})) {
            if (m.degree_of(SymbolKind::Antifield) == arity - 1) {
                homogeneous.push_back(m);
            }
        }
        const MultiLinOp psi = MultiLinOp::from_section(setup, random_section(gen, setup, homogeneous));
        const Section s = selfadjoint_project(setup, psi.psi);
        idempotent += selfadjoint_project(setup, s) == s;
        commutes += selfadjoint_project(setup, total_differential(setup, psi.psi)) == total_differential(setup, s);
        commutes_sp += selfadjoint_project(setup, total_differential(setup, s)) == total_differential(setup, s);
    }
    o.require(idempotent == kSamples, "S^2 = S");
    o.require(commutes == kSamples, "S o (delta + l_Phi^*) = (delta + l_Phi^*) o S");
    o.note("S^2 = S " + count(idempotent, kSamples) + ", S commutes with delta + l* " + count(commutes, kSamples) +
           " (on self-adjoint inputs " + count(commutes_sp, kSamples) + ")");
    return o;
}

Outcome criterion3()
{
    Outcome o;
    const EquationSystem sys = kdv();
    const auto basis = cosymmetry_solve(sys, {2, 2, 2, 0});
    o.require(basis.size() == 3, "dimension 3");
    std::vector<DiffPoly> got;
    for (const auto& c : basis) {
        got.push_back(c.psi[0]);
    }
    const std::vector<DiffPoly> expected{DiffPoly(1L), U(), U({2}) + Rational(1, 2) * U() * U()};
    for (const auto& e : expected) {
        o.require(sys.reduce(kdv_adjoint_by_hand(e)).is_zero(), "hand-written adjoint annihilates the expected basis");
    }
    o.require(same_span(got, expected), "span equals {1, u, u_xx + u^2/2}");

    const CDiffOp lF = linearize(sys.F(), sys.context());
    int residual = 0, certified = 0, currents = 0;
    for (const auto& c : basis) {
        residual += prop41_residual(sys, c.psi).is_zero();
        for (int bound = 0; bound <= 2; ++bound) {
            const Prop42Verdict v = prop42_certificate(sys, c.psi, bound);
            if (!v.certified) {
                continue;
            }
            const bool identity =
                cdiff_apply(v.delta, sys.F()) == cdiff_apply(cdiff_adjoint(lF), c.psi) &&
                sys.reduce(linearize(c.psi, sys.context()) + cdiff_adjoint(v.delta) - cdiff_compose(v.nabla, lF)).is_zero() &&
                sys.reduce(v.nabla - cdiff_adjoint(v.nabla)).is_zero();
            certified += identity;
            break;
        }
        const auto omega = reconstruct_current(sys, c.psi);
        if (omega) {
            const auto flux = omega->current();
            const DiffPoly div = total_derivative(flux[0], 0) + total_derivative(flux[1], 1);
            currents += current_divergence_check(sys, *omega).conserved && sys.reduce(div).is_zero();
        }
    }
    o.require(residual == 3, "Prop 4.1 residual vanishes");
    o.require(certified == 3, "Prop 4.2 certificates verified");
    o.require(currents == 3, "induced currents conserved");
    o.note("dim " + std::to_string(basis.size()) + ", residual zero " + count(residual, 3) + ", certified " +
           count(certified, 3) + ", currents conserved " + count(currents, 3));
    return o;
}

Outcome criterion4()
{
    Outcome o;
    const EquationSystem sys = heat();
    const auto basis = cosymmetry_solve(sys, {2, 0, 0, 2});
    const DiffPoly x(JetSymbol::base(0));
    const DiffPoly t(JetSymbol::base(1));
    const std::vector<DiffPoly> expected{DiffPoly(1L), x, x * x - DiffPoly(2L) * t};
    std::vector<DiffPoly> got;
    for (const auto& c : basis) {
        got.push_back(c.psi[0]);
        o.require((total_derivative(c.psi[0], 1) + total_derivative(c.psi[0], mi({2}))).is_zero(),
                  "psi_t + psi_xx = 0");
    }
    o.require(got == expected, "basis equals {1, x, x^2 - 2t}");
    std::string listed;
    for (const auto& g : got) {
        listed += (listed.empty() ? "" : ", ") + g.render(sys.context());
    }
    o.note("basis {" + listed + "}");
    return o;
}

Outcome criterion5()
{
    Outcome o;
    const KTSetup setup = kt_setup(kdv(), {});
    const HomologyResult h = truncated_homology(setup, {2, 2, 2, 0}, 1);
    const auto basis = cosymmetry_solve(kdv(), {2, 2, 2, 0});
    o.require(h.dim == 3, "homology dimension 3");
    o.require(h.stable, "stable across jet orders 2 and 3");
    o.require(h.dim == static_cast<int>(basis.size()), "matches the cosymmetry count");
    std::vector<DiffPoly> reps;
    std::vector<DiffPoly> sols;
    for (const auto& r : h.representatives) {
        reps.push_back(r[0]);
        o.require(kdv().reduce(kdv_adjoint_by_hand(r[0])).is_zero(), "representative is a cosymmetry");
    }
    for (const auto& c : basis) {
        sols.push_back(c.psi[0]);
    }
    o.require(same_span(reps, sols), "representatives span the cosymmetry space");
    std::string windows;
    for (const auto& w : h.windows) {
        windows += " J=" + std::to_string(w.jet_order) + ":" + std::to_string(w.dim);
    }
    o.note("dim " + std::to_string(h.dim) + (h.stable ? " stable" : " unstable") + ", windows" + windows +
           ", cosymmetries " + std::to_string(basis.size()));
    return o;
}

Outcome criterion6()
{
    Outcome o;
    const KTSetup setup = kt_setup(gradient_system(), {gradient_compat()});
    for (int p : {3, 4}) {
        const HomologyResult h = truncated_homology(setup, {p + 1, 1, 1, 0}, p);
        o.require(h.dim == 0 && h.stable, "H_" + std::to_string(p) + " = 0 on stable windows");
        std::string windows;
        for (const auto& w : h.windows) {
            windows += " J=" + std::to_string(w.jet_order) + ":" + std::to_string(w.dim) + " (chain " +
                       std::to_string(w.chain_dim) + ")";
        }
        o.note("H_" + std::to_string(p) + " dim " + std::to_string(h.dim) + "," + windows);
    }
    return o;
}

Outcome criterion7()
{
    Outcome o;
    const EquationSystem sys = kdv();
    const KTSetup setup = kt_setup(sys, {});
    const CompareReport r = compare_routes(setup, {2, 2, 2, 0}, 1);
    const auto skew_witness = [&](const ThetaVerdict& v, const Section& psi) {
        return v.member && cdiff_adjoint(v.box) == -v.box && cdiff_apply(v.box, sys.F()) == psi;
    };
    const RouteEntry* dxf = nullptr;
    const RouteEntry* built = nullptr;
    for (const auto& e : r.entries) {
        if (e.label == "D_x(F)") {
            dxf = &e;
        } else if (!e.from_solver) {
            built = &e;
        }
    }
    o.require(dxf && built, "report contains both probes");
    if (!dxf || !built) {
        return o;
    }
    o.require(dxf->route41 == "trivial" && dxf->route42 == "trivial", "D_x(F) trivial under both routes");
    o.require(skew_witness(dxf->theta.back(), dxf->psi), "D_x(F) witness verified");
    o.require(built->vanishes_on_shell && sys.reduce(built->psi).is_zero(), "constructed psi vanishes on shell");
    o.require(built->route42 == "trivial", "route 4.2 declares it trivial");
    o.require(built->theta.size() >= 2 && !built->theta[0].member, "no skew witness at bound 0");
    o.require(built->theta.size() >= 2 && skew_witness(built->theta[1], built->psi), "witness found at bound 1");
    o.note("D_x(F): " + dxf->route41 + "/" + dxf->route42 + "; " + built->label + ": bound 0 " +
           (built->theta[0].member ? "member" : "not found") + ", bound 1 " +
           (built->theta.size() > 1 && built->theta[1].member ? "member" : "not found") + ", route 4.2 " +
           built->route42);
    return o;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome criterion8()
{
    Outcome o;
    const std::filesystem::path src = JETKT_SOURCE_DIR;
    std::map<std::string, int> codes;
    {
        std::istringstream in(slurp(src / "tests/golden/exit_codes.txt"));
        std::string name;
        int code = 0;
        while (in >> name >> code) {
            codes[name] = code;
        }
    }
    std::istringstream manifest(slurp(src / "tests/golden/manifest.txt"));
    int total = 0, equal = 0;
    for (std::string line; std::getline(manifest, line);) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto bar = line.find('|');
        std::istringstream name_in(line.substr(0, bar));
        std::string name;
        name_in >> name;
        std::istringstream args_in(line.substr(bar + 1));
        std::vector<std::string> args;
        for (std::string w; args_in >> w;) {
            args.push_back(w);
        }
        args.at(1) = (src / "problems" / args[1]).string();
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        ++total;
        const bool same = codes.count(name) && codes[name] == code && out.str() == slurp(src / "tests/golden" / name);
        equal += same;
        if (!same) {
            o.note("golden mismatch: " + name);
        }
    }
    o.require(total > 0 && equal == total, "golden outputs byte-identical");
    std::ostringstream fuzz_out;
    std::ostringstream fuzz_err;
    const bool fuzz_ok = fuzz::run(100000, fuzz_out, fuzz_err);
    o.require(fuzz_ok, "parser fuzzing: " + fuzz_err.str());
    std::string summary = fuzz_out.str();
    if (!summary.empty() && summary.back() == '\n') {
        summary.pop_back();
    }
    o.note("golden " + count(equal, total) + "; fuzz " + summary);
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double limit;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    bool strict = false;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) {
            strict = true;
        } else {
            only.push_back(std::atoi(argv[i]));
        }
    }
    const std::vector<Criterion> criteria{
        {1, "algebraic identity suite", 60, criterion1},
        {2, "Koszul-Tate structure", 120, criterion2},
        {3, "KdV conservation laws", 120, criterion3},
        {4, "heat equation cosymmetries", 10, criterion4},
        {5, "route agreement for KdV", 300, criterion5},
        {6, "exactness for the gradient system", 300, criterion6},
        {7, "asymmetry of the two routes", 60, criterion7},
        {8, "parser and CLI", 120, criterion8},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(seconds <= c.limit, "time limit " + std::to_string(static_cast<int>(c.limit)) + " s");
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << c.title << ", " << seconds
             << " s)";
        for (const auto& n : o.notes) {
            line << "; " << n;
        }
        std::cout << line.str() << std::endl;
        failed += o.pass ? 0 : 1;
    }
    return strict && failed ? 1 : 0;
}
