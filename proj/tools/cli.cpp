#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jetkt/conslaw.hpp"
#include "jetkt/koszultate.hpp"
#include "jetkt/problem.hpp"

namespace jetkt::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kCommands{"linearize", "adjoint",      "euler",     "reduce",
                                         "kt-check",  "kt-homology",  "cosymmetries",
                                         "conservation-check", "to-cosymmetry", "compare"};

struct Options {
    std::string command;
    std::string file;
    int jet_order = 2;
    int degree = 2;
    int base_degree = 0;
    std::optional<int> antighost;
    int bound = 1;
    bool json = false;
    std::string output;
};

struct Context {
    const Options& opt;
    const ProblemFile& problem;
    std::ostringstream text;
    Json results = Json::array();
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json strings(const Section& s, const ProblemFile& p)
{
    Json a = Json::array();
    for (const auto& c : s.components) {
        a.push_back(p.render(c));
    }
    return a;
}

std::string bracket(const Section& s, const ProblemFile& p)
{
    std::string out = "[";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out += (k ? ", " : "") + p.render(s[k]);
    }
    return out + "]";
}

Json op_rows(const CDiffOp& op, const ProblemFile& p)
{
    Json rows = Json::array();
    for (int r = 0; r < op.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < op.cols(); ++c) {
            row.push_back(p.render_entry(op, r, c));
        }
        rows.push_back(row);
    }
    return rows;
}

Json flux_json(const HorizontalForm& omega, const ProblemFile& p)
{
    Json j = Json::object();
    const auto flux = omega.current();
    for (std::size_t i = 0; i < flux.size(); ++i) {
        j[p.independents[i]] = p.render(flux[i]);
    }
    return j;
}

std::string flux_text(const HorizontalForm& omega, const ProblemFile& p)
{
    const auto flux = omega.current();
    std::string out;
    for (std::size_t i = 0; i < flux.size(); ++i) {
        out += (i ? ", " : "") + std::string("J_") + p.independents[i] + " = " + p.render(flux[i]);
    }
    return out;
}

int time_variable(const ProblemFile& p)
{
    return static_cast<int>(p.independents.size()) - 1;
}

TruncationSpec bounds_of(const Options& opt, int antighost_max)
{
    return {antighost_max, opt.jet_order, opt.degree, opt.base_degree};
}

void cmd_linearize(Context& c)
{
    const EquationSystem sys = c.problem.system();
    const CDiffOp l = linearize(sys.F(), sys.context());
    for (int a = 0; a < l.rows(); ++a) {
        Json e;
        e["equation"] = c.problem.render_equation(static_cast<std::size_t>(a));
        e["row"] = op_rows(l, c.problem)[static_cast<std::size_t>(a)];
        c.results.push_back(e);
        c.text << "l_F row " << (a + 1) << ": " << c.problem.render_row(l, a) << "\n";
    }
}

void cmd_adjoint(Context& c)
{
    const EquationSystem sys = c.problem.system();
    const CDiffOp l = cdiff_adjoint(linearize(sys.F(), sys.context()));
    for (int j = 0; j < l.rows(); ++j) {
        Json e;
        e["dependent"] = c.problem.dependents[static_cast<std::size_t>(j)];
        e["row"] = op_rows(l, c.problem)[static_cast<std::size_t>(j)];
        c.results.push_back(e);
        c.text << "l_F^* row " << c.problem.dependents[static_cast<std::size_t>(j)] << ": "
               << c.problem.render_row(l, j) << "\n";
    }
}

void cmd_euler(Context& c)
{
    const JetContext ctx(c.problem.independents, c.problem.dependents);
    for (const auto& d : c.problem.densities) {
        const Section e = euler(d.value, dependent_targets(ctx));
        Json j;
        j["name"] = d.name;
        j["density"] = c.problem.render(d.value);
        j["euler"] = strings(e, c.problem);
        c.results.push_back(j);
        c.text << "E(" << d.name << ") = " << bracket(e, c.problem) << "\n";
    }
}

void cmd_reduce(Context& c)
{
    const EquationSystem sys = c.problem.system();
    for (const auto& d : c.problem.densities) {
        const DiffPoly nf = sys.reduce(d.value);
        Json j;
        j["name"] = d.name;
        j["value"] = Json::array({c.problem.render(d.value)});
        j["normal_form"] = Json::array({c.problem.render(nf)});
        c.results.push_back(j);
        c.text << d.name << " -> " << c.problem.render(nf) << "\n";
    }
    for (const auto& s : c.problem.cosymmetries) {
        const Section nf = sys.reduce(s.value);
        Json j;
        j["name"] = s.name;
        j["value"] = strings(s.value, c.problem);
        j["normal_form"] = strings(nf, c.problem);
        c.results.push_back(j);
        c.text << s.name << " -> " << bracket(nf, c.problem) << "\n";
    }
}

std::vector<CDiffOp> compat_ops(const ProblemFile& p)
{
    std::vector<CDiffOp> ops;
    for (const auto& c : p.compat) {
        ops.push_back(c.op);
    }
    return ops;
}

void cmd_kt_check(Context& c)
{
    const KTSetup setup = kt_setup(c.problem.system(), compat_ops(c.problem));
    const int p = c.opt.antighost.value_or(2);
    const DeltaSquaredReport r = kt_delta_squared_check(setup, bounds_of(c.opt, p));
    Json j;
    j["delta_squared_zero"] = r.passed();
    j["basis_size"] = r.basis_size;
    Json failures = Json::array();
    for (const auto& [m, v] : r.failures) {
        failures.push_back({{"monomial", c.problem.render(m)}, {"delta_squared", c.problem.render(v)}});
    }
    j["failures"] = failures;
    c.results.push_back(j);
    c.text << "delta^2 = 0: " << (r.passed() ? "PASS" : "FAIL") << " (" << r.basis_size << " basis elements)\n";
    for (const auto& [m, v] : r.failures) {
        c.text << "  delta^2(" << c.problem.render(m) << ") = " << c.problem.render(v) << "\n";
    }
    if (!r.passed()) {
        throw ValidationError("delta^2 does not vanish on the truncation basis");
    }
}

void cmd_kt_homology(Context& c)
{
    const KTSetup setup = kt_setup(c.problem.system(), compat_ops(c.problem));
    const int p = c.opt.antighost.value_or(1);
    const HomologyResult h = truncated_homology(setup, bounds_of(c.opt, p + 1), p);
    Json j;
    j["antighost"] = h.p;
    j["dim"] = h.dim;
    j["stable"] = h.stable;
    Json windows = Json::array();
    for (const auto& w : h.windows) {
        windows.push_back({{"jet_order", w.jet_order},
                           {"dim", w.dim},
                           {"chain_dim", w.chain_dim},
                           {"cycle_rank", w.cycle_rank},
                           {"boundary_rank", w.boundary_rank}});
    }
    j["windows"] = windows;
    Json reps = Json::array();
    for (const auto& r : h.representatives) {
        reps.push_back(strings(r, c.problem));
    }
    j["representatives"] = reps;
    c.results.push_back(j);
    c.text << "H_" << h.p << ": dim " << h.dim << (h.stable ? " (stable)" : " (unstable)") << "\n";
    for (const auto& w : h.windows) {
        c.text << "  jet order " << w.jet_order << ": dim " << w.dim << ", chain " << w.chain_dim << ", cycles "
               << w.cycle_rank << ", boundaries " << w.boundary_rank << "\n";
    }
    for (const auto& r : h.representatives) {
        c.text << "  representative " << bracket(r, c.problem) << "\n";
    }
}

void cmd_cosymmetries(Context& c)
{
    const EquationSystem sys = c.problem.system();
    for (const auto& cs : cosymmetry_solve(sys, bounds_of(c.opt, 1))) {
        Json j;
        j["psi"] = strings(cs.psi, c.problem);
        j["order"] = cs.order;
        j["degree"] = cs.degree;
        j["provenance"] = cs.provenance;
        c.results.push_back(j);
        c.text << "psi = " << bracket(cs.psi, c.problem) << "\n";
    }
    c.text << c.results.size() << " cosymmetries\n";
}

void cmd_conservation_check(Context& c)
{
    const EquationSystem sys = c.problem.system();
    for (const auto& d : c.problem.densities) {
        Json j;
        j["kind"] = "density";
        j["name"] = d.name;
        j["density"] = c.problem.render(d.value);
        const auto omega = current_from_density(sys, d.value, time_variable(c.problem));
        j["conserved"] = omega.has_value();
        if (omega) {
            const DivergenceCheck check = current_divergence_check(sys, *omega);
            j["current"] = flux_json(*omega, c.problem);
            j["lambda"] = op_rows(check.lambda, c.problem);
            c.text << d.name << ": conserved, " << flux_text(*omega, c.problem) << "\n";
        } else {
            j["current"] = nullptr;
            j["lambda"] = nullptr;
            c.text << d.name << ": no conserved current within the ansatz\n";
        }
        c.results.push_back(j);
    }
    const CDiffOp adj = cdiff_adjoint(linearize(sys.F(), sys.context()));
    for (const auto& s : c.problem.cosymmetries) {
        Json j;
        j["kind"] = "cosymmetry";
        j["name"] = s.name;
        j["psi"] = strings(s.value, c.problem);
        const bool ok = sys.reduce(cdiff_apply(adj, s.value)).is_zero();
        j["conserved"] = ok;
        const auto omega = ok ? reconstruct_current(sys, sys.reduce(s.value)) : std::nullopt;
        j["current"] = omega ? flux_json(*omega, c.problem) : Json(nullptr);
        c.results.push_back(j);
        c.text << s.name << ": " << (ok ? "cosymmetry" : "not a cosymmetry");
        if (omega) {
            c.text << ", " << flux_text(*omega, c.problem);
        }
        c.text << "\n";
    }
}

void cmd_to_cosymmetry(Context& c)
{
    const EquationSystem sys = c.problem.system();
    for (const auto& d : c.problem.densities) {
        const auto omega = current_from_density(sys, d.value, time_variable(c.problem));
        if (!omega) {
            throw ValidationError("density " + d.name + " has no conserved current within the ansatz");
        }
        const Section psi = current_to_cosymmetry(sys, *omega);
        Json j;
        j["name"] = d.name;
        j["density"] = c.problem.render(d.value);
        j["psi"] = strings(psi, c.problem);
        c.results.push_back(j);
        c.text << d.name << " -> psi = " << bracket(psi, c.problem) << "\n";
    }
}

void cmd_compare(Context& c)
{
    const KTSetup setup = kt_setup(c.problem.system(), compat_ops(c.problem));
    const CompareReport r = compare_routes(setup, bounds_of(c.opt, 1), c.opt.bound);
    for (const auto& e : r.entries) {
        Json j;
        j["label"] = e.label;
        j["psi"] = strings(e.psi, c.problem);
        j["from_solver"] = e.from_solver;
        j["prop41_residual_zero"] = e.prop41_zero;
        Json theta = Json::array();
        for (const auto& t : e.theta) {
            theta.push_back({{"bound", t.bound},
                             {"member", t.member},
                             {"witness", t.member ? op_rows(t.box, c.problem) : Json(nullptr)}});
        }
        j["theta"] = theta;
        j["vanishes_on_shell"] = e.vanishes_on_shell;
        if (e.prop42) {
            j["prop42"] = {{"certified", e.prop42->certified},
                           {"bound", e.prop42->bound},
                           {"delta", op_rows(e.prop42->delta, c.problem)},
                           {"nabla", op_rows(e.prop42->nabla, c.problem)}};
        } else {
            j["prop42"] = nullptr;
        }
        j["route41"] = e.route41;
        j["route42"] = e.route42;
        j["agree"] = e.agree;
        c.results.push_back(j);

        c.text << e.label << ": psi = " << bracket(e.psi, c.problem) << "\n";
        c.text << "  residual " << (e.prop41_zero ? "zero" : "nonzero") << ", theta:";
        for (const auto& t : e.theta) {
            c.text << " bound " << t.bound << " " << (t.member ? "member" : "not found");
        }
        c.text << "\n  route 4.1 " << e.route41 << ", route 4.2 " << e.route42 << (e.agree ? ", agree" : ", differ")
               << "\n";
    }
    c.text << "nontrivial classes: " << r.nontrivial_41 << " (route 4.1), " << r.nontrivial_42 << " (route 4.2)\n";
}

const std::map<std::string, std::function<void(Context&)>>& dispatch()
{
    static const std::map<std::string, std::function<void(Context&)>> table{
        {"linearize", cmd_linearize},
        {"adjoint", cmd_adjoint},
        {"euler", cmd_euler},
        {"reduce", cmd_reduce},
        {"kt-check", cmd_kt_check},
        {"kt-homology", cmd_kt_homology},
        {"cosymmetries", cmd_cosymmetries},
        {"conservation-check", cmd_conservation_check},
        {"to-cosymmetry", cmd_to_cosymmetry},
        {"compare", cmd_compare},
    };
    return table;
}

Json problem_json(const ProblemFile& p, const std::string& file)
{
    Json j;
    j["source"] = std::filesystem::path(file).filename().string();
    j["independents"] = p.independents;
    j["dependents"] = p.dependents;
    Json eqs = Json::array();
    for (std::size_t a = 0; a < p.equations.size(); ++a) {
        eqs.push_back(p.render_equation(a));
    }
    j["equations"] = eqs;
    Json compat = Json::array();
    for (const auto& c : p.compat) {
        compat.push_back({{"name", c.name}, {"operator", op_rows(c.op, p)}});
    }
    j["compat"] = compat;
    Json dens = Json::array();
    for (const auto& d : p.densities) {
        dens.push_back({{"name", d.name}, {"value", p.render(d.value)}});
    }
    j["densities"] = dens;
    Json cos = Json::array();
    for (const auto& c : p.cosymmetries) {
        cos.push_back({{"name", c.name}, {"value", strings(c.value, p)}});
    }
    j["cosymmetries"] = cos;
    return j;
}

Json bounds_json(const Options& opt)
{
    Json j;
    j["jet_order"] = opt.jet_order;
    j["degree"] = opt.degree;
    j["base_degree"] = opt.base_degree;
    if (opt.antighost) {
        j["antighost"] = *opt.antighost;
    } else if (opt.command == "kt-check") {
        j["antighost"] = 2;
    } else if (opt.command == "kt-homology") {
        j["antighost"] = 1;
    } else {
        j["antighost"] = nullptr;
    }
    j["bound"] = opt.bound;
    return j;
}

int emit(const Options& opt, const std::string& payload, std::ostream& out, std::ostream& err)
{
    if (opt.output.empty()) {
        out << payload;
        return Success;
    }
    std::ofstream f(opt.output, std::ios::binary);
    if (!f || !(f << payload)) {
        err << "jetkt: cannot write " << opt.output << "\n";
        return Usage;
    }
    return Success;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options opt;
    CLI::App app{"Symbolic jet-space engine: Koszul-Tate complexes and conservation laws", "jetkt"};
    app.add_option("command", opt.command, "Command to run")->required()->check(CLI::IsMember(kCommands));
    app.add_option("file", opt.file, "Problem file (.eq)")->required();
    app.add_option("--jet-order", opt.jet_order, "Jet order bound")->check(CLI::Range(0, 16));
    app.add_option("--degree", opt.degree, "Polynomial degree bound in the dependent variables")->check(CLI::Range(0, 16));
    app.add_option("--base-degree", opt.base_degree, "Degree bound in the independent variables")->check(CLI::Range(0, 16));
    app.add_option("--antighost", opt.antighost, "Antighost number")->check(CLI::Range(0, 16));
    app.add_option("--bound", opt.bound, "Operator order bound for witness searches")->check(CLI::Range(0, 8));
    app.add_flag("--json", opt.json, "Emit JSON");
    app.add_option("--output", opt.output, "Write output to FILE");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "jetkt: " << e.what() << "\n" << "run 'jetkt --help' for usage\n";
        return Usage;
    }

    std::ifstream in(opt.file, std::ios::binary);
    if (!in) {
        err << "jetkt: cannot read " << opt.file << "\n";
        return Usage;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    std::optional<ProblemFile> problem;
    try {
        problem = parse_problem(buf.str());
    } catch (const ParseError& e) {
        err << e.diagnostic().format(opt.file) << "\n";
        return Parse;
    }

    Context ctx{opt, *problem, {}, Json::array()};
    int status = Success;
    try {
        dispatch().at(opt.command)(ctx);
    } catch (const ValidationError& e) {
        err << "jetkt: validation failed: " << e.what() << "\n";
        status = Validation;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ComputationRejected) {
            err << "jetkt: computation rejected: " << e.what() << "\n";
            return Rejected;
        }
        err << "jetkt: validation failed: " << e.what() << "\n";
        return Validation;
    }

    std::string payload;
    if (opt.json) {
        Json doc;
        doc["problem"] = problem_json(*problem, opt.file);
        doc["command"] = opt.command;
        doc["bounds"] = bounds_json(opt);
        doc["results"] = ctx.results;
        payload = doc.dump(2) + "\n";
    } else {
        payload = ctx.text.str();
    }
    const int written = emit(opt, payload, out, err);
    return status != Success ? status : written;
}

} // namespace jetkt::cli
