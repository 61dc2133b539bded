#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "jetkt/conslaw.hpp"
#include "jetkt/koszultate.hpp"
#include "jetkt/problem.hpp"

namespace py = pybind11;
using namespace jetkt;

namespace {

std::vector<std::string> strings(const ProblemFile& p, const Section& s)
{
    std::vector<std::string> out;
    for (const auto& c : s.components) {
        out.push_back(p.render(c));
    }
    return out;
}

std::vector<std::vector<std::string>> rows(const ProblemFile& p, const CDiffOp& op)
{
    std::vector<std::vector<std::string>> out(static_cast<std::size_t>(op.rows()));
    for (int r = 0; r < op.rows(); ++r) {
        for (int c = 0; c < op.cols(); ++c) {
            out[static_cast<std::size_t>(r)].push_back(p.render_entry(op, r, c));
        }
    }
    return out;
}

KTSetup setup_of(const ProblemFile& p)
{
    std::vector<CDiffOp> ops;
    for (const auto& c : p.compat) {
        ops.push_back(c.op);
    }
    return kt_setup(p.system(), ops);
}

} // namespace

PYBIND11_MODULE(jetkt, m)
{
    m.doc() = "Symbolic jet-space engine: Koszul-Tate complexes, cosymmetries and conservation laws";

    static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
    static py::exception<Error> jetkt_error(m, "JetktError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const ParseError& e) {
            py::set_error(parse_error, e.what());
        } catch (const Error& e) {
            py::set_error(jetkt_error, e.what());
        }
    });

    py::class_<ProblemFile>(m, "Problem")
        .def_readonly("independents", &ProblemFile::independents)
        .def_readonly("dependents", &ProblemFile::dependents)
        .def_property_readonly("equations",
                               [](const ProblemFile& p) {
                                   std::vector<std::string> out;
                                   for (std::size_t a = 0; a < p.equations.size(); ++a) {
                                       out.push_back(p.render_equation(a));
                                   }
                                   return out;
                               })
        .def_property_readonly("tier_ranks", &ProblemFile::tier_ranks)
        .def("render", [](const ProblemFile& p) { return render_problem(p); })
        .def("__repr__", [](const ProblemFile& p) { return "<jetkt.Problem " + std::to_string(p.equations.size()) + " equations>"; });

    m.def("parse", [](const std::string& text) { return parse_problem(text); }, py::arg("text"),
          "Parse a problem in the equation DSL.");

    m.def("linearize", [](const ProblemFile& p) {
        const EquationSystem sys = p.system();
        return rows(p, linearize(sys.F(), sys.context()));
    });
    m.def("adjoint", [](const ProblemFile& p) {
        const EquationSystem sys = p.system();
        return rows(p, cdiff_adjoint(linearize(sys.F(), sys.context())));
    });
    m.def("reduce", [](const ProblemFile& p, const std::string& expr) {
        const ProblemFile q = parse_problem(render_problem(p) + "density jetktinput = " + expr + ";");
        return p.render(p.system().reduce(q.densities.back().value));
    }, py::arg("problem"), py::arg("expression"));

    m.def(
        "cosymmetries",
        [](const ProblemFile& p, int jet_order, int degree, int base_degree) {
            std::vector<std::vector<std::string>> out;
            for (const auto& c : cosymmetry_solve(p.system(), {1, jet_order, degree, base_degree})) {
                out.push_back(strings(p, c.psi));
            }
            return out;
        },
        py::arg("problem"), py::arg("jet_order") = 2, py::arg("degree") = 2, py::arg("base_degree") = 0);

    m.def(
        "kt_check",
        [](const ProblemFile& p, int antighost, int jet_order, int degree, int base_degree) {
            const DeltaSquaredReport r = kt_delta_squared_check(setup_of(p), {antighost, jet_order, degree, base_degree});
            py::dict d;
            d["passed"] = r.passed();
            d["basis_size"] = r.basis_size;
            d["failures"] = r.failures.size();
            return d;
        },
        py::arg("problem"), py::arg("antighost") = 2, py::arg("jet_order") = 2, py::arg("degree") = 2,
        py::arg("base_degree") = 0);

    m.def(
        "kt_homology",
        [](const ProblemFile& p, int antighost, int jet_order, int degree, int base_degree) {
            const HomologyResult h =
                truncated_homology(setup_of(p), {antighost + 1, jet_order, degree, base_degree}, antighost);
            py::dict d;
            d["dim"] = h.dim;
            d["stable"] = h.stable;
            std::vector<std::vector<std::string>> reps;
            for (const auto& r : h.representatives) {
                reps.push_back(strings(p, r));
            }
            d["representatives"] = reps;
            return d;
        },
        py::arg("problem"), py::arg("antighost") = 1, py::arg("jet_order") = 2, py::arg("degree") = 2,
        py::arg("base_degree") = 0);

    m.def(
        "compare",
        [](const ProblemFile& p, int bound, int jet_order, int degree, int base_degree) {
            const CompareReport r = compare_routes(setup_of(p), {1, jet_order, degree, base_degree}, bound);
            py::list entries;
            for (const auto& e : r.entries) {
                py::dict d;
                d["label"] = e.label;
                d["psi"] = strings(p, e.psi);
                d["route41"] = e.route41;
                d["route42"] = e.route42;
                d["agree"] = e.agree;
                std::vector<bool> theta;
                for (const auto& t : e.theta) {
                    theta.push_back(t.member);
                }
                d["theta"] = theta;
                entries.append(d);
            }
            return entries;
        },
        py::arg("problem"), py::arg("bound") = 1, py::arg("jet_order") = 2, py::arg("degree") = 2,
        py::arg("base_degree") = 0);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a jetkt command line; returns (exit code, stdout, stderr).");
}
