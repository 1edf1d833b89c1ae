#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "degel/barriers.hpp"
#include "degel/config.hpp"
#include "degel/errors.hpp"
#include "degel/experiments.hpp"
#include "degel/operators.hpp"
#include "degel/scaling.hpp"
#include "degel/solver.hpp"

namespace py = pybind11;
using namespace degel;

namespace {

py::dict barrier_dict(const BarrierConstants& bc) {
    py::dict d;
    d["Xi2"] = bc.Xi2;
    d["Xi3"] = bc.Xi3;
    d["T0"] = bc.T0;
    d["c"] = bc.c;
    d["gamma"] = bc.gamma();
    return d;
}

// Solves the problem described by a config text; exterior nodes are NaN.
py::tuple solve_config(const std::string& text) {
    const ExperimentConfig cfg = parse_config(text);
    const Grid2D g = build_grid(cfg);
    const ProblemSpec pb = build_problem(cfg);
    const SolverConfig sc = build_solver_config(cfg);
    const Solution s = [&] {
        py::gil_scoped_release release;
        return solve(pb, g, sc);
    }();
    const auto n = static_cast<py::ssize_t>(g.n());
    py::array_t<double> u({n, n});
    auto view = u.mutable_unchecked<2>();
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            view(j, i) = g.kind(i, j) == NodeKind::Exterior ? std::numeric_limits<double>::quiet_NaN() : s.u(i, j);
        }
    }
    py::dict rep;
    rep["iterations"] = s.report.iterations;
    rep["residual"] = s.report.residual;
    rep["converged"] = s.report.converged;
    rep["h"] = g.h();
    return py::make_tuple(u, rep);
}

}  // namespace

PYBIND11_MODULE(_degel, m) {
    m.doc() = "Degenerate elliptic solver core";
    py::register_exception<Error>(m, "DegelError", PyExc_ValueError);

    m.def("sharp_exponent", &sharp_exponent, py::arg("p"));
    m.def(
        "smallest_root",
        [](double p, double q, double lambda, double Lambda, double L1, int N, double diam, double norm_a, double m_inf,
           double c_fraction) {
            return barrier_dict(smallest_root({p, q, lambda, Lambda, L1, N, diam, norm_a, m_inf}, c_fraction));
        },
        py::arg("p") = 2.0, py::arg("q") = 3.0, py::arg("lam") = 1.0, py::arg("Lam") = 1.0, py::arg("L1") = 1.0,
        py::arg("N") = 2, py::arg("diam") = 2.0, py::arg("norm_a") = 1.0, py::arg("m_inf") = 1.0,
        py::arg("c_fraction") = 0.9);
    m.def(
        "pucci_plus", [](double a11, double a12, double a22, double lam, double Lam) {
            return pucci_plus({a11, a12, a22}, {lam, Lam});
        },
        py::arg("a11"), py::arg("a12"), py::arg("a22"), py::arg("lam"), py::arg("Lam"));
    m.def(
        "pucci_minus", [](double a11, double a12, double a22, double lam, double Lam) {
            return pucci_minus({a11, a12, a22}, {lam, Lam});
        },
        py::arg("a11"), py::arg("a12"), py::arg("a22"), py::arg("lam"), py::arg("Lam"));
    m.def("M0", &M0, py::arg("rho"), py::arg("beta"));
    m.def("dyadic_A", &dyadic_A, py::arg("k"), py::arg("rho"), py::arg("beta"), py::arg("grad0"));
    m.def(
        "exact_example_solution", [](double x, double y, double p) { return exact_example_solution({x, y}, p); },
        py::arg("x"), py::arg("y"), py::arg("p"));
    m.def("solve_config", &solve_config, py::arg("text"),
          "Solve the problem described by config text; returns (u[n, n] indexed [iy, ix], report dict).");
    m.def(
        "run_experiment",
        [](const std::string& tag, const std::string& text, const std::string& out_dir, std::uint64_t seed) {
            const ExperimentConfig cfg = parse_config(text);
            RunOutcome r;
            {
                py::gil_scoped_release release;
                r = run_experiment(tag, cfg, out_dir, seed);
            }
            py::dict summary;
            for (const auto& [k, v] : r.summary) summary[py::str(k)] = v;
            py::dict d;
            d["exit_code"] = r.exit_code;
            d["summary"] = summary;
            d["band_failures"] = r.band_failures;
            return d;
        },
        py::arg("tag"), py::arg("config_text"), py::arg("out_dir"), py::arg("seed") = 0);
}
