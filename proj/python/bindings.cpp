#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>

#include "ptcs/checks.hpp"
#include "ptcs/coherent_states.hpp"
#include "ptcs/cs_quantization.hpp"
#include "ptcs/dynamics.hpp"
#include "ptcs/eigensystem.hpp"
#include "ptcs/expression.hpp"

namespace py = pybind11;
using namespace ptcs;

namespace {

using cvec = py::array_t<std::complex<double>>;

template <class T>
py::array_t<T> to_array(const std::vector<T>& v, std::vector<py::ssize_t> shape = {}) {
    if (shape.empty()) shape = {static_cast<py::ssize_t>(v.size())};
    py::array_t<T> out(shape);
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

SpectralState from_array(const cvec& a, double nu) {
    SpectralState s;
    s.nu = nu;
    auto r = a.unchecked<1>();
    s.coeffs.resize(static_cast<std::size_t>(r.shape(0)));
    for (py::ssize_t n = 0; n < r.shape(0); ++n) s.coeffs[static_cast<std::size_t>(n)] = r(n);
    return s;
}

GridSpec make_grid(int q_count, int p_count, double p_max) {
    GridSpec g = default_phase_grid();
    g.q_count = q_count;
    g.p_count = p_count;
    g.p_max = p_max;
    return g;
}

SpectralState evolved_state(double q, double p, double nu_cs, double nu_evolve, int nmax) {
    return cs_coefficients(CoherentState({q, p, nu_cs}), nmax, nu_evolve);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Coherent states of the trigonometric Poschl-Teller well (dimensionless frame: L = pi, hbar = 1, m = 1/2)";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    m.def("energy", &energy, py::arg("n"), py::arg("nu"), "E_n = (n + nu + 1)^2");
    m.def("eigenfunction", py::vectorize([](int n, double nu, double x) { return eigenfunction(n, nu, x); }),
          py::arg("n"), py::arg("nu"), py::arg("x"));
    m.def("superpotential", py::vectorize([](double nu, double q) { return superpotential(nu, q); }), py::arg("nu"),
          py::arg("q"), "-(nu+1) cot q");
    m.def("momentum_matrix", [](double nu, int nmax) { return momentum_matrix(nu, nmax); }, py::arg("nu"),
          py::arg("nmax"));

    py::class_<CoherentState>(m, "CoherentState")
        .def(py::init([](double q, double p, double nu) { return CoherentState({q, p, nu}); }), py::arg("q"),
             py::arg("p"), py::arg("nu") = 0.0)
        .def_property_readonly("q", [](const CoherentState& c) { return c.label().q; })
        .def_property_readonly("p", [](const CoherentState& c) { return c.label().p; })
        .def_property_readonly("nu", [](const CoherentState& c) { return c.label().nu; })
        .def_property_readonly("normalization", &CoherentState::normalization)
        .def_property_readonly("eigenvalue", [](const CoherentState& c) { return c.label().eigenvalue(); })
        .def(
            "__call__",
            [](const CoherentState& c, const py::array_t<double>& x) {
                return py::vectorize([&c](double t) { return c.value(t); })(x);
            },
            py::arg("x"))
        .def("__repr__", [](const CoherentState& c) {
            return "CoherentState(q=" + std::to_string(c.label().q) + ", p=" + std::to_string(c.label().p) +
                   ", nu=" + std::to_string(c.label().nu) + ")";
        });

    m.def("cs_normalization", &cs_normalization, py::arg("nu"), py::arg("q"));
    m.def(
        "cs_coefficients",
        [](double q, double p, double nu, int nmax, std::optional<double> basis_nu) {
            return to_array(cs_coefficients(CoherentState({q, p, nu}), nmax, basis_nu.value_or(nu)).coeffs);
        },
        py::arg("q"), py::arg("p"), py::arg("nu") = 0.0, py::arg("nmax") = default_nmax,
        py::arg("basis_nu") = py::none(), "<phi_n|eta_{q,p}> for n <= nmax");
    m.def(
        "cs_moments",
        [](double q, double p, double nu) {
            const auto mo = cs_moments(nu, q, p);
            py::dict d;
            d["norm"] = mo.norm;
            d["mean_p"] = mo.mean_p;
            d["delta_p"] = mo.delta_p;
            d["mean_w"] = mo.mean_w;
            d["delta_w"] = mo.delta_w;
            d["mean_dw"] = mo.mean_dw;
            d["saturation_defect"] = mo.saturation_defect;
            return d;
        },
        py::arg("q"), py::arg("p"), py::arg("nu") = 0.0);

    m.def(
        "quantize",
        [](const std::string& symbol, double nu, int nmax) { return quantize(parse_symbol(symbol, nu), nu, nmax).matrix; },
        py::arg("symbol"), py::arg("nu") = 0.0, py::arg("nmax") = 16,
        "Eigenbasis matrix of a quantized symbol: a name such as 'momentum_squared' or one term 'u(q):degree'");
    m.def(
        "lower_symbol",
        [](const std::string& symbol, double q, double p, double nu) {
            const auto ls = lower_symbol(quantize(parse_symbol(symbol, nu), nu, 0), q, p);
            return py::make_tuple(ls.value, ls.error_bar);
        },
        py::arg("symbol"), py::arg("q"), py::arg("p"), py::arg("nu") = 0.0,
        "<eta_qp|F|eta_qp> and its error bar");

    m.def(
        "evolve",
        [](const cvec& coeffs, double t, double nu) { return to_array(evolve(from_array(coeffs, nu), t, nu).coeffs); },
        py::arg("coeffs"), py::arg("t"), py::arg("nu") = 0.0);
    m.def(
        "autocorrelation",
        [](const cvec& coeffs, double t, double nu) { return autocorrelation(from_array(coeffs, nu), t, nu); },
        py::arg("coeffs"), py::arg("t"), py::arg("nu") = 0.0);
    m.def("closed_form_mean_energy", &closed_form_mean_energy, py::arg("nu_cs"), py::arg("q"), py::arg("p"),
          py::arg("nu_evolve") = 0.0);
    m.def(
        "mean_energy",
        [](double q, double p, double nu_cs, double nu_evolve) {
            const auto me = mean_energy(nu_cs, q, p, nu_evolve);
            py::dict d;
            d["coefficient_sum"] = me.coefficient_sum;
            d["closed_form"] = me.closed_form;
            d["relative_difference"] = me.relative_difference;
            d["nmax"] = me.nmax;
            d["truncation_dominated"] = me.truncation_dominated;
            return d;
        },
        py::arg("q"), py::arg("p"), py::arg("nu_cs") = 0.0, py::arg("nu_evolve") = 0.0);

    py::class_<PhaseSpaceDistribution>(m, "Distribution")
        .def_property_readonly("q", [](const PhaseSpaceDistribution& d) { return to_array(d.q); })
        .def_property_readonly("p", [](const PhaseSpaceDistribution& d) { return to_array(d.p); })
        .def_property_readonly("values",
                               [](const PhaseSpaceDistribution& d) {
                                   return to_array(d.values, {static_cast<py::ssize_t>(d.q.size()), static_cast<py::ssize_t>(d.p.size())});
                               })
        .def("mass", &PhaseSpaceDistribution::mass)
        .def("argmax", &PhaseSpaceDistribution::argmax);

    m.def(
        "husimi",
        [](double q, double p, double t, double nu_cs, double nu_evolve, int nmax, int q_count, int p_count,
           double p_max) {
            const auto s = evolve(evolved_state(q, p, nu_cs, nu_evolve, nmax), t, nu_evolve);
            py::gil_scoped_release release;
            return husimi(s, nu_cs, make_grid(q_count, p_count, p_max));
        },
        py::arg("q"), py::arg("p"), py::arg("t") = 0.0, py::arg("nu_cs") = 0.0, py::arg("nu_evolve") = 0.0,
        py::arg("nmax") = default_nmax, py::arg("q_count") = 256, py::arg("p_count") = 256, py::arg("p_max") = 12.0,
        "Husimi density of the evolved coherent state at time t");
    m.def(
        "time_averaged_husimi",
        [](double q, double p, double nu_cs, double nu_evolve, int nmax, int q_count, int p_count, double p_max) {
            const auto s = evolved_state(q, p, nu_cs, nu_evolve, nmax);
            py::gil_scoped_release release;
            return time_averaged_husimi(s, nu_cs, make_grid(q_count, p_count, p_max));
        },
        py::arg("q"), py::arg("p"), py::arg("nu_cs") = 0.0, py::arg("nu_evolve") = 0.0, py::arg("nmax") = default_nmax,
        py::arg("q_count") = 256, py::arg("p_count") = 256, py::arg("p_max") = 12.0);

    m.def("classical_energy", &classical_energy, py::arg("nu"), py::arg("q"), py::arg("p"));
    m.def(
        "classical_trajectory",
        [](double E, double nu, int n_points) {
            const auto pts = classical_trajectory(E, nu, n_points);
            py::array_t<double> q(pts.size()), p(pts.size());
            auto qr = q.mutable_unchecked<1>();
            auto pr = p.mutable_unchecked<1>();
            for (std::size_t j = 0; j < pts.size(); ++j) {
                qr(j) = pts[j].q;
                pr(j) = pts[j].p;
            }
            return py::make_tuple(q, p);
        },
        py::arg("energy"), py::arg("nu") = 0.0, py::arg("n_points") = 200);
    m.def(
        "trajectory_band_ratio",
        [](const PhaseSpaceDistribution& rho, double E, double nu, double half_width) {
            return trajectory_band_ratio(rho, E, nu, half_width).ratio;
        },
        py::arg("rho"), py::arg("energy"), py::arg("nu") = 0.0, py::arg("half_width") = 0.15);

    py::class_<CheckCase>(m, "CheckCase")
        .def_readonly("name", &CheckCase::name)
        .def_readonly("key", &CheckCase::key)
        .def_readonly("measured", &CheckCase::measured)
        .def_readonly("bound", &CheckCase::bound)
        .def_readonly("passed", &CheckCase::pass)
        .def_property_readonly("informational",
                               [](const CheckCase& c) { return c.kind == CheckCase::Kind::Report; });
    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("suite", &CheckReport::suite)
        .def_readonly("cases", &CheckReport::cases)
        .def_readonly("notes", &CheckReport::notes)
        .def_readonly("wall_time", &CheckReport::wall_time)
        .def_property_readonly("passed", &CheckReport::pass)
        .def("__str__", &format_report);

    m.def("suite_names", &suite_names);
    m.def(
        "run_suite",
        [](const std::string& name, std::optional<double> tol, std::uint64_t seed) {
            CheckOptions opts;
            opts.tol = tol;
            opts.seed = seed;
            py::gil_scoped_release release;
            return run_suite(name, opts);
        },
        py::arg("name"), py::arg("tol") = py::none(), py::arg("seed") = 12345);
}
