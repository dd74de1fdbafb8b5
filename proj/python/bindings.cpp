#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "commands.hpp"
#include "conecalc/conecalc.hpp"

namespace py = pybind11;
using namespace conecalc;

namespace {

using ComplexArray = py::array_t<complex, py::array::c_style | py::array::forcecast>;

std::vector<complex> to_vector(const ComplexArray& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

ConeOperator laplacian(const CrossSectionSpectrum& s, bool negate) {
  auto op = build_laplace_beltrami(ConeMetric(s));
  return negate ? op.negated() : op;
}

py::object json_to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json python_to_json(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mellin transforms, cone operators and singular asymptotics";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto numeric = py::register_exception<NumericError>(m, "NumericError", error.ptr());
  py::register_exception<ResolutionError>(m, "ResolutionError", numeric.ptr());
  py::register_exception<AliasingError>(m, "AliasingError", numeric.ptr());
  py::register_exception<ContourError>(m, "ContourError", numeric.ptr());
  py::register_exception<NearPoleError>(m, "NearPoleError", numeric.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  // ---- Mellin transforms
  py::class_<LogGrid>(m, "LogGrid")
      .def(py::init<double, double, std::size_t>(), py::arg("s_min"), py::arg("s_max"), py::arg("n"))
      .def_static("standard", &LogGrid::standard)
      .def_property_readonly("s_min", &LogGrid::s_min)
      .def_property_readonly("s_max", &LogGrid::s_max)
      .def_property_readonly("spacing", &LogGrid::spacing)
      .def("__len__", &LogGrid::size)
      .def("s_values", [](const LogGrid& g) { return to_array(g.s_values()); })
      .def("t_values", [](const LogGrid& g) { return to_array(g.t_values()); })
      .def("__repr__", [](const LogGrid& g) {
        return "LogGrid(" + format_double(g.s_min()) + ", " + format_double(g.s_max()) + ", " + std::to_string(g.size()) + ")";
      });

  py::class_<MellinFunction>(m, "MellinFunction")
      .def(py::init([](double beta, const std::vector<double>& tau, const ComplexArray& values) {
             return MellinFunction(WeightLine{beta}, tau, to_vector(values));
           }),
           py::arg("beta"), py::arg("tau"), py::arg("values"))
      .def_property_readonly("beta", [](const MellinFunction& F) { return F.line.beta; })
      .def_property_readonly("tau", [](const MellinFunction& F) { return to_array(F.tau); })
      .def_property_readonly("values", [](const MellinFunction& F) { return to_array(F.values); })
      .def("to_json", [](const MellinFunction& F) { return to_json(F).dump(); });

  m.def("mellin_forward",
        [](const LogGrid& grid, const ComplexArray& values, double beta) {
          return mellin_forward(SampledFunction(grid, to_vector(values)), WeightLine{beta});
        },
        py::arg("grid"), py::arg("values"), py::arg("beta"),
        "Transform of samples u(e^s) on the line Re z = beta, on the dual tau grid.");
  m.def("mellin_inverse", [](const MellinFunction& F, const LogGrid& grid) { return to_array(mellin_inverse(F, grid).values); },
        py::arg("F"), py::arg("grid"));
  m.def("mellin_at", [](const LogGrid& grid, const ComplexArray& values, complex z) {
    return mellin_at(SampledFunction(grid, to_vector(values)), z);
  });
  m.def("mellin_log_power",
        [](double p, int k, complex z, double plateau, double support) {
          return mellin_log_power(p, k, CutoffSpec(plateau, support), z);
        },
        py::arg("p"), py::arg("k"), py::arg("z"), py::arg("plateau") = 0.5, py::arg("support") = 1.0,
        "Transform of t^-p ln^k(t) omega(t) at z.");

  // ---- cross-sections
  py::class_<CrossSectionSpectrum>(m, "CrossSectionSpectrum")
      .def_property_readonly("geometry", [](const CrossSectionSpectrum& s) { return to_string(s.geometry()); })
      .def_property_readonly("dimension", &CrossSectionSpectrum::dimension)
      .def_property_readonly("eigenvalues", &CrossSectionSpectrum::eigenvalues)
      .def_property_readonly("multiplicities", &CrossSectionSpectrum::multiplicities)
      .def("to_json", [](const CrossSectionSpectrum& s) { return to_json(s).dump(); });

  m.def("interval_dirichlet_spectrum", &interval_dirichlet_spectrum, py::arg("alpha"), py::arg("J"));
  m.def("circle_spectrum", &circle_spectrum, py::arg("J"));
  m.def("sphere_spectrum", &sphere_spectrum, py::arg("n"), py::arg("J"));
  m.def("sturm_liouville_eigenvalues",
        [](const std::function<double(double)>& metric, double length, std::size_t N, bool periodic) {
          return discretized_eigenvalues(sturm_liouville_discretize(
              metric, length, N, periodic ? BoundaryCondition::periodic : BoundaryCondition::dirichlet));
        },
        py::arg("metric"), py::arg("length"), py::arg("N"), py::arg("periodic") = false,
        "Eigenvalues of the discretized cross-section Laplacian, in decreasing order.");

  // ---- cone operators
  py::class_<SingularExponent>(m, "SingularExponent")
      .def_readonly("q", &SingularExponent::q)
      .def_readonly("j", &SingularExponent::j)
      .def_readonly("order", &SingularExponent::order)
      .def_property_readonly("sign", [](const SingularExponent& e) { return to_string(e.sign); });
  py::class_<SingularExponentSet>(m, "SingularExponentSet")
      .def_readonly("n", &SingularExponentSet::n)
      .def_readonly("exponents", &SingularExponentSet::exponents)
      .def("values", &SingularExponentSet::values)
      .def("contains", &SingularExponentSet::contains, py::arg("beta"), py::arg("tol") = 1e-12);

  m.def("singular_exponents", py::overload_cast<const CrossSectionSpectrum&, int>(&singular_exponents),
        py::arg("spectrum"), py::arg("J"));
  m.def("admissible_weight_intervals",
        [](const SingularExponentSet& set, double lo, double hi) {
          std::vector<py::tuple> out;
          for (const auto& iv : admissible_weight_intervals(set, lo, hi, set.n))
            out.push_back(py::make_tuple(iv.lo, iv.hi, iv.bounded_lo, iv.bounded_hi));
          return out;
        },
        py::arg("exponents"), py::arg("gamma_min"), py::arg("gamma_max"),
        "(lo, hi, bounding exponent at lo, bounding exponent at hi) per interval.");
  m.def("conormal_symbol",
        [](const CrossSectionSpectrum& s, complex z, bool negate) { return conormal_symbol(laplacian(s, negate), z); },
        py::arg("spectrum"), py::arg("z"), py::arg("negate") = false,
        "Conormal symbol of the Laplace-Beltrami operator on each distinct eigenvalue.");
  m.def("rescaled_symbol",
        [](const CrossSectionSpectrum& s, double t, double tau, double xi, bool negate) {
          return rescaled_symbol(laplacian(s, negate), t, tau, xi);
        },
        py::arg("spectrum"), py::arg("t"), py::arg("tau"), py::arg("xi"), py::arg("negate") = false);
  m.def("is_elliptic_on_line",
        [](const CrossSectionSpectrum& s, double beta, bool negate) {
          auto r = is_elliptic_on_line(laplacian(s, negate), WeightLine{beta});
          py::dict d;
          d["elliptic"] = r.elliptic;
          d["margin"] = r.margin;
          d["rescaled_margin"] = r.rescaled_margin;
          d["decided_exactly"] = r.decided_exactly;
          d["inconclusive"] = r.inconclusive;
          return d;
        },
        py::arg("spectrum"), py::arg("beta"), py::arg("negate") = false);

  // ---- cone Sobolev spaces
  py::class_<SpaceParams>(m, "SpaceParams")
      .def(py::init([](int s, double gamma, double p, int n) {
             SpaceParams P{s, gamma, p, n};
             P.validate();
             return P;
           }),
           py::arg("s"), py::arg("gamma"), py::arg("p") = 2.0, py::arg("n") = 1)
      .def_readonly("s", &SpaceParams::s)
      .def_readonly("gamma", &SpaceParams::gamma)
      .def_readonly("p", &SpaceParams::p)
      .def_readonly("n", &SpaceParams::n)
      .def("dual", &SpaceParams::dual)
      .def("critical_exponent", &SpaceParams::critical_exponent);

  m.def("membership", [](double p_exp, int k, const SpaceParams& P) { return membership(ModelFunction{p_exp, k, 0, {}}, P); },
        py::arg("p_exp"), py::arg("k"), py::arg("params"));
  m.def("gamma_p", &gamma_p, py::arg("n"), py::arg("p"));
  m.def("embeds", [](const SpaceParams& a, const SpaceParams& b) { return std::string(to_string(embeds(a, b))); });
  m.def("refinement_study",
        [](double p_exp, int k, const SpaceParams& P) {
          auto r = refinement_study(ModelFunction{p_exp, k, 0, {}}, P, sphere_spectrum(P.n, 1));
          py::dict d;
          d["norms_p"] = r.norms_p;
          d["ratio"] = r.ratio;
          d["stable"] = r.stable;
          return d;
        },
        py::arg("p_exp"), py::arg("k"), py::arg("params"));

  // ---- wedge
  py::class_<SingularSolution>(m, "SingularSolution")
      .def(py::init<double, int>(), py::arg("alpha"), py::arg("j"))
      .def_property_readonly("alpha", &SingularSolution::alpha)
      .def_property_readonly("j", &SingularSolution::j)
      .def_property_readonly("exponent", &SingularSolution::radial_exponent)
      .def("__call__", [](const SingularSolution& u, py::array_t<double> t, py::array_t<double> theta) {
        return py::vectorize([&u](double a, double b) { return u(a, b); })(t, theta);
      });
  m.def("wedge_residual",
        [](double alpha, int j, const std::vector<std::pair<double, double>>& points) {
          std::vector<PolarPoint> pts;
          for (auto [t, th] : points) pts.push_back({t, th});
          return wedge_residual(alpha, j, pts).max_rel;
        },
        py::arg("alpha"), py::arg("j"), py::arg("points"), "Largest relative residual over (t, theta) points.");
  m.def("l2_classification", &l2_classification, py::arg("alpha"), py::arg("j"));
  m.def("mellin_solve",
        [](double alpha, const LogGrid& grid, const std::vector<ComplexArray>& f, double beta) {
          WedgeProblem problem(alpha, static_cast<int>(f.size()), grid);
          std::vector<SampledFunction> data;
          for (const auto& a : f) data.emplace_back(grid, to_vector(a));
          std::vector<ComplexArray> out;
          for (const auto& v : mellin_solve(problem, data, beta)) out.push_back(to_array(v.values));
          return out;
        },
        py::arg("alpha"), py::arg("grid"), py::arg("f"), py::arg("beta"),
        "Per sine mode m, solves ((t d/dt)^2 - (m pi/alpha)^2) v_m = f_m on the line Re z = beta.");

  // ---- asymptotics
  py::class_<AsymptoticTerm>(m, "AsymptoticTerm")
      .def_readonly("p", &AsymptoticTerm::p)
      .def_readonly("j", &AsymptoticTerm::j)
      .def_readonly("coeff", &AsymptoticTerm::coeff)
      .def_readonly("pole_order", &AsymptoticTerm::pole_order)
      .def("__call__", &AsymptoticTerm::operator());
  m.def("residue_terms",
        [](double lambda, int n, const std::function<complex(complex)>& datum, double beta_from, double beta_to) {
          return residue_terms(mode_parametrix(lambda, n), datum, beta_from, beta_to);
        },
        py::arg("lambda"), py::arg("n"), py::arg("datum"), py::arg("beta_from"), py::arg("beta_to"),
        "Terms coeff t^-p ln^j t from shifting the line of the mode parametrix applied to M u = datum.");
  m.def("contour_shift_check",
        [](double lambda, int n, const LogGrid& grid, const ComplexArray& values, double beta_from, double beta_to,
           const LogGrid& check) {
          Diagnostics diag;
          auto r = contour_shift_check(mode_parametrix(lambda, n), SampledFunction(grid, to_vector(values)), beta_from,
                                       beta_to, check, &diag);
          py::dict d;
          d["error"] = r.error;
          d["terms"] = r.terms;
          d["warnings"] = diag.warnings;
          return d;
        },
        py::arg("lambda"), py::arg("n"), py::arg("grid"), py::arg("values"), py::arg("beta_from"), py::arg("beta_to"),
        py::arg("check_grid"));

  // ---- the command-line subcommands
  m.def("run_command",
        [](const std::string& command, const py::object& config) {
          auto [resolved, out] = cli::run_command(command, python_to_json(config));
          return py::make_tuple(json_to_python(make_report(command, resolved, out.result)), out.csv);
        },
        py::arg("command"), py::arg("config") = py::dict(),
        "Runs a conecalc subcommand; returns (report, csv text).");
}
