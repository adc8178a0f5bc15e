#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcf/barriers.hpp"
#include "mcf/cone_heat.hpp"
#include "mcf/errors.hpp"
#include "mcf/flow.hpp"
#include "mcf/geometry.hpp"
#include "mcf/minimal_surface.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/params.hpp"
#include "mcf/verify/acceptance.hpp"
#include "mcf/version.hpp"

namespace py = pybind11;
using namespace mcf;

namespace {

py::dict trajectory_dict(const Trajectory& tr) {
  py::list snaps;
  for (const auto& s : tr.snapshots) snaps.append(py::dict(py::arg("t") = s.t, py::arg("r") = s.grid, py::arg("Q") = s.Q));
  const auto& d = tr.diag;
  return py::dict(py::arg("snapshots") = snaps, py::arg("t") = d.times, py::arg("Hmax") = d.Hmax,
                  py::arg("Amax") = d.Amax, py::arg("Qmin") = d.Qmin, py::arg("T_est") = d.T_est,
                  py::arg("stop_reason") = tr.stop_reason, py::arg("accepted") = tr.accepted,
                  py::arg("rejected") = tr.rejected);
}

Trajectory run_flow(const std::string& kind, int n, double T, double rmax, int nodes, double horizon,
                    double amax_cap) {
  ProfileState s;
  if (kind == "cylinder") s = cylinder_state(n, T, uniform_grid(0.0, rmax, nodes));
  else if (kind == "sphere") s = sphere_state(n, T, uniform_grid(0.0, rmax, nodes));
  else fail(ErrorCode::Domain, "kind must be 'cylinder' or 'sphere'");
  StopRule stop;
  stop.Amax_cap = amax_cap;
  return evolve(s, n, horizon, stop);
}

}  // namespace

PYBIND11_MODULE(_mcf, m) {
  m.doc() = "Radial mean curvature flow toolkit";
  m.attr("__version__") = kVersion;

  static py::handle mcf_error = py::exception<Error>(m, "McfError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(mcf_error.ptr(), py::make_tuple(e.what(), std::string(to_string(e.code()))).ptr());
    }
  });

  py::class_<Params>(m, "Params")
      .def_readonly("n", &Params::n)
      .def_readonly("k", &Params::k)
      .def_readonly("alpha", &Params::alpha)
      .def_readonly("alpha_minus", &Params::alpha_minus)
      .def_readonly("lambda_k", &Params::lambda_k)
      .def_readonly("sigma_k", &Params::sigma_k)
      .def_readonly("mu", &Params::mu)
      .def_readonly("T", &Params::T)
      .def("__repr__", &describe);

  m.def("derive_constants", &derive_constants, py::arg("n"), py::arg("k"), py::arg("T") = 1.0);
  m.def("admissible_for_some_a", &admissible_for_some_a);
  m.def("exponent_condition_sup", &exponent_condition_sup);

  py::class_<CurvatureData>(m, "CurvatureData")
      .def_readonly("H", &CurvatureData::H)
      .def_readonly("A2", &CurvatureData::A2)
      .def_property_readonly("kappa", [](const CurvatureData& c) {
        return py::make_tuple(c.kappa_r(), c.kappa_omega(), c.kappa_theta());
      });
  m.def(
      "curvature", [](int n, double r, double q, double q1, double q2) { return curvature(n, {r, q, q1, q2}); },
      py::arg("n"), py::arg("r"), py::arg("Q"), py::arg("Q1"), py::arg("Q2"));

  py::class_<MinimalProfile>(m, "MinimalProfile")
      .def_readonly("n", &MinimalProfile::n)
      .def_readonly("b", &MinimalProfile::b)
      .def_readonly("r", &MinimalProfile::grid)
      .def_readonly("Q", &MinimalProfile::q)
      .def_readonly("Q1", &MinimalProfile::q1)
      .def_readonly("Q2", &MinimalProfile::q2)
      .def_readonly("C_b", &MinimalProfile::C_b)
      .def_readonly("alpha_fit", &MinimalProfile::alpha_fit)
      .def("u0", &u0_profile);
  m.def(
      "integrate_profile", [](int n, double b, double r_max, double tol) { return integrate_profile(n, b, r_max, tol); },
      py::arg("n"), py::arg("b") = 1.0, py::arg("r_max") = 100.0, py::arg("tol") = 1e-10);

  m.def("bessel_I", &bessel_I, py::arg("mu"), py::arg("z"), py::arg("scaled") = false);
  m.def("heat_kernel", &heat_kernel, py::arg("mu"), py::arg("t"), py::arg("r"), py::arg("rho"));
  m.def(
      "propagate",
      [](double mu, double t, const std::function<double(double)>& v0, double tail, const std::vector<double>& r) {
        py::gil_scoped_release release;
        return propagate(mu, t,
                         [&](double x) {
                           py::gil_scoped_acquire acquire;
                           return v0(x);
                         },
                         tail, r);
      },
      py::arg("mu"), py::arg("t"), py::arg("v0"), py::arg("tail_exponent"), py::arg("r"));
  m.def(
      "decay_experiment",
      [](const Params& p, double delta, const std::vector<double>& times) {
        const auto ex = decay_experiment(p, delta, times);
        return py::dict(py::arg("t") = ex.times, py::arg("sup_ratio") = ex.sup_ratio,
                        py::arg("slope") = ex.fit.exponent, py::arg("expected") = ex.expected);
      },
      py::arg("params"), py::arg("delta"), py::arg("times"));

  m.def(
      "evolve",
      [](const std::string& kind, int n, double T, double rmax, int nodes, double horizon, double amax_cap) {
        return trajectory_dict(run_flow(kind, n, T, rmax, nodes, horizon, amax_cap));
      },
      py::arg("kind"), py::arg("n"), py::arg("T") = 1.0, py::arg("rmax") = 5.0, py::arg("nodes") = 200,
      py::arg("horizon") = 0.9, py::arg("Amax_cap") = std::numeric_limits<double>::infinity());

  py::class_<Supersolution>(m, "Supersolution")
      .def_readonly("C0", &Supersolution::C0)
      .def_readonly("C1", &Supersolution::C1)
      .def("__call__", &Supersolution::operator(), py::arg("r"), py::arg("t"))
      .def("positivity_radius", &Supersolution::positivity_radius);
  m.def("supersolution", &supersolution, py::arg("params"), py::arg("C0") = 1.0);
  m.def("supersolution_residual_at", &supersolution_residual_at, py::arg("s"), py::arg("r"), py::arg("t"),
        py::arg("a"));

  m.def(
      "run_criterion",
      [](int id, bool quick) {
        AcceptanceOptions opt;
        opt.quick = quick;
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id, opt);
        }
        return py::dict(py::arg("id") = r.id, py::arg("name") = r.name, py::arg("pass") = r.pass,
                        py::arg("skipped") = r.skipped, py::arg("metrics") = r.metrics,
                        py::arg("failures") = r.failures);
      },
      py::arg("id"), py::arg("quick") = false);
}
