#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>

#include "schroflow/error.hpp"
#include "schroflow/field.hpp"
#include "schroflow/flow.hpp"
#include "schroflow/init.hpp"
#include "schroflow/norms.hpp"

namespace py = pybind11;
using namespace schroflow;

namespace {

using Array3 = std::array<double, 3>;

Vec3 to_vec(const Array3& a) { return {a[0], a[1], a[2]}; }
Array3 to_array(const Vec3& v) { return {v.x, v.y, v.z}; }

py::array_t<double> to_numpy(std::span<const Vec3> values) {
  py::array_t<double> out({py::ssize_t(values.size()), py::ssize_t(3)});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < values.size(); ++i) {
    view(i, 0) = values[i].x;
    view(i, 1) = values[i].y;
    view(i, 2) = values[i].z;
  }
  return out;
}

std::vector<Vec3> from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw py::value_error("values must have shape (N, 3)");
  auto view = a.unchecked<2>();
  std::vector<Vec3> out(std::size_t(a.shape(0)));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {view(i, 0), view(i, 1), view(i, 2)};
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Schrödinger flows into S^2 and H(-1) on periodic grids";

  static py::exception<Error> error(m, "SchroflowError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<TargetManifold>(m, "TargetManifold")
      .def_static("sphere", &TargetManifold::sphere)
      .def_static("hyperbolic", &TargetManifold::hyperbolic)
      .def_static("from_name", &TargetManifold::from_name)
      .def_property_readonly("name", [](const TargetManifold& t) { return std::string(t.name()); })
      .def_property_readonly("signature", &TargetManifold::signature)
      .def_property_readonly("constraint_level", &TargetManifold::constraint_level)
      .def("inner", [](const TargetManifold& t, const Array3& a, const Array3& b) {
        return t.inner(to_vec(a), to_vec(b));
      })
      .def("project_point", [](const TargetManifold& t, const Array3& x) {
        return to_array(t.project_point(to_vec(x)));
      })
      .def("project_tangent", [](const TargetManifold& t, const Array3& p, const Array3& v) {
        return to_array(t.project_tangent(to_vec(p), to_vec(v)));
      })
      .def("complex_structure", [](const TargetManifold& t, const Array3& p, const Array3& v) {
        return to_array(t.complex_structure(to_vec(p), to_vec(v)));
      })
      .def("tension_correction", [](const TargetManifold& t, const Array3& p, double g) {
        return to_array(t.tension_correction(to_vec(p), g));
      })
      .def("distance", [](const TargetManifold& t, const Array3& p, const Array3& q) {
        return t.distance(to_vec(p), to_vec(q));
      });

  py::class_<DomainGrid>(m, "DomainGrid")
      .def_static("circle", &DomainGrid::circle, py::arg("n"),
                  py::arg("length") = 2.0 * std::numbers::pi)
      .def_static("torus", &DomainGrid::torus, py::arg("n0"), py::arg("n1"),
                  py::arg("length0") = 2.0 * std::numbers::pi,
                  py::arg("length1") = 2.0 * std::numbers::pi)
      .def_property_readonly("dim", &DomainGrid::dim)
      .def_property_readonly("node_count", &DomainGrid::node_count)
      .def_property_readonly("volume", &DomainGrid::volume)
      .def("size", &DomainGrid::size)
      .def("spacing", &DomainGrid::spacing)
      .def("coordinates", [](const DomainGrid& g, int axis) {
        std::vector<double> x(g.node_count());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = g.coordinate(i, axis);
        return py::array_t<double>(py::ssize_t(x.size()), x.data());
      });

  py::class_<Field>(m, "Field")
      .def(py::init([](const DomainGrid& g, const TargetManifold& t,
                       const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
        return Field(g, t, from_numpy(v));
      }))
      .def_property_readonly("grid", &Field::grid)
      .def_property_readonly("target", &Field::target)
      .def_property_readonly("values", [](const Field& u) { return to_numpy(u.values()); })
      .def("__len__", &Field::size);

  m.def("make_initial",
        [](const DomainGrid& g, const TargetManifold& t, const std::string& spec,
           std::uint64_t seed) { return make_initial(g, t, InitSpec::parse(spec), seed); },
        py::arg("grid"), py::arg("target"), py::arg("spec"), py::arg("seed") = 42);
  m.def("tension", [](const Field& u) { return to_numpy(tension(u)); });
  m.def("energy", &energy);
  m.def("schrodinger_velocity", [](const Field& u, double eps) {
    return to_numpy(schrodinger_velocity(u, eps));
  }, py::arg("u"), py::arg("epsilon") = 0.0);
  m.def("constraint_drift", &constraint_drift);
  m.def("h_norm", &norms::h_norm);
  m.def("w_norm", &norms::w_norm);

  py::class_<norms::NormComparison>(m, "NormComparison")
      .def_readonly("k", &norms::NormComparison::k)
      .def_readonly("w_lhs", &norms::NormComparison::w_lhs)
      .def_readonly("w_rhs_sum", &norms::NormComparison::w_rhs_sum)
      .def_readonly("h_lhs", &norms::NormComparison::h_lhs)
      .def_readonly("h_rhs_sum", &norms::NormComparison::h_rhs_sum)
      .def_readonly("c_w", &norms::NormComparison::c_w)
      .def_readonly("c_h", &norms::NormComparison::c_h)
      .def_readonly("fitted_c", &norms::NormComparison::fitted_c);
  m.def("compare_section_norms", &norms::compare_section_norms);

  py::class_<norms::InterpolationParams>(m, "InterpolationParams")
      .def(py::init([](int j, int n, double p, double q, double r, double a) {
             return norms::InterpolationParams{j, n, p, q, r, a};
           }),
           py::arg("j"), py::arg("n"), py::arg("p"), py::arg("q"), py::arg("r"), py::arg("a"))
      .def_readwrite("j", &norms::InterpolationParams::j)
      .def_readwrite("n", &norms::InterpolationParams::n)
      .def_readwrite("p", &norms::InterpolationParams::p)
      .def_readwrite("q", &norms::InterpolationParams::q)
      .def_readwrite("r", &norms::InterpolationParams::r)
      .def_readwrite("a", &norms::InterpolationParams::a);
  m.def("check_interpolation_inequality", [](const Field& u, const norms::InterpolationParams& P) {
    const auto c = norms::check_interpolation_inequality(u, P);
    return py::dict(py::arg("lhs") = c.lhs, py::arg("rhs") = c.rhs, py::arg("ratio") = c.ratio);
  });

  py::enum_<flow::Scheme>(m, "Scheme")
      .value("RK4_PROJECTED", flow::Scheme::Rk4Projected)
      .value("IMPLICIT_MIDPOINT", flow::Scheme::ImplicitMidpoint);
  py::enum_<flow::ExitStatus>(m, "ExitStatus")
      .value("COMPLETED", flow::ExitStatus::Completed)
      .value("BLOWUP", flow::ExitStatus::BlowUp)
      .value("SOLVER_FAILURE", flow::ExitStatus::SolverFailure);

  py::class_<flow::FlowConfig>(m, "FlowConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &flow::FlowConfig::epsilon)
      .def_readwrite("dt", &flow::FlowConfig::dt)
      .def_readwrite("t_end", &flow::FlowConfig::t_end)
      .def_readwrite("scheme", &flow::FlowConfig::scheme)
      .def_readwrite("monitor_every", &flow::FlowConfig::monitor_every)
      .def_readwrite("k_monitor", &flow::FlowConfig::k_monitor)
      .def_readwrite("blowup_threshold", &flow::FlowConfig::blowup_threshold)
      .def_readwrite("midpoint_tol", &flow::FlowConfig::midpoint_tol)
      .def_readwrite("midpoint_max_iter", &flow::FlowConfig::midpoint_max_iter)
      .def_readwrite("cfl_factor", &flow::FlowConfig::cfl_factor)
      .def_readwrite("unsafe_dt", &flow::FlowConfig::unsafe_dt);

  py::class_<norms::NormReport>(m, "NormReport")
      .def_readonly("time", &norms::NormReport::time)
      .def_readonly("energy", &norms::NormReport::energy)
      .def_readonly("sup_grad", &norms::NormReport::sup_grad)
      .def_readonly("w_norms", &norms::NormReport::w_norms)
      .def_readonly("h_norms", &norms::NormReport::h_norms)
      .def_readonly("constraint_drift", &norms::NormReport::constraint_drift);

  py::class_<flow::Trajectory>(m, "Trajectory")
      .def_readonly("reports", &flow::Trajectory::reports)
      .def_readonly("final_state", &flow::Trajectory::final_state)
      .def_readonly("status", &flow::Trajectory::status)
      .def_readonly("message", &flow::Trajectory::message)
      .def_readonly("steps_taken", &flow::Trajectory::steps_taken)
      .def_readonly("final_time", &flow::Trajectory::final_time);

  m.def("step", py::overload_cast<const Field&, const flow::FlowConfig&>(&flow::step));
  m.def("run", [](const Field& u0, const flow::FlowConfig& cfg) {
    py::gil_scoped_release release;
    return flow::run(u0, cfg);
  });
}
