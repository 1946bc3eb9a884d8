#include "harmap/analysis.hpp"
#include "harmap/constructions.hpp"
#include "harmap/io.hpp"
#include "harmap/optimizer.hpp"
#include "harmap/parallel.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace harmap;

namespace {

py::object to_py(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

json from_py(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

template <class T>
py::object report(const T& value) {
  json j = value;
  return to_py(j);
}

py::array_t<double> vec3_array(const std::vector<Vec3>& v) {
  py::array_t<double> out({static_cast<py::ssize_t>(v.size()), py::ssize_t{3}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int k = 0; k < 3; ++k) a(i, k) = v[i][k];
  return out;
}

SphereField field_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
                       const Mesh& mesh) {
  if (arr.ndim() != 2 || arr.shape(1) != 3)
    throw ValidationError("field must have shape (n, 3)");
  if (static_cast<std::size_t>(arr.shape(0)) != mesh.size())
    throw ValidationError("field has " + std::to_string(arr.shape(0)) + " rows, mesh has " +
                          std::to_string(mesh.size()) + " nodes");
  auto a = arr.unchecked<2>();
  SphereField u;
  u.values.resize(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) u.values[i] = Vec3(a(i, 0), a(i, 1), a(i, 2));
  return u;
}

Vec3 vec3(const std::vector<double>& v) {
  if (v.size() != 3) throw ValidationError("expected 3 components");
  return Vec3(v[0], v[1], v[2]);
}

// python-side domain handle
struct PyDomain {
  Domain d;
  const Mesh& mesh() const { return d.mesh(); }
};

PyDomain make_domain(const std::string& kind, double h, const py::dict& params) {
  DomainSpec spec;
  spec.kind = kind;
  spec.h = h;
  spec.params = from_py(params);
  return PyDomain{build_domain(spec)};
}

EnergyParams energy_params(double K, double K13) {
  EnergyParams p{K, K13};
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_harmap, m) {
  m.doc() = "Director-field energies, constructions and checks";
  m.attr("__version__") = HARMAP_VERSION;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("set_max_threads", &parallel::set_max_threads, py::arg("n"));

  py::class_<PyDomain>(m, "Domain")
      .def(py::init(&make_domain), py::arg("kind") = "flat", py::arg("h") = 0.125,
           py::arg("params") = py::dict())
      .def_property_readonly("size", [](const PyDomain& d) { return d.mesh().size(); })
      .def_property_readonly("h", [](const PyDomain& d) { return d.d.spec.h; })
      .def_property_readonly("kind", [](const PyDomain& d) { return d.d.spec.kind; })
      .def_property_readonly("points", [](const PyDomain& d) { return vec3_array(d.mesh().points); })
      .def_property_readonly("tags",
                             [](const PyDomain& d) {
                               py::array_t<int> out(static_cast<py::ssize_t>(d.mesh().size()));
                               auto a = out.mutable_unchecked<1>();
                               for (std::size_t i = 0; i < d.mesh().size(); ++i)
                                 a(i) = static_cast<int>(d.mesh().tags[i]);
                               return out;
                             })
      .def("count", [](const PyDomain& d, const std::string& tag) {
        if (tag == "interior") return d.mesh().count(NodeTag::Interior);
        if (tag == "graph") return d.mesh().count(NodeTag::Graph);
        if (tag == "fixed") return d.mesh().count(NodeTag::Fixed);
        throw ValidationError("unknown tag " + tag);
      });

  m.def(
      "energy",
      [](const PyDomain& d, const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
         double K, double K13, const std::string& kind) {
        const auto f = field_from(u, d.mesh());
        const auto p = energy_params(K, K13);
        if (kind == "E") return report(energy_E(f, d.mesh(), p));
        if (kind == "G") return report(energy_G(f, d.mesh(), p));
        throw ValidationError("energy kind must be E or G");
      },
      py::arg("domain"), py::arg("u"), py::arg("K") = 1.0, py::arg("K13") = 0.0,
      py::arg("kind") = "G");

  m.def(
      "gradient",
      [](const PyDomain& d, const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
         double K, double K13) {
        return vec3_array(grad_G(field_from(u, d.mesh()), d.mesh(), energy_params(K, K13)));
      },
      py::arg("domain"), py::arg("u"), py::arg("K") = 1.0, py::arg("K13") = 0.0);

  m.def(
      "minimize",
      [](const PyDomain& d, const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
         double K, double K13, const std::string& mode, int max_iters, double grad_tol,
         double energy_tol) {
        MinimizeOptions o;
        o.boundary_mode = boundary_mode_from_string(mode);
        o.max_iters = max_iters;
        o.grad_tol = grad_tol;
        o.energy_tol = energy_tol;
        MinimizeResult r;
        {
          py::gil_scoped_release nogil;
          r = minimize_G(d.mesh(), field_from(u, d.mesh()), energy_params(K, K13), o);
        }
        json rows = json::array();
        for (const auto& row : r.trace.rows) rows.push_back(row);
        py::dict trace;
        trace["rows"] = to_py(rows);
        trace["converged"] = r.trace.converged;
        trace["stop_reason"] = r.trace.stop_reason;
        return py::make_tuple(vec3_array(r.field.values), trace);
      },
      py::arg("domain"), py::arg("u"), py::arg("K") = 1.0, py::arg("K13") = 0.0,
      py::arg("mode") = "tangential", py::arg("max_iters") = 5000, py::arg("grad_tol") = 1e-6,
      py::arg("energy_tol") = 1e-12);

  m.def(
      "extend_trace",
      [](const PyDomain& d, const py::function& f, const std::string& mode) {
        PointMap map = [&](const Vec3& x) {
          auto r = f(x[0], x[1], x[2]).cast<std::vector<double>>();
          return vec3(r);
        };
        return vec3_array(extend_trace(d.mesh(), map, boundary_mode_from_string(mode)).values);
      },
      py::arg("domain"), py::arg("trace"), py::arg("mode") = "tangential");

  m.def(
      "el_residual",
      [](const PyDomain& d, const py::array_t<double, py::array::c_style | py::array::forcecast>& u) {
        return report(el_residual(field_from(u, d.mesh()), d.mesh()));
      },
      py::arg("domain"), py::arg("u"));

  m.def(
      "gradient_check",
      [](const PyDomain& d, double K, double K13, int fields, int nodes, std::uint64_t seed) {
        return report(gradient_check(d.mesh(), energy_params(K, K13), fields, nodes, 1e-4, seed));
      },
      py::arg("domain"), py::arg("K") = 1.0, py::arg("K13") = 0.0, py::arg("fields") = 4,
      py::arg("nodes") = 50, py::arg("seed") = 7);

  m.def(
      "decay_scan",
      [](const PyDomain& d, const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
         const std::vector<std::vector<double>>& centers, double R, int levels) {
        std::vector<Vec3> c;
        for (const auto& v : centers) c.push_back(vec3(v));
        json out = json::array();
        for (const auto& p : decay_scan(field_from(u, d.mesh()), d.mesh(), c, R, levels))
          out.push_back(p);
        return to_py(out);
      },
      py::arg("domain"), py::arg("u"), py::arg("centers"), py::arg("R") = 0.5,
      py::arg("levels") = 4);

  m.def(
      "blowup",
      [](double rho0, double eps, double K, double K13, double l, double d, int lateral_cells) {
        BlowupParams p;
        p.rho0 = rho0;
        p.eps = eps;
        p.l = l;
        p.d = d;
        p.energy = energy_params(K, K13);
        return report(blowup_energy(p, lateral_cells));
      },
      py::arg("rho0"), py::arg("eps"), py::arg("K") = 1.0, py::arg("K13") = 1.0,
      py::arg("l") = 1.0, py::arg("d") = 1.0, py::arg("lateral_cells") = 4);

  m.def(
      "closed_form_blowup_energy",
      [](double rho0, double eps, double K, double K13, double l, double d) {
        BlowupParams p;
        p.rho0 = rho0;
        p.eps = eps;
        p.l = l;
        p.d = d;
        p.energy = energy_params(K, K13);
        return closed_form_blowup_energy(p);
      },
      py::arg("rho0"), py::arg("eps"), py::arg("K") = 1.0, py::arg("K13") = 1.0,
      py::arg("l") = 1.0, py::arg("d") = 1.0);

  m.def("w1p_vortex_norm", &w1p_vortex_norm, py::arg("p"), py::arg("h"));
  m.def(
      "w1p_vortex_richardson",
      [](double p, double h) { return report(w1p_vortex_richardson(p, h)); }, py::arg("p"),
      py::arg("h"));
  m.def(
      "vortex_index",
      [](const std::vector<std::vector<double>>& samples) {
        std::vector<Vec2> s;
        for (const auto& v : samples) {
          if (v.size() != 2) throw ValidationError("samples must be planar");
          s.emplace_back(v[0], v[1]);
        }
        return vortex_index(s);
      },
      py::arg("samples"));

  m.def(
      "genus_boundary_field",
      [](int genus, int resolution) {
        const auto data = genus_boundary_field(genus, resolution);
        py::dict out = report(data).cast<py::dict>();
        std::vector<Vec3> pos, nrm, val;
        for (const auto& n : data.nodes) {
          pos.push_back(n.position);
          nrm.push_back(n.normal);
          val.push_back(n.value);
        }
        out["positions"] = vec3_array(pos);
        out["normals"] = vec3_array(nrm);
        out["values"] = vec3_array(val);
        return out;
      },
      py::arg("genus"), py::arg("resolution") = 48);

  m.def(
      "rotation_from_gradient",
      [](double g1, double g2) {
        const auto s = rotation_from_gradient(Vec2(g1, g2));
        py::array_t<double> q({py::ssize_t{3}, py::ssize_t{3}});
        auto a = q.mutable_unchecked<2>();
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) a(i, j) = s.Q(i, j);
        return q;
      },
      py::arg("g1"), py::arg("g2"));

  m.def(
      "tangent_line_projection",
      [](const std::vector<double>& y, const std::vector<double>& z, const std::vector<double>& nu) {
        ProjectionQuery q;
        q.y = vec3(y);
        q.z = vec3(z);
        q.nu = vec3(nu);
        const Vec3 r = tangent_line_projection(q);
        return std::vector<double>{r[0], r[1], r[2]};
      },
      py::arg("y"), py::arg("z"), py::arg("nu"));

  m.def(
      "verify_rotation_bounds",
      [](std::size_t graphs, std::size_t samples, std::uint64_t seed) {
        json out = json::array();
        for (const auto& r : verify_rotation_bounds(random_graphs(graphs, 1.0, seed), samples, seed))
          out.push_back(r);
        return to_py(out);
      },
      py::arg("graphs") = 100, py::arg("samples") = 1000, py::arg("seed") = 11);

  m.def(
      "verify_projection_bounds",
      [](std::size_t derivative_samples, std::size_t pair_samples, std::uint64_t seed) {
        ProjectionSuiteOptions o;
        o.derivative_samples = derivative_samples;
        o.pair_samples = pair_samples;
        o.seed = seed;
        json out = json::array();
        for (const auto& r : verify_projection_bounds(o)) out.push_back(r);
        return to_py(out);
      },
      py::arg("derivative_samples") = 1000, py::arg("pair_samples") = 10000,
      py::arg("seed") = 13);

  m.def(
      "poincare_experiment",
      [](std::size_t graphs, std::size_t fields, double h, std::uint64_t seed) {
        return report(poincare_experiment(graphs, fields, h, seed));
      },
      py::arg("graphs") = 20, py::arg("fields") = 5, py::arg("h") = 0.0625,
      py::arg("seed") = 17);
}
