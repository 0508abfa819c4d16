#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "glvortex/commands.hpp"
#include "glvortex/coupling.hpp"
#include "glvortex/errors.hpp"
#include "glvortex/glfield.hpp"
#include "glvortex/io.hpp"
#include "glvortex/minimize.hpp"
#include "glvortex/obstacle.hpp"

namespace py = pybind11;
using namespace glvortex;

namespace {

using Points = std::vector<std::pair<double, double>>;

VortexConfig to_config(const Points& pts) {
  VortexConfig c;
  for (const auto& [x, y] : pts) c.points.emplace_back(x, y);
  return c;
}

Points from_config(const VortexConfig& c) {
  Points out;
  for (const Vec2& p : c.points) out.emplace_back(p.x(), p.y());
  return out;
}

// (ny, nx) array, NaN at nodes outside the domain.
py::array_t<double> to_array(const ScalarField& f) {
  const Grid& g = f.grid();
  py::array_t<double> a({g.ny(), g.nx()});
  auto m = a.mutable_unchecked<2>();
  for (int k = 0; k < g.node_count(); ++k) m(g.iy(k), g.ix(k)) = g.interior(k) ? f[k] : std::nan("");
  return a;
}

py::array_t<bool> mask_array(const Grid& g, const std::vector<unsigned char>& mask) {
  py::array_t<bool> a({g.ny(), g.nx()});
  auto m = a.mutable_unchecked<2>();
  for (int k = 0; k < g.node_count(); ++k) m(g.iy(k), g.ix(k)) = mask[k] != 0;
  return a;
}

py::dict manifest_dict(const RunManifest& m) {
  return py::module_::import("json").attr("loads")(manifest_json(m));
}

}  // namespace

PYBIND11_MODULE(_glvortex, mod) {
  mod.doc() = "Vortex energies, obstacle problems and identities on planar domains";
  mod.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(mod, "ConfigError", base.ptr());
  py::register_exception<DomainError>(mod, "DomainError", base.ptr());
  py::register_exception<PreconditionError>(mod, "PreconditionError", base.ptr());
  py::register_exception<NumericError>(mod, "NumericError", base.ptr());

  py::class_<DomainSpec>(mod, "Domain")
      .def_static("disk", &DomainSpec::disk, py::arg("radius") = 1.0)
      .def_static("ellipse", &DomainSpec::ellipse, py::arg("a"), py::arg("b"))
      .def_readonly("a", &DomainSpec::a)
      .def_readonly("b", &DomainSpec::b)
      .def_property_readonly("area", &DomainSpec::area)
      .def("contains", [](const DomainSpec& d, double x, double y) { return d.contains({x, y}); })
      .def("__repr__", [](const DomainSpec& d) { return "Domain(" + d.name() + ")"; });

  py::class_<Workspace>(mod, "Workspace")
      .def(py::init([](const DomainSpec& d, int res, int lres) {
             d.validate();
             return std::make_unique<Workspace>(d, res, lres);
           }),
           py::arg("domain"), py::arg("resolution"), py::arg("lattice_resolution") = 16)
      .def_property_readonly("h", &Workspace::h)
      .def_property_readonly("resolution", &Workspace::resolution)
      .def_property_readonly("F_xi0", &Workspace::F_xi0)
      .def("xi0", [](const Workspace& w) { return to_array(w.xi0()); })
      .def("xi0_at", [](const Workspace& w, double x, double y) { return interpolate(w.xi0(), {x, y}); })
      .def("s", [](const Workspace& w, double x, double y) { return w.lattice().s({x, y}); })
      .def("coordinates", [](const Workspace& w) {
        const Grid& g = *w.grid();
        py::array_t<double> xs(g.nx()), ys(g.ny());
        for (int i = 0; i < g.nx(); ++i) xs.mutable_at(i) = g.x0() + i * g.h();
        for (int j = 0; j < g.ny(); ++j) ys.mutable_at(j) = g.y0() + j * g.h();
        return py::make_tuple(xs, ys);
      });

  mod.def("green", [](const Workspace& w, double x, double y, double yx, double yy) {
    return green_value(green_G(w.helmholtz(), {yx, yy}), {x, y});
  }, py::arg("ws"), py::arg("x"), py::arg("y"), py::arg("source_x"), py::arg("source_y"),
     "G(x, source) on the workspace grid");

  mod.def("H", [](const Workspace& w, const Points& p, double hex) { return H_energy(w, to_config(p), hex); },
          py::arg("ws"), py::arg("points"), py::arg("hex"));
  mod.def("H_mod", [](const Workspace& w, const Points& p, double hex) { return H_mod(w, to_config(p), hex); },
          py::arg("ws"), py::arg("points"), py::arg("hex"));
  mod.def("grad_H", [](const Workspace& w, const Points& p, double hex) {
    Points out;
    for (const Vec2& g : grad_H(w, to_config(p), hex)) out.emplace_back(g.x(), g.y());
    return out;
  }, py::arg("ws"), py::arg("points"), py::arg("hex"));
  mod.def("W", [](const Workspace& w, const Points& p) { return W_energy(w, to_config(p)); }, py::arg("ws"),
          py::arg("points"));
  mod.def("N_max", &ParamRegime::N_max, py::arg("domain"), py::arg("hex"));
  mod.def("lambda_floor", &lambda_floor, py::arg("domain"), py::arg("hex"));

  mod.def("solve_m", [](const Workspace& w, double hex, double lambda, bool pgs) {
    ObstacleOptions opt;
    if (pgs) opt.method = ObstacleMethod::pgs;
    ObstacleSolution s;
    {
      py::gil_scoped_release release;
      s = solve_m(w, hex, lambda, opt);
    }
    const BarrierReport b = check_barriers(s);
    py::dict d;
    d["lambda"] = s.lambda;
    d["m"] = s.m;
    d["f"] = s.f;
    d["iterations"] = s.iterations;
    d["coincidence_area"] = coincidence_area(s);
    d["dist_sigma_boundary"] = dist_sigma_boundary(s);
    d["min_zeta"] = s.zeta.min_interior();
    d["inner_violations"] = b.inner_violations;
    d["outer_violations"] = b.outer_violations;
    d["zeta"] = to_array(s.zeta);
    d["coincidence"] = mask_array(s.phi.grid(), s.coincidence);
    return d;
  }, py::arg("ws"), py::arg("hex"), py::arg("lambda_"), py::arg("pgs") = false);

  mod.def("minimize", [](const Workspace& w, double hex, int N, int starts, std::uint64_t seed, double t0, int jobs) {
    MinimizeOptions opt;
    opt.starts = starts;
    opt.seed = seed;
    opt.t0 = t0;
    opt.jobs = jobs;
    MinimizeReport r;
    {
      py::gil_scoped_release release;
      r = minimize_H(w, hex, N, opt);
    }
    py::dict d;
    d["points"] = from_config(r.best);
    d["energy"] = r.energy;
    d["grad_max"] = r.grad_max;
    d["min_boundary_dist"] = r.min_boundary_dist;
    d["min_separation"] = r.min_separation;
    d["converged"] = r.converged;
    d["runtime_s"] = r.runtime_s;
    return d;
  }, py::arg("ws"), py::arg("hex"), py::arg("N"), py::arg("starts") = 8, py::arg("seed") = 1, py::arg("t0") = 0.01,
     py::arg("jobs") = 1);

  mod.def("check_WH_identity", [](const Workspace& w, const Points& p, double hex) {
    const WHResidual r = check_WH_identity(w, to_config(p), hex);
    py::dict d;
    d["H"] = r.H;
    d["W"] = r.W;
    d["F"] = r.F;
    d["min_phi"] = r.min_phi;
    d["absolute"] = r.absolute;
    d["scaled"] = r.scaled;
    return d;
  }, py::arg("ws"), py::arg("points"), py::arg("hex"));
  mod.def("check_B1_identity",
          [](const Workspace& w, const Points& p) { return check_B1_identity(w, to_config(p)); }, py::arg("ws"),
          py::arg("points"));

  mod.def("estimate_gamma", [](const DomainSpec& d, const std::vector<Points>& configs, const std::vector<double>& eps,
                               int jobs) {
    std::vector<VortexConfig> cs;
    for (const auto& c : configs) cs.push_back(to_config(c));
    GammaOptions opt;
    opt.jobs = jobs;
    GammaEstimate e;
    {
      py::gil_scoped_release release;
      e = estimate_gamma(d, cs, eps, opt);
    }
    py::dict out;
    out["gamma_hat"] = e.gamma_hat;
    out["spread"] = e.spread;
    out["drift"] = e.drift;
    out["samples"] = e.samples;
    return out;
  }, py::arg("domain"), py::arg("configs"), py::arg("eps"), py::arg("jobs") = 1);

  mod.def("random_configs", [](const DomainSpec& d, int count, int max_N, double rho_min, std::uint64_t seed,
                               bool fixed_N) {
    std::vector<Points> out;
    for (const auto& c : random_configs(d, count, max_N, rho_min, seed, fixed_N)) out.push_back(from_config(c));
    return out;
  }, py::arg("domain"), py::arg("count"), py::arg("max_N"), py::arg("rho_min") = 0.1, py::arg("seed") = 1,
     py::arg("fixed_N") = false);

  mod.def("run_obstacle", [](const std::string& domain, int resolution, const std::vector<double>& lambda, double hex,
                             const std::string& out, int jobs) {
    ObstacleCmdOptions o;
    o.domain = io::parse_domain(domain);
    o.resolution = resolution;
    o.lambda = lambda;
    o.hex = hex;
    o.out = out;
    o.jobs = jobs;
    RunManifest m;
    {
      py::gil_scoped_release release;
      m = cmd_obstacle(o);
    }
    return manifest_dict(m);
  }, py::arg("domain"), py::arg("resolution"), py::arg("lambda_"), py::arg("hex") = 1e6, py::arg("out") = "out",
     py::arg("jobs") = 1);
}
