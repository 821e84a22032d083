#include "shadowgeom/harness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace shadowgeom;

namespace {

Eigen::MatrixXd dense(const Mat& m) { return Eigen::MatrixXd(m); }
Eigen::VectorXd dense(const Vec& v) { return Eigen::VectorXd(v); }

Vec small(const Eigen::VectorXd& v) {
  if (v.size() < 1 || v.size() > kMaxDim) throw GeometryError(ErrorKind::kInvalidDimension, "vector length must be in [1, 8]");
  return Vec(v);
}

RngSeed rng(std::uint64_t seed, const char* tag) { return RngSeed{seed, 0}.derive(tag); }

py::dict position_dict(const PositionResult& p) {
  py::dict d;
  d["transform"] = dense(p.transform);
  d["translation"] = dense(p.translation);
  d["residual"] = p.residual;
  d["objective"] = p.objective;
  d["iterations"] = p.iterations;
  d["converged"] = p.converged;
  return d;
}

py::dict ellipsoid_dict(const EllipsoidResult& r) {
  py::dict d = position_dict(r.position);
  d["shape"] = dense(r.ellipsoid.shape);
  d["center"] = dense(r.ellipsoid.center);
  d["ellipsoid_volume"] = r.ellipsoid.volume();
  return d;
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["value"] = e.mean;
  d["stderr"] = e.std_error;
  d["samples"] = e.n_samples;
  d["exact"] = e.exact;
  return d;
}

py::dict result_dict(const CheckResult& r) {
  py::dict d;
  d["id"] = r.id;
  d["body"] = r.body;
  d["n"] = r.n;
  d["status"] = std::string(to_string(r.status));
  d["bound"] = std::string(to_string(r.bound));
  d["lhs"] = estimate_dict(r.lhs);
  d["rhs"] = estimate_dict(r.rhs);
  d["ratio"] = r.ratio;
  py::list cases;
  for (const auto& c : r.cases) {
    py::dict cd;
    cd["label"] = c.label;
    cd["status"] = std::string(to_string(c.status));
    cd["lhs"] = estimate_dict(c.lhs);
    cd["rhs"] = estimate_dict(c.rhs);
    cd["ratio"] = c.ratio;
    cases.append(cd);
  }
  d["cases"] = cases;
  d["values"] = r.values;
  d["notes"] = r.notes;
  return d;
}

SuiteOptions options_from(int samples, double tol, int jobs) {
  SuiteOptions o;
  o.samples = samples;
  o.tol = tol;
  o.jobs = jobs;
  return o;
}

}  // namespace

PYBIND11_MODULE(_shadowgeom, m) {
  m.doc() = "Convex polytope shadows, quermassintegrals, positions and inequality checks";
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("mean", &Estimate::mean)
      .def_readonly("stderr", &Estimate::std_error)
      .def_readonly("samples", &Estimate::n_samples)
      .def_readonly("exact", &Estimate::exact)
      .def("__float__", [](const Estimate& e) { return e.mean; })
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(mean=" + std::to_string(e.mean) + ", stderr=" + std::to_string(e.std_error) +
               ", samples=" + std::to_string(e.n_samples) + (e.exact ? ", exact" : "") + ")";
      });

  py::class_<Body>(m, "Body")
      .def_readonly("name", &Body::name)
      .def_readonly("symmetric", &Body::symmetric)
      .def_property_readonly("dim", &Body::dim)
      .def_property_readonly("is_zonoid", &Body::is_zonoid)
      .def_property_readonly("vertices", [](const Body& b) { return Eigen::MatrixXd(b.polytope.vertices()); })
      .def_property_readonly("num_facets", [](const Body& b) { return b.polytope.facets().size(); })
      .def_property_readonly("volume", [](const Body& b) { return b.polytope.volume(); })
      .def_property_readonly("surface_area", [](const Body& b) { return b.polytope.surface_area(); })
      .def("to_json", [](const Body& b) { return body_to_json(b); })
      .def("__repr__", [](const Body& b) { return "Body('" + b.name + "', dim=" + std::to_string(b.dim()) + ")"; });

  m.def("named_body", &make_named_body, py::arg("name"), py::arg("dim"));
  m.def(
      "body_from_points",
      [](const std::string& name, const Eigen::MatrixXd& points) { return make_body_from_points(name, Points(points)); },
      py::arg("name"), py::arg("points"), "Convex hull of the columns of a (dim, count) array.");
  m.def("body_from_json", &body_from_json, py::arg("text"));
  m.def("load_body", &load_body_file, py::arg("path"));
  m.def("default_corpus", &default_corpus, py::arg("dim"), py::arg("random_count") = 5);

  m.def("omega", &omega, py::arg("n"));
  m.def("b_constant", &b_constant, py::arg("n"));
  m.def("inradius", [](const Body& b) { return inradius(b.polytope).radius; });
  m.def("circumradius", [](const Body& b) { return circumradius(b.polytope); });
  m.def("vrad", [](const Body& b) { return vrad(b.polytope); });
  m.def("shadow_surface", [](const Body& b, const Eigen::VectorXd& xi) { return shadow_surface(b.polytope, small(xi)); },
        py::arg("body"), py::arg("direction"));
  m.def("mean_shadow_surface", [](const Body& b) { return mean_shadow_surface(b.polytope); });
  m.def(
      "mean_width",
      [](const Body& b, int samples, std::uint64_t seed) { return mean_width(b.polytope, samples, rng(seed, "mean-width")); },
      py::arg("body"), py::arg("samples") = 20000, py::arg("seed") = 0);
  m.def(
      "quermassintegral",
      [](const Body& b, int p, int samples, std::uint64_t seed) {
        return quermassintegral(b.polytope, p, samples, rng(seed, "quermass"));
      },
      py::arg("body"), py::arg("p"), py::arg("samples") = 20000, py::arg("seed") = 0);
  m.def(
      "p_k", [](const Body& b, int k, int samples, std::uint64_t seed) { return p_k(b.polytope, k, samples, rng(seed, "pk")); },
      py::arg("body"), py::arg("k"), py::arg("samples") = 20000, py::arg("seed") = 0);

  m.def("minimal_surface_position", [](const Body& b) {
    const MinSurfaceResult r = minimal_surface_position(b.polytope);
    py::dict d = position_dict(r.position);
    d["partial"] = r.partial;
    return d;
  });
  m.def("isotropic_position", [](const Body& b) {
    const IsotropicResult r = isotropic_position(b.polytope);
    py::dict d = position_dict(r.position);
    d["L_K"] = r.L_K;
    return d;
  });
  m.def("john_position", [](const Body& b) { return ellipsoid_dict(john_position(b.polytope)); });
  m.def("lowner_position", [](const Body& b) { return ellipsoid_dict(lowner_position(b.polytope)); });

  m.def("check_ids", &all_check_ids);
  m.def(
      "run_check",
      [](const std::string& id, const std::string& body, int dim, std::uint64_t seed, int samples, double tol) {
        const CheckSpec* spec = find_check(id);
        if (!spec) throw GeometryError(ErrorKind::kInvalidArgument, "unknown check id '" + id + "'");
        CheckResult r;
        {
          py::gil_scoped_release release;
          r = run_check(*spec, BodySpec{body, dim, {}}, seed, options_from(samples, tol, 1));
        }
        return result_dict(r);
      },
      py::arg("id"), py::arg("body"), py::arg("dim"), py::arg("seed") = 0, py::arg("samples") = 20000,
      py::arg("tol") = 0.05);
  m.def(
      "run_suite",
      [](const std::vector<int>& dims, std::vector<std::string> ids, std::uint64_t seed, int samples, double tol,
         int jobs) {
        if (ids.empty()) ids = all_check_ids();
        std::vector<BodySpec> corpus;
        for (int d : dims)
          for (auto& s : default_corpus_specs(d)) corpus.push_back(std::move(s));
        py::gil_scoped_release release;
        return report_json(run_suite(corpus, ids, seed, options_from(samples, tol, jobs)));
      },
      py::arg("dims"), py::arg("ids") = std::vector<std::string>{}, py::arg("seed") = 0, py::arg("samples") = 20000,
      py::arg("tol") = 0.05, py::arg("jobs") = 1, "Runs the default corpus and returns the JSON report.");
  m.def(
      "extremizer_search",
      [](const std::string& id, const std::string& family, int dim, int budget, std::uint64_t seed) {
        py::gil_scoped_release release;
        return search_json(extremizer_search(id, family, dim, budget, seed));
      },
      py::arg("id"), py::arg("family"), py::arg("dim"), py::arg("budget") = 200, py::arg("seed") = 0);
}
