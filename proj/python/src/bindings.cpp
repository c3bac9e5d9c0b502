#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "finsler/axioms.hpp"
#include "finsler/calculus.hpp"
#include "finsler/errors.hpp"
#include "finsler/expr.hpp"
#include "finsler/flatness.hpp"
#include "finsler/geodesics.hpp"
#include "finsler/report.hpp"
#include "finsler/zoo.hpp"

namespace py = pybind11;
using namespace finsler;
using cd = std::complex<double>;

namespace {

SampleSpec make_spec(std::uint64_t seed, int samples, double radius) {
  SampleSpec s;
  s.seed = seed;
  s.count = samples;
  s.radius = radius;
  return s;
}

// Real metrics take (x, u); complex metrics take (z, v) and are packed here.
RealTangentSample to_packed(const MetricField& m, const std::vector<cd>& base, const std::vector<cd>& tangent) {
  if (m.kind == MetricKind::Complex) return pack(ComplexTangentSample{base, tangent});
  RealTangentSample s;
  for (const cd& c : base) {
    if (c.imag() != 0.0) throw UsageError("real metric given a complex base point");
    s.x.push_back(c.real());
  }
  for (const cd& c : tangent) {
    if (c.imag() != 0.0) throw UsageError("real metric given a complex tangent vector");
    s.u.push_back(c.real());
  }
  return s;
}

py::dict blocks_dict(const RealJetBlocks& b) {
  py::dict d;
  d["value"] = b.value;
  d["dx"] = b.dx;
  d["du"] = b.du;
  d["xu"] = b.xu;
  d["uu"] = b.uu;
  return d;
}

py::dict blocks_dict(const ComplexJetBlocks& b) {
  py::dict d;
  d["value"] = b.value;
  d["dz"] = b.dz;
  d["dzbar"] = b.dzbar;
  d["dv"] = b.dv;
  d["dvbar"] = b.dvbar;
  d["zv"] = b.zv;
  d["zbarv"] = b.zbarv;
  d["zvbar"] = b.zvbar;
  d["vvbar"] = b.vvbar;
  return d;
}

py::dict residual_dict(const ResidualVector& r) {
  py::dict d;
  d["kind"] = to_string(r.kind);
  d["components"] = r.components;
  d["norm"] = r.norm;
  d["relative"] = r.relative();
  return d;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finsler flatness and rigidity checks";
  m.attr("__version__") = kToolVersion;

  auto base = py::register_exception<Error>(m, "FinslerError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base);
  auto usage = py::register_exception<UsageError>(m, "UsageError", base);
  py::register_exception<UnknownMetric>(m, "UnknownMetric", usage);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<NumericsError>(m, "NumericsError", base);

  py::enum_<MetricKind>(m, "MetricKind").value("Real", MetricKind::Real).value("Complex", MetricKind::Complex);

  py::class_<MetricField>(m, "Metric")
      .def_readonly("name", &MetricField::name)
      .def_readonly("kind", &MetricField::kind)
      .def_readonly("dim", &MetricField::dim)
      .def_readonly("params", &MetricField::params)
      .def_property_readonly("real_dim", &MetricField::real_dim)
      .def("__call__",
           [](const MetricField& f, const std::vector<cd>& base, const std::vector<cd>& tangent) {
             const auto s = to_packed(f, base, tangent);
             return evaluate_packed(f, s.x, s.u);
           },
           py::arg("base"), py::arg("tangent"))
      .def("__repr__", [](const MetricField& f) {
        return "<Metric " + f.name + " " + (f.kind == MetricKind::Real ? "real" : "complex") + " dim=" +
               std::to_string(f.dim) + ">";
      });

  m.def("zoo", [] {
    py::list out;
    for (const auto& e : zoo_list()) {
      py::dict d;
      d["name"] = e.name;
      d["kind"] = e.kind == MetricKind::Real ? "real" : "complex";
      d["doc"] = e.doc;
      d["defaults"] = e.defaults;
      out.append(d);
    }
    return out;
  });
  m.def("metric", [](const std::string& name, int dim, const Params& params) { return make_zoo_metric(name, dim, params); },
        py::arg("name"), py::arg("dim") = 2, py::arg("params") = Params{});
  m.def("metric_from_expr",
        [](const std::string& source, const std::string& kind, int dim, const py::dict& params) {
          if (kind != "real" && kind != "complex") throw UsageError("kind must be 'real' or 'complex'");
          // Insertion order fixes the pK aliases.
          std::vector<std::string> names;
          std::vector<double> values;
          for (const auto& [k, v] : params) {
            names.push_back(py::cast<std::string>(k));
            values.push_back(py::cast<double>(v));
          }
          const auto e = expr::parse(source, kind == "real" ? MetricKind::Real : MetricKind::Complex, dim, names);
          return expr::metric_from_expr(e, "expr", values);
        },
        py::arg("source"), py::arg("kind") = "complex", py::arg("dim") = 2,
        py::arg("params") = py::dict());
  m.def("to_real", &to_real);
  m.def("scaled", &scaled);

  m.def("jet", [](const MetricField& f, const std::vector<cd>& base, const std::vector<cd>& tangent) {
    const auto s = to_packed(f, base, tangent);
    py::dict d;
    if (f.kind == MetricKind::Complex) {
      const auto j = complex_jet(f, unpack(s));
      d["F"] = blocks_dict(j.f);
      d["F2"] = blocks_dict(j.f2);
    } else {
      const auto j = real_jet(f, s);
      d["F"] = blocks_dict(j.f);
      d["F2"] = blocks_dict(j.f2);
    }
    return d;
  });
  m.def("jet_discrepancy", [](const MetricField& f, const std::vector<cd>& base, const std::vector<cd>& tangent) {
    const auto s = to_packed(f, base, tangent);
    return jet_discrepancy(packed_jet(f, s.x, s.u), fd_packed_jet(f, s.x, s.u));
  });

  m.def("homogeneity_residual",
        [](const MetricField& f, const std::vector<cd>& base, const std::vector<cd>& tangent,
           std::optional<std::vector<cd>> scalars) {
          const auto lam = scalars.value_or(default_scalars(f.kind));
          return homogeneity_residual(f, to_packed(f, base, tangent), lam);
        },
        py::arg("metric"), py::arg("base"), py::arg("tangent"), py::arg("scalars") = py::none());

  m.def("fundamental_tensors", [](const MetricField& f, const std::vector<cd>& base, const std::vector<cd>& tangent) {
    const auto t = fundamental_tensors(f, to_packed(f, base, tangent));
    py::dict d;
    d["g"] = t.g;
    d["min_eig_g"] = t.g_def.min_eigenvalue;
    if (t.G) {
      d["G"] = *t.G;
      d["min_eig_G"] = t.G_def->min_eigenvalue;
    }
    return d;
  });

  m.def("residual", [](const MetricField& f, const std::string& kind, const std::vector<cd>& base,
                       const std::vector<cd>& tangent) {
    const auto s = to_packed(f, base, tangent);
    if (kind == "hamel") return residual_dict(hamel_residual(f, s));
    if (kind == "dualflat") return residual_dict(dualflat_residual(f, s));
    if (kind == "complex-pf") return residual_dict(complex_pf_residual(f, unpack(s)));
    if (kind == "complex-df") return residual_dict(complex_df_residual(f, unpack(s)));
    throw UsageError("unknown residual kind '" + kind + "'");
  });

  m.def("proof_chain", [](const MetricField& f, const std::vector<cd>& z, const std::vector<cd>& v) {
    py::dict d;
    for (const auto& [k, val] : proof_chain(f, ComplexTangentSample{z, v}).entries()) d[py::str(k)] = val;
    return d;
  });

  m.def("rigidity_scan",
        [](const MetricField& f, std::uint64_t seed, int samples, double radius) {
          const auto r = rigidity_scan(f, make_spec(seed, samples, radius));
          py::dict d;
          d["classification"] = to_string(r.classification);
          d["pf"] = to_string(r.pf);
          d["df"] = to_string(r.df);
          d["zgrad"] = to_string(r.zgrad);
          d["max_pf"] = r.max_pf_abs;
          d["max_df"] = r.max_df_abs;
          d["max_zgrad_f"] = r.max_zgrad_f;
          d["max_zgrad_f2"] = r.max_zgrad_f2;
          d["max_homogeneity_rel"] = r.max_homogeneity_rel;
          d["theorem_consistent"] = r.theorem_consistent;
          d["samples"] = r.samples;
          d["failures"] = r.failures;
          return d;
        },
        py::arg("metric"), py::arg("seed") = 1, py::arg("samples") = 200, py::arg("radius") = 0.8);

  m.def("check",
        [](const MetricField& f, std::uint64_t seed, int samples, double radius, bool fd_check) {
          CheckOptions o;
          o.spec = make_spec(seed, samples, radius);
          o.fd_check = fd_check;
          return json_to_py(to_json(cmd_check(f, o)));
        },
        py::arg("metric"), py::arg("seed") = 1, py::arg("samples") = 200, py::arg("radius") = 0.8,
        py::arg("fd_check") = false);

  m.def("spray", [](const MetricField& f, const std::vector<double>& x, const std::vector<double>& u) {
    return Eigen::VectorXd(spray_coefficients(f, RealTangentSample{x, u}));
  });

  m.def("geodesic",
        [](const MetricField& f, const std::vector<double>& x0, const std::vector<double>& u0, double horizon,
           int steps) {
          const MetricField real = f.kind == MetricKind::Complex ? to_real(f) : f;
          const auto tr = integrate_geodesic(real, x0, u0, horizon, steps);
          const auto n = static_cast<Eigen::Index>(tr.samples.size());
          const auto dim = static_cast<Eigen::Index>(x0.size());
          Eigen::VectorXd t(n);
          Eigen::MatrixXd xs(n, dim), us(n, dim);
          for (Eigen::Index k = 0; k < n; ++k) {
            t(k) = tr.samples[k].t;
            for (Eigen::Index a = 0; a < dim; ++a) {
              xs(k, a) = tr.samples[k].x[a];
              us(k, a) = tr.samples[k].u[a];
            }
          }
          py::dict d;
          d["t"] = t;
          d["x"] = xs;
          d["u"] = us;
          d["straightness_deviation"] = tr.straightness_deviation;
          d["path_length"] = tr.path_length;
          d["termination"] = to_string(tr.termination);
          d["message"] = tr.message;
          return d;
        },
        py::arg("metric"), py::arg("x0"), py::arg("u0"), py::arg("T") = 1.0, py::arg("N") = 1000);

  m.def("parse_eval",
        [](const std::string& source, const std::string& kind, int dim, const std::vector<cd>& base,
           const std::vector<cd>& tangent) {
          if (kind != "real" && kind != "complex") throw UsageError("kind must be 'real' or 'complex'");
          const auto e = expr::parse(source, kind == "real" ? MetricKind::Real : MetricKind::Complex, dim);
          std::vector<Complex<double>> b, t;
          for (const cd& c : base) b.push_back({c.real(), c.imag()});
          for (const cd& c : tangent) t.push_back({c.real(), c.imag()});
          if (static_cast<int>(b.size()) != dim || static_cast<int>(t.size()) != dim)
            throw UsageError("expected " + std::to_string(dim) + " components per argument");
          const auto r = e.eval(expr::Bindings<double>{b, t, {}});
          return cd(r.re, r.im);
        },
        py::arg("source"), py::arg("kind"), py::arg("dim"), py::arg("base"), py::arg("tangent"));
}
