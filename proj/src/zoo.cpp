#include "finsler/zoo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>

#include "finsler/complex_scalar.hpp"
#include "finsler/errors.hpp"

namespace finsler {
namespace {

constexpr double kFunkRadius = 1.0 - 1e-6;

template <class S>
S sum_squares(std::span<const S> a) {
  S s(0.0);
  for (const auto& ai : a) s += ai * ai;
  return s;
}

template <class S>
S dot(std::span<const S> a, std::span<const S> b) {
  S s(0.0);
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

template <class S>
std::vector<Complex<S>> complex_view(std::span<const S> packed) {
  const std::size_t n = packed.size() / 2;
  std::vector<Complex<S>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = {packed[k], packed[k + n]};
  return out;
}

template <class S>
S norm_squared(const std::vector<Complex<S>>& v) {
  S s(0.0);
  for (const auto& c : v) s += modulus_squared(c);
  return s;
}

// Complex Euclidean inner product <z, v> = Σ z^k conj(v^k).
template <class S>
Complex<S> hermitian_product(const std::vector<Complex<S>>& z, const std::vector<Complex<S>>& v) {
  Complex<S> s(S(0.0));
  for (std::size_t k = 0; k < z.size(); ++k) s += z[k] * conj(v[k]);
  return s;
}

DomainPredicate affine_positive(double slope) {
  // 1 + slope·x¹ > margin
  return [slope](std::span<const double> x, double margin) { return 1.0 + slope * x[0] > margin; };
}

Params merged(const ZooEntry& e, const Params& overrides) {
  Params p = e.defaults;
  for (const auto& [k, v] : overrides) {
    if (!p.contains(k)) throw UsageError(e.name + " has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw UsageError(e.name + ": parameter '" + k + "' must be finite");
    p[k] = v;
  }
  return p;
}

void require_dim(const std::string& name, int dim) {
  if (dim < 1) throw UsageError(name + ": dimension must be positive");
}

Eigen::MatrixXcd hermitian_const_matrix(int n, const Params& p) {
  const std::complex<double> off(p.at("offdiag_re"), p.at("offdiag_im"));
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a) h(a, a) = static_cast<double>(a + 1);
  for (int a = 0; a + 1 < n; ++a) {
    h(a, a + 1) = off;
    h(a + 1, a) = std::conj(off);
  }
  return h;
}

std::vector<ZooEntry> build_zoo() {
  std::vector<ZooEntry> zoo;

  {
    ZooEntry e{"euclidean-real", MetricKind::Real, "F = |u| on R^m", {}, {}, {}, {}};
    e.flags = {.homogeneous_real = true, .reversible = true, .strongly_convex = true,
               .projectively_flat_real = true, .dually_flat_real = true};
    e.build = [](int m, const Params& p) {
      require_dim("euclidean-real", m);
      return make_metric("euclidean-real", MetricKind::Real, m, p,
                         [](auto, auto u) { return sqrt(sum_squares(u)); });
    };
    e.dsl = [](int) { return std::optional<std::string>("sqrt(normsq(u))"); };
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e{"scaled-euclidean-real", MetricKind::Real,
               "F = (1 + c x^1)|u|; conformally flat, not projectively flat (negative control)",
               {{"c", 0.1}}, {}, {}, {}};
    e.flags = {.homogeneous_real = true, .reversible = true, .strongly_convex = true};
    e.build = [](int m, const Params& p) {
      require_dim("scaled-euclidean-real", m);
      const double c = p.at("c");
      return make_metric(
          "scaled-euclidean-real", MetricKind::Real, m, p,
          [c](auto x, auto u) {
            using S = std::decay_t<decltype(x[0])>;
            return (S(1.0) + S(c) * x[0]) * sqrt(sum_squares(u));
          },
          affine_positive(c));
    };
    e.dsl = [](int) { return std::optional<std::string>("(1+c*x1)*sqrt(normsq(u))"); };
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e{"funk-real", MetricKind::Real,
               "Funk metric of the unit ball: (sqrt((1-|x|^2)|u|^2 + <x,u>^2) + <x,u>) / (1-|x|^2)",
               {}, {}, {}, {}};
    e.flags = {.homogeneous_real = true, .strongly_convex = true, .projectively_flat_real = true,
               .dually_flat_real = true};
    e.build = [](int m, const Params& p) {
      require_dim("funk-real", m);
      return make_metric(
          "funk-real", MetricKind::Real, m, p,
          [](auto x, auto u) {
            using S = std::decay_t<decltype(x[0])>;
            const S d = S(1.0) - sum_squares(x);
            const S xu = dot(x, u);
            return (sqrt(d * sum_squares(u) + xu * xu) + xu) / d;
          },
          open_ball(kFunkRadius));
    };
    e.dsl = [](int) {
      return std::optional<std::string>(
          "(sqrt((1-normsq(x))*normsq(u)+herm(x,u)^2)+herm(x,u))/(1-normsq(x))");
    };
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e{"funk-complex-form", MetricKind::Complex,
               "Funk metric of the ball in C^n written with Re<z,v>; violates complex homogeneity",
               {}, {}, {}, {}};
    e.flags = {.homogeneous_real = true, .strongly_convex = true, .strongly_pseudoconvex = true,
               .projectively_flat_real = true, .dually_flat_real = true, .complex_pf = true,
               .complex_df = true};
    e.build = [](int n, const Params& p) {
      require_dim("funk-complex-form", n);
      return make_metric(
          "funk-complex-form", MetricKind::Complex, n, p,
          [](auto x, auto u) {
            using S = std::decay_t<decltype(x[0])>;
            const auto z = complex_view(x);
            const auto v = complex_view(u);
            const S d = S(1.0) - norm_squared(z);
            const S re_zv = hermitian_product(z, v).re;
            return (sqrt(d * norm_squared(v) + re_zv * re_zv) + re_zv) / d;
          },
          open_ball(kFunkRadius));
    };
    e.dsl = [](int) {
      return std::optional<std::string>(
          "(sqrt((1-normsq(z))*normsq(v)+re(herm(z,v))^2)+re(herm(z,v)))/(1-normsq(z))");
    };
    zoo.push_back(std::move(e));
  }
  const ExpectedProperties minkowski{.homogeneous_real = true, .reversible = true,
                                     .homogeneous_complex = true, .strongly_convex = true,
                                     .strongly_pseudoconvex = true, .projectively_flat_real = true,
                                     .dually_flat_real = true, .complex_pf = true, .complex_df = true,
                                     .z_independent = true};
  const ExpectedProperties z_dependent{.homogeneous_real = true, .reversible = true,
                                       .homogeneous_complex = true, .strongly_convex = true,
                                       .strongly_pseudoconvex = true};
  {
    ZooEntry e{"complex-euclidean", MetricKind::Complex, "F = ||v||", {}, minkowski, {}, {}};
    e.build = [](int n, const Params& p) {
      require_dim("complex-euclidean", n);
      return make_metric("complex-euclidean", MetricKind::Complex, n, p,
                         [](auto, auto u) { return sqrt(norm_squared(complex_view(u))); });
    };
    e.dsl = [](int) { return std::optional<std::string>("sqrt(normsq(v))"); };
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e{"complex-hermitian-const", MetricKind::Complex,
               "F^2 = h(v, conj v) with constant h: diagonal 1..n, (offdiag_re + i offdiag_im) on "
               "the first superdiagonal",
               {{"offdiag_re", 0.0}, {"offdiag_im", 0.0}}, minkowski, {}, {}};
    e.build = [](int n, const Params& p) {
      require_dim("complex-hermitian-const", n);
      const Eigen::MatrixXcd h = hermitian_const_matrix(n, p);
      if (h.llt().info() != Eigen::Success) {
        throw UsageError("complex-hermitian-const: coefficient matrix is not positive definite");
      }
      return make_metric("complex-hermitian-const", MetricKind::Complex, n, p, [h](auto, auto u) {
        using S = std::decay_t<decltype(u[0])>;
        const auto v = complex_view(u);
        Complex<S> q(S(0.0));
        for (Eigen::Index a = 0; a < h.rows(); ++a) {
          for (Eigen::Index b = 0; b < h.cols(); ++b) {
            if (h(a, b) == 0.0) continue;
            const Complex<S> hab(S(h(a, b).real()), S(h(a, b).imag()));
            q += hab * v[a] * conj(v[b]);
          }
        }
        return sqrt(q.re);
      });
    };
    e.dsl = [](int n) {
      std::string s = "sqrt(re(";
      for (int a = 1; a <= n; ++a) {
        if (a > 1) s += "+";
        s += std::to_string(a) + "*v" + std::to_string(a) + "*conj(v" + std::to_string(a) + ")";
      }
      for (int a = 1; a < n; ++a) {
        const std::string va = "v" + std::to_string(a), vb = "v" + std::to_string(a + 1);
        s += "+(offdiag_re+i*offdiag_im)*" + va + "*conj(" + vb + ")";
        s += "+(offdiag_re-i*offdiag_im)*" + vb + "*conj(" + va + ")";
      }
      return std::optional<std::string>(s + "))");
    };
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e{"complex-minkowski-phi", MetricKind::Complex,
               "F^2 = ||v||^2 + eps |v^1|^4 / ||v||^2, |eps| <= 0.2", {{"eps", 0.1}}, minkowski, {}, {}};
    e.build = [](int n, const Params& p) {
      require_dim("complex-minkowski-phi", n);
      const double eps = p.at("eps");
      if (std::abs(eps) > 0.2) throw UsageError("complex-minkowski-phi: |eps| must be <= 0.2");
      return make_metric("complex-minkowski-phi", MetricKind::Complex, n, p, [eps](auto, auto u) {
        using S = std::decay_t<decltype(u[0])>;
        const auto v = complex_view(u);
        const S nn = norm_squared(v);
        const S a = modulus_squared(v[0]);
        return sqrt(nn + S(eps) * a * a / nn);
      });
    };
    e.dsl = [](int) { return std::optional<std::string>("sqrt(normsq(v)+eps*abs(v1)^4/normsq(v))"); };
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e{"perturbed-family", MetricKind::Complex, "F^2 = (1 + t Re z^1) ||v||^2",
               {{"t", 0.2}}, z_dependent, {}, {}};
    e.build = [](int n, const Params& p) {
      require_dim("perturbed-family", n);
      const double t = p.at("t");
      return make_metric(
          "perturbed-family", MetricKind::Complex, n, p,
          [t](auto x, auto u) {
            using S = std::decay_t<decltype(x[0])>;
            return sqrt((S(1.0) + S(t) * x[0]) * norm_squared(complex_view(u)));
          },
          affine_positive(t));
    };
    e.dsl = [](int) { return std::optional<std::string>("sqrt((1+t*re(z1))*normsq(v))"); };
    zoo.push_back(std::move(e));
  }
  {
    ZooEntry e{"hermitian-z-dependent", MetricKind::Complex, "F^2 = exp(c Re z^1) ||v||^2",
               {{"c", 0.3}}, z_dependent, {}, {}};
    e.build = [](int n, const Params& p) {
      require_dim("hermitian-z-dependent", n);
      const double c = p.at("c");
      return make_metric("hermitian-z-dependent", MetricKind::Complex, n, p, [c](auto x, auto u) {
        using S = std::decay_t<decltype(x[0])>;
        return sqrt(exp(S(c) * x[0]) * norm_squared(complex_view(u)));
      });
    };
    e.dsl = [](int) { return std::optional<std::string>(); };  // no exp in the DSL
    zoo.push_back(std::move(e));
  }
  return zoo;
}

}  // namespace

const std::vector<ZooEntry>& zoo_list() {
  static const std::vector<ZooEntry> zoo = build_zoo();
  return zoo;
}

const ZooEntry& zoo_find(std::string_view name) {
  for (const auto& e : zoo_list()) {
    if (e.name == name) return e;
  }
  throw UnknownMetric("unknown metric '" + std::string(name) + "'");
}

MetricField make_zoo_metric(std::string_view name, int dim, const Params& overrides) {
  const ZooEntry& e = zoo_find(name);
  return e.build(dim, merged(e, overrides));
}

}  // namespace finsler
