#include <doctest.h>

#include "finsler/axioms.hpp"
#include "finsler/errors.hpp"
#include "finsler/zoo.hpp"
#include "oracles.hpp"

using namespace finsler;
using cd = std::complex<double>;

namespace {

// F² of the φ-metric with ε = 0.1 in packed coordinates (a1, a2, b1, b2), written out directly.
double phi_sq(const oracle::Vec& p) {
  const double n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
  const double m1 = p[0] * p[0] + p[2] * p[2];
  return n2 + 0.1 * m1 * m1 / n2;
}

}  // namespace

TEST_CASE("homogeneity: examples") {
  const auto ce = make_zoo_metric("complex-euclidean", 2);
  SampleSpec spec;
  spec.seed = 4;
  spec.count = 50;
  const auto scalars = default_scalars(MetricKind::Complex);
  REQUIRE(scalars.size() == 6);
  for (const auto& s : generate_samples(ce, spec)) CHECK(homogeneity_residual(ce, s, scalars) <= 1e-12);

  const auto fc = make_zoo_metric("funk-complex-form", 2);
  const std::vector<cd> lam_i{cd(0, 1)};
  const ComplexTangentSample s{{cd(0.5), cd(0)}, {cd(1), cd(0)}};
  CHECK(homogeneity_residual(fc, s, lam_i) == doctest::Approx(0.84529946162074847).epsilon(1e-14));

  const auto funk = make_zoo_metric("funk-real", 2);
  const std::vector<cd> minus1{cd(-1)};
  CHECK(homogeneity_residual(funk, RealTangentSample{{0, 0}, {1, 0}}, minus1) <= 1e-15);
  CHECK(homogeneity_residual(funk, RealTangentSample{{0.5, 0}, {1, 0}}, minus1) ==
        doctest::Approx(2.0 - 2.0 / 3.0).epsilon(1e-14));
  CHECK(positive_homogeneity_residual(funk, RealTangentSample{{0.5, 0}, {1, 0}},
                                      default_scalars(MetricKind::Real)) <= 1e-15);

  CHECK_THROWS_AS(homogeneity_residual(funk, RealTangentSample{{0, 0}, {1, 0}}, lam_i), UsageError);
  const std::vector<cd> zero{cd(0)};
  CHECK_THROWS_AS(homogeneity_residual(ce, s, zero), UsageError);
}

TEST_CASE("homogeneity holds for every metric flagged homogeneous") {
  for (const auto& entry : zoo_list()) {
    const auto m = entry.build(2, entry.defaults);
    const auto scalars = default_scalars(entry.kind);
    SampleSpec spec;
    spec.seed = 12;
    spec.count = 100;
    double abs_worst = 0, pos_worst = 0;
    for (const auto& s : generate_samples(m, spec)) {
      // Scaled tangents must stay on the slit bundle; residual is absolute, so compare relative to F.
      const double F = evaluate_packed(m, s.x, s.u);
      abs_worst = std::max(abs_worst, homogeneity_residual(m, s, scalars) / (1 + F));
      pos_worst = std::max(pos_worst, positive_homogeneity_residual(m, s, scalars) / (1 + F));
    }
    INFO(entry.name);
    CHECK(pos_worst <= 1e-12);
    const bool claimed = entry.kind == MetricKind::Complex ? entry.flags.homogeneous_complex : entry.flags.reversible;
    if (claimed) {
      CHECK(abs_worst <= 1e-12);
    } else {
      CHECK(abs_worst > 1e-3);
    }
  }
}

TEST_CASE("fundamental tensors: examples") {
  const auto e = make_zoo_metric("euclidean-real", 2);
  const auto t = fundamental_tensors(e, RealTangentSample{{0, 0}, {1, 0}});
  CHECK((t.g - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(t.g_def.min_eigenvalue == doctest::Approx(1.0));
  CHECK(t.g_def.cholesky_ok);
  CHECK_FALSE(t.G.has_value());

  const auto h = make_zoo_metric("complex-hermitian-const", 2);
  SampleSpec spec;
  spec.seed = 6;
  spec.count = 30;
  for (const auto& s : generate_samples(h, spec)) {
    const auto th = fundamental_tensors(h, unpack(s));
    REQUIRE(th.G.has_value());
    Eigen::Matrix2cd expected;
    expected << cd(1), cd(0), cd(0), cd(2);
    CHECK((*th.G - expected).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(th.G_def->min_eigenvalue == doctest::Approx(1.0));
  }
}

TEST_CASE("fundamental tensors: φ-metric against a closed-form Hessian") {
  const auto phi = make_zoo_metric("complex-minkowski-phi", 2, {{"eps", 0.1}});
  const ComplexTangentSample s{{cd(0.2, -0.1), cd(0.3, 0.4)}, {cd(1), cd(0)}};
  const auto t = fundamental_tensors(phi, s);
  Eigen::Matrix2cd G;
  G << cd(1.1), cd(0), cd(0), cd(0.9);
  CHECK((*t.G - G).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(t.G_def->min_eigenvalue == doctest::Approx(0.9).epsilon(1e-13));
  const Eigen::Vector4d gd(1.1, 0.9, 1.1, 0.9);
  CHECK((t.g - Eigen::Matrix4d(gd.asDiagonal())).cwiseAbs().maxCoeff() < 1e-13);

  // Off-axis: compare with Wirtinger combinations of central differences of the closed form.
  const ComplexTangentSample s2{{cd(0), cd(0)}, {cd(0.6, -0.3), cd(0.2, 0.7)}};
  const oracle::Vec p{0.6, 0.2, -0.3, 0.7};
  const auto t2 = fundamental_tensors(phi, s2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double re = 0.25 * (oracle::mixed(phi_sq, p, a, b) + oracle::mixed(phi_sq, p, a + 2, b + 2));
      const double im = 0.25 * (oracle::mixed(phi_sq, p, a, b + 2) - oracle::mixed(phi_sq, p, a + 2, b));
      CHECK(std::abs((*t2.G)(a, b) - cd(re, im)) < 1e-6);
      CHECK(t2.g(a, b) == doctest::Approx(0.5 * oracle::mixed(phi_sq, p, a, b)).epsilon(1e-6));
    }
  }
  CHECK(t2.G_def->min_eigenvalue > 0);
}

TEST_CASE("definiteness") {
  Eigen::Matrix2d a;
  a << 1, 2, 2, 1;
  const auto d = definiteness(Eigen::MatrixXd(a));
  CHECK_FALSE(d.cholesky_ok);
  CHECK(d.min_eigenvalue == doctest::Approx(-1.0));
  Eigen::Matrix2cd h;
  h << cd(2), cd(0, 1), cd(0, -1), cd(2);
  const auto dh = definiteness(Eigen::MatrixXcd(h));
  CHECK(dh.cholesky_ok);
  CHECK(dh.min_eigenvalue == doctest::Approx(1.0));
}

TEST_CASE("strong convexity report: examples and the implication g > 0 ⟹ G > 0") {
  SampleSpec spec;
  spec.seed = 21;
  spec.count = 200;
  const auto ce = strong_convexity_report(make_zoo_metric("complex-euclidean", 2), spec);
  CHECK(ce.strongly_convex);
  CHECK(ce.strongly_pseudoconvex);
  CHECK(ce.min_eig_g == doctest::Approx(1.0));
  CHECK(ce.min_eig_G == doctest::Approx(1.0));

  const auto pf = strong_convexity_report(make_zoo_metric("perturbed-family", 2, {{"t", 0.2}}), spec);
  CHECK(pf.strongly_convex);
  CHECK(pf.failures == 0);
  CHECK(pf.min_eig_g >= 1 - 0.2 * 0.8 - 1e-12);

  for (const auto& entry : zoo_list()) {
    if (entry.kind != MetricKind::Complex) continue;
    const auto r = strong_convexity_report(entry.build(2, entry.defaults), spec);
    INFO(entry.name);
    CHECK(r.samples == 200);
    CHECK(r.failures == 0);
    CHECK(r.implication_violations == 0);
    if (r.strongly_convex) CHECK(r.strongly_pseudoconvex);
    CHECK(r.strongly_convex == entry.flags.strongly_convex);
    CHECK(r.strongly_pseudoconvex == entry.flags.strongly_pseudoconvex);
  }

  CHECK_THROWS_AS(strong_convexity_report(make_zoo_metric("funk-real", 2), spec), UsageError);
}

TEST_CASE("g and G are invariant under v ↦ λv for complex-homogeneous metrics") {
  for (const auto& entry : zoo_list()) {
    if (entry.kind != MetricKind::Complex || !entry.flags.homogeneous_complex) continue;
    const auto m = entry.build(2, entry.defaults);
    SampleSpec spec;
    spec.seed = 77;
    spec.count = 50;
    for (const auto& packed : generate_samples(m, spec)) {
      const auto s = unpack(packed);
      const auto base = fundamental_tensors(m, s);
      for (const cd lam : default_scalars(MetricKind::Complex)) {
        ComplexTangentSample t = s;
        for (auto& vi : t.v) vi *= lam;
        const auto scaled_t = fundamental_tensors(m, t);
        const double scale = 1 + base.G->cwiseAbs().maxCoeff();
        INFO(entry.name << " λ=" << lam);
        CHECK((*scaled_t.G - *base.G).cwiseAbs().maxCoeff() <= 1e-9 * scale);
      }
    }
  }
}
