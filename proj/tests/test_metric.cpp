#include <doctest.h>

#include <algorithm>

#include "finsler/errors.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"
#include "finsler/zoo.hpp"
#include "oracles.hpp"

using namespace finsler;
using cd = std::complex<double>;

TEST_CASE("evaluate: Euclidean and Funk anchor values") {
  const auto euclid = make_zoo_metric("euclidean-real", 2);
  CHECK(evaluate(euclid, RealTangentSample{{0, 0}, {3, 4}}) == doctest::Approx(5.0).epsilon(1e-15));

  const auto funk = make_zoo_metric("funk-real", 2);
  CHECK(evaluate(funk, RealTangentSample{{0, 0}, {3, 4}}) == doctest::Approx(5.0).epsilon(1e-15));
  // √(0.75·1 + 0.25)/0.75 + 0.5/0.75 = 2
  CHECK(evaluate(funk, RealTangentSample{{0.5, 0}, {1, 0}}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(evaluate(funk, RealTangentSample{{0.5, 0}, {1, 0}}) ==
        doctest::Approx(oracle::funk({0.5, 0}, {1, 0})).epsilon(1e-15));
}

TEST_CASE("evaluate: error paths") {
  const auto funk = make_zoo_metric("funk-real", 2);
  CHECK_THROWS_AS(evaluate(funk, RealTangentSample{{1.0, 0}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(evaluate(funk, RealTangentSample{{0.8, 0.8}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(evaluate(funk, RealTangentSample{{0, 0}, {0, 0}}), UsageError);
  CHECK_THROWS_AS(evaluate(funk, RealTangentSample{{0, 0, 0}, {1, 0, 0}}), UsageError);
  CHECK_THROWS_AS(evaluate(funk, ComplexTangentSample{{cd(0)}, {cd(1)}}), UsageError);

  const auto ce = make_zoo_metric("complex-euclidean", 1);
  CHECK_THROWS_AS(evaluate(ce, RealTangentSample{{0, 0}, {1, 0}}), UsageError);

  auto bad = make_metric("nan", MetricKind::Real, 1, {}, [](auto, auto u) { return u[0] / (u[0] - u[0]); });
  CHECK_THROWS_AS(evaluate(bad, RealTangentSample{{0}, {1}}), NumericsError);
}

TEST_CASE("to_real: relabels a complex metric as a real one on R^2n") {
  const auto ce = make_zoo_metric("complex-euclidean", 1);
  const auto r = to_real(ce);
  CHECK(r.kind == MetricKind::Real);
  CHECK(r.dim == 2);
  CHECK(evaluate(r, RealTangentSample{{0.1, 0.2}, {3, 4}}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(to_real(r), UsageError);

  const auto phi0 = to_real(make_zoo_metric("complex-minkowski-phi", 2, {{"eps", 0.0}}));
  const auto e4 = make_zoo_metric("euclidean-real", 4);
  SampleStream rng(5);
  for (int k = 0; k < 50; ++k) {
    RealTangentSample s{rng.in_ball(4, 0.8), rng.unit_vector(4)};
    CHECK(evaluate(phi0, s) == doctest::Approx(evaluate(e4, s)).epsilon(1e-15));
  }

  // F² = (1 + t x¹)‖v‖² at x¹ = 0
  const auto pert = to_real(make_zoo_metric("perturbed-family", 2, {{"t", 0.2}}));
  CHECK(evaluate(pert, RealTangentSample{{0, 0, 0, 0}, {0, 0, 1, 0}}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("to_real agrees with the complex evaluation at the packed image") {
  for (const auto& e : zoo_list()) {
    if (e.kind != MetricKind::Complex) continue;
    const auto m = e.build(2, e.defaults);
    const auto r = to_real(m);
    SampleSpec spec;
    spec.seed = 17;
    spec.count = 200;
    for (const auto& s : generate_samples(m, spec)) {
      const ComplexTangentSample c = unpack(s);
      CHECK(evaluate(r, s) == evaluate(m, c));
      const RealTangentSample back = pack(c);
      CHECK(back.x == s.x);
      CHECK(back.u == s.u);
    }
  }
}

TEST_CASE("funk-complex-form is the real Funk metric on R^2n") {
  const auto fc = make_zoo_metric("funk-complex-form", 2);
  const auto fr = make_zoo_metric("funk-real", 4);
  SampleSpec spec;
  spec.seed = 23;
  spec.count = 200;
  for (const auto& s : generate_samples(fc, spec)) {
    const ComplexTangentSample c = unpack(s);
    CHECK(evaluate(fc, c) == doctest::Approx(evaluate(fr, s)).epsilon(1e-13));
    CHECK(evaluate(fc, c) == doctest::Approx(oracle::funk_complex(c.z, c.v)).epsilon(1e-13));
  }
}

TEST_CASE("zoo: registry contents and claimed flags") {
  const auto& zoo = zoo_list();
  for (const char* name : {"euclidean-real", "scaled-euclidean-real", "funk-real", "funk-complex-form",
                           "complex-euclidean", "complex-hermitian-const", "complex-minkowski-phi",
                           "perturbed-family", "hermitian-z-dependent"}) {
    CHECK(std::any_of(zoo.begin(), zoo.end(), [&](const ZooEntry& e) { return e.name == name; }));
  }
  const auto& funk = zoo_find("funk-real");
  CHECK(funk.flags.projectively_flat_real);
  CHECK(funk.flags.dually_flat_real);
  CHECK_FALSE(funk.flags.reversible);
  CHECK_FALSE(zoo_find("funk-complex-form").flags.homogeneous_complex);
  const auto& ce = zoo_find("complex-euclidean").flags;
  CHECK((ce.projectively_flat_real && ce.dually_flat_real && ce.complex_pf && ce.complex_df));
  CHECK_THROWS_AS(zoo_find("no-such-metric"), UnknownMetric);
}

TEST_CASE("zoo: parameter validation") {
  CHECK_THROWS_AS(make_zoo_metric("complex-minkowski-phi", 2, {{"eps", 0.3}}), UsageError);
  CHECK_NOTHROW(make_zoo_metric("complex-minkowski-phi", 2, {{"eps", -0.2}}));
  CHECK_THROWS_AS(make_zoo_metric("perturbed-family", 2, {{"bogus", 1.0}}), UsageError);
  CHECK_THROWS_AS(make_zoo_metric("complex-hermitian-const", 2, {{"offdiag_re", 2.0}}), UsageError);
  CHECK_THROWS_AS(make_zoo_metric("euclidean-real", 0), UsageError);
  const auto m = make_zoo_metric("perturbed-family", 2, {{"t", 0.05}});
  CHECK(m.params.at("t") == 0.05);
}

TEST_CASE("zoo: every metric is positive on nonzero tangents across its domain") {
  for (const auto& e : zoo_list()) {
    for (int dim : {1, 2, 3}) {
      const auto m = e.build(dim, e.defaults);
      SampleSpec spec;
      spec.seed = 99;
      spec.count = 1000;
      for (const auto& s : generate_samples(m, spec)) {
        REQUIRE(evaluate_packed(m, s.x, s.u) > 0.0);
      }
    }
  }
}

TEST_CASE("funk domain is the open unit ball (with the differentiation margin)") {
  const auto funk = make_zoo_metric("funk-real", 2);
  CHECK(funk.contains(std::vector<double>{0.999, 0.0}));
  CHECK_FALSE(funk.contains(std::vector<double>{1.0, 0.0}));
  CHECK_FALSE(funk.contains(std::vector<double>{0.8, 0.7}));
  CHECK_FALSE(funk.contains(std::vector<double>{1.0 - 1e-7, 0.0}));
}

TEST_CASE("scaled wraps the evaluators") {
  const auto m = make_zoo_metric("perturbed-family", 2);
  const auto m3 = scaled(m, 3.0);
  const ComplexTangentSample s{{cd(0.1, 0.2), cd(-0.3)}, {cd(1, 1), cd(0.5)}};
  CHECK(evaluate(m3, s) == doctest::Approx(3.0 * evaluate(m, s)));
  CHECK_THROWS_AS(scaled(m, 0.0), UsageError);
}

TEST_CASE("sampling is reproducible and stays in the region") {
  const auto m = make_zoo_metric("funk-real", 3);
  SampleSpec spec;
  spec.seed = 42;
  spec.count = 300;
  const auto a = generate_samples(m, spec);
  const auto b = generate_samples(m, spec);
  REQUIRE(a.size() == 300);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].x == b[k].x);
    CHECK(a[k].u == b[k].u);
    CHECK(oracle::dot(a[k].x, a[k].x) < 0.64);
    CHECK(oracle::dot(a[k].u, a[k].u) == doctest::Approx(1.0));
  }
  spec.seed = 43;
  CHECK(generate_samples(m, spec)[0].x != a[0].x);

  // First draws of the documented stream are pinned so platform drift is caught.
  SampleStream s(1);
  CHECK(s.uniform() == doctest::Approx(0.13387664401253263).epsilon(1e-15));

  SampleSpec box = spec;
  box.region = BaseRegion::Box;
  box.radius = 0.5;
  for (const auto& smp : generate_samples(m, box)) {
    for (double xi : smp.x) CHECK(std::abs(xi) <= 0.5);
  }
}
