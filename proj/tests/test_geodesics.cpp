#include <doctest.h>

#include "finsler/errors.hpp"
#include "finsler/geodesics.hpp"
#include "finsler/sampling.hpp"
#include "finsler/zoo.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

double endpoint_error(const GeodesicTrace& a, const GeodesicTrace& ref) {
  const auto& p = a.samples.back().x;
  const auto& q = ref.samples.back().x;
  double e = 0;
  for (std::size_t k = 0; k < p.size(); ++k) e = std::max(e, std::abs(p[k] - q[k]));
  return e;
}

}  // namespace

TEST_CASE("spray: examples") {
  const auto e = make_zoo_metric("euclidean-real", 2);
  CHECK(spray_coefficients(e, {{0.2, 0.3}, {0.6, -0.8}}).norm() == 0.0);

  const auto s = make_zoo_metric("scaled-euclidean-real", 2, {{"c", 0.1}});
  const auto G = spray_coefficients(s, {{0, 0}, {0, 1}});
  CHECK(G(0) == doctest::Approx(-0.05).epsilon(1e-14));
  CHECK(std::abs(G(1)) < 1e-15);

  // Funk: 2G = F·u (projective factor P = F/2), checked on 50 samples.
  const auto funk = make_zoo_metric("funk-real", 2);
  SampleSpec spec;
  spec.seed = 33;
  spec.count = 50;
  for (const auto& smp : generate_samples(funk, spec)) {
    const auto Gf = spray_coefficients(funk, smp);
    const double F = oracle::funk(smp.x, smp.u);
    for (int a = 0; a < 2; ++a) CHECK(2 * Gf(a) == doctest::Approx(F * smp.u[a]).epsilon(1e-6));
  }
}

TEST_CASE("spray: singular fundamental tensor") {
  // F = |u¹| ignores u², so g = diag(1, 0).
  const auto m = make_metric("degenerate", MetricKind::Real, 2, {},
                             [](auto, auto u) { return finsler::abs(u[0]); });
  CHECK_THROWS_AS(spray_coefficients(m, {{0, 0}, {1, 0}}), SingularMetric);
}

TEST_CASE("integrate: examples") {
  const auto e = make_zoo_metric("euclidean-real", 2);
  const std::vector<double> x0{0, 0}, u0{1, 0};
  const auto tr = integrate_geodesic(e, x0, u0, 1.0, 100);
  CHECK(tr.termination == Termination::Completed);
  REQUIRE(tr.samples.size() == 101);
  CHECK(tr.samples.back().t == doctest::Approx(1.0));
  CHECK(tr.samples.back().x[0] == doctest::Approx(1.0));
  CHECK(tr.samples.back().x[1] == 0.0);
  CHECK(tr.straightness_deviation == 0.0);
  CHECK(tr.path_length == doctest::Approx(1.0));
  for (std::size_t k = 1; k < tr.samples.size(); ++k) CHECK(tr.samples[k].t > tr.samples[k - 1].t);

  const auto funk = make_zoo_metric("funk-real", 2);
  const std::vector<double> uf{0.6, 0.8};
  const auto tf = integrate_geodesic(funk, x0, uf, 1.0, 1000);
  CHECK(tf.straightness_deviation <= 1e-6);
  CHECK(tf.termination != Termination::StepFailure);

  const auto se = make_zoo_metric("scaled-euclidean-real", 2, {{"c", 0.5}});
  const std::vector<double> us{0, 1};
  const auto ts = integrate_geodesic(se, x0, us, 1.0, 1000);
  CHECK(ts.termination == Termination::Completed);
  CHECK(ts.straightness_deviation > 1e-3);

  CHECK_THROWS_AS(integrate_geodesic(funk, std::vector<double>{1.5, 0}, uf, 1.0, 10), DomainError);
  CHECK_THROWS_AS(integrate_geodesic(funk, x0, std::vector<double>{0, 0}, 1.0, 10), UsageError);
  CHECK_THROWS_AS(integrate_geodesic(funk, x0, uf, 1.0, 0), UsageError);
}

TEST_CASE("integrate: leaving the domain stops early with a partial trace") {
  const auto funk = make_zoo_metric("funk-real", 2);
  const std::vector<double> x0{0.5, 0}, u0{1, 0};
  const auto tr = integrate_geodesic(funk, x0, u0, 10.0, 1000);
  CHECK(tr.termination == Termination::LeftDomain);
  CHECK(tr.samples.size() < 1001);
  CHECK_FALSE(tr.message.empty());
  for (const auto& p : tr.samples) CHECK(oracle::dot(p.x, p.x) < 1.0);
}

TEST_CASE("RK4 convergence order") {
  const auto se = make_zoo_metric("scaled-euclidean-real", 2, {{"c", 0.5}});
  const std::vector<double> x0{0.1, -0.2}, u0{0.3, 1.0};
  const auto ref = integrate_geodesic(se, x0, u0, 1.0, 8192);
  double prev = 0;
  for (int n : {16, 32, 64}) {
    const double err = endpoint_error(integrate_geodesic(se, x0, u0, 1.0, n), ref);
    if (prev > 0) CHECK(prev / err >= 8.0);
    prev = err;
  }
}

TEST_CASE("Funk geodesics are straight from 20 seeded initial conditions") {
  const auto funk = make_zoo_metric("funk-real", 2);
  SampleSpec spec;
  spec.seed = 20;
  spec.count = 20;
  for (const auto& s : generate_samples(funk, spec)) {
    const auto tr = integrate_geodesic(funk, s.x, s.u, 0.5, 500);
    CHECK(tr.termination != Termination::StepFailure);
    CHECK(tr.samples.size() > 10);
    CHECK(tr.straightness_deviation <= 1e-6);
  }
}

TEST_CASE("distance_to_line") {
  const std::vector<double> o{0, 0}, d{2, 0}, p{5, -3};
  CHECK(distance_to_line(p, o, d) == doctest::Approx(3.0));
}
