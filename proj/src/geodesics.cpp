#include "finsler/geodesics.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "finsler/calculus.hpp"
#include "finsler/errors.hpp"

namespace finsler {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::LeftDomain: return "left-domain";
    case Termination::StepFailure: return "step-failure";
  }
  return "?";
}

Eigen::VectorXd spray_coefficients(const MetricField& metric, const RealTangentSample& s) {
  if (metric.kind != MetricKind::Real) throw UsageError(metric.name + ": spray needs a real metric");
  const RealJet2 jet = real_jet(metric, s);
  const Eigen::MatrixXd g = 0.5 * jet.f2.uu;
  const Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw SingularMetric(metric.name + ": fundamental tensor not positive definite");
  }
  const Eigen::Map<const Eigen::VectorXd> u(s.u.data(), static_cast<Eigen::Index>(s.u.size()));
  const Eigen::VectorXd rhs = jet.f2.xu * u - jet.f2.dx;
  return 0.25 * llt.solve(rhs);
}

double distance_to_line(std::span<const double> p, std::span<const double> origin,
                        std::span<const double> direction) {
  const auto m = static_cast<Eigen::Index>(p.size());
  const Eigen::Map<const Eigen::VectorXd> pv(p.data(), m), o(origin.data(), m), d(direction.data(), m);
  const Eigen::VectorXd dn = d.normalized();
  const Eigen::VectorXd w = pv - o;
  return (w - w.dot(dn) * dn).norm();
}

GeodesicTrace integrate_geodesic(const MetricField& metric, std::span<const double> x0,
                                 std::span<const double> u0, double horizon, int steps,
                                 const GeodesicOptions& opts) {
  if (metric.kind != MetricKind::Real) throw UsageError(metric.name + ": geodesics need a real metric");
  const auto m = static_cast<Eigen::Index>(metric.real_dim());
  if (static_cast<Eigen::Index>(x0.size()) != m || static_cast<Eigen::Index>(u0.size()) != m) {
    throw UsageError("initial condition has the wrong dimension");
  }
  if (steps < 1 || !(horizon > 0.0)) throw UsageError("need steps >= 1 and a positive horizon");
  if (!metric.contains(x0)) throw DomainError(metric.name + ": initial point outside the domain");
  if (Eigen::Map<const Eigen::VectorXd>(u0.data(), m).norm() == 0.0) {
    throw UsageError("initial velocity must be nonzero");
  }

  using State = Eigen::VectorXd;  // (x, ẋ)
  auto rhs = [&](const State& y) {
    RealTangentSample s;
    s.x.assign(y.data(), y.data() + m);
    s.u.assign(y.data() + m, y.data() + 2 * m);
    if (!metric.contains(s.x)) throw DomainError("stage point outside the domain");
    State dy(2 * m);
    dy.head(m) = y.tail(m);
    dy.tail(m) = -2.0 * spray_coefficients(metric, s);
    return dy;
  };

  GeodesicTrace trace;
  const double dt = horizon / steps;
  State y(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    y(k) = x0[static_cast<std::size_t>(k)];
    y(m + k) = u0[static_cast<std::size_t>(k)];
  }
  auto record = [&](double t) {
    trace.samples.push_back({t, std::vector<double>(y.data(), y.data() + m),
                             std::vector<double>(y.data() + m, y.data() + 2 * m)});
  };
  record(0.0);

  for (int step = 1; step <= steps; ++step) {
    State next;
    try {
      const State k1 = rhs(y);
      const State k2 = rhs(y + 0.5 * dt * k1);
      const State k3 = rhs(y + 0.5 * dt * k2);
      const State k4 = rhs(y + dt * k3);
      next = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const DomainError& e) {
      trace.termination = Termination::LeftDomain;
      trace.message = e.what();
      break;
    } catch (const Error& e) {
      trace.termination = Termination::StepFailure;
      trace.message = e.what();
      break;
    }
    if (!next.allFinite()) {
      trace.termination = Termination::StepFailure;
      trace.message = "non-finite state";
      break;
    }
    const std::span<const double> nx(next.data(), static_cast<std::size_t>(m));
    if (!metric.contains(nx, opts.domain_margin)) {
      trace.termination = Termination::LeftDomain;
      trace.message = "trajectory reached the domain margin";
      break;
    }
    y = std::move(next);
    record(step * dt);
  }

  for (std::size_t k = 1; k < trace.samples.size(); ++k) {
    const auto& a = trace.samples[k - 1].x;
    const auto& b = trace.samples[k].x;
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (b[i] - a[i]) * (b[i] - a[i]);
    trace.path_length += std::sqrt(d2);
  }
  if (trace.path_length > 0.0) {
    double worst = 0.0;
    for (const auto& p : trace.samples) worst = std::max(worst, distance_to_line(p.x, x0, u0));
    trace.straightness_deviation = worst / trace.path_length;
  }
  return trace;
}

}  // namespace finsler
