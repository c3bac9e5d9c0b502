#include "finsler/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {
namespace {

using cd = std::complex<double>;

void check_sample(const MetricField& metric, std::span<const double> x, std::span<const double> u) {
  const auto m = static_cast<std::size_t>(metric.real_dim());
  if (x.size() != m || u.size() != m) {
    throw UsageError(metric.name + ": expected " + std::to_string(m) + " real coordinates");
  }
  bool nonzero = false;
  for (double ui : u) nonzero = nonzero || ui != 0.0;
  if (!nonzero) throw UsageError(metric.name + ": jets need a nonzero tangent vector");
  if (!metric.contains(x)) throw DomainError(metric.name + ": base point outside the domain");
}

void allocate(RealJetBlocks& b, int m) {
  b.dx = Eigen::VectorXd::Zero(m);
  b.du = Eigen::VectorXd::Zero(m);
  b.xu = Eigen::MatrixXd::Zero(m, m);
  b.uu = Eigen::MatrixXd::Zero(m, m);
}

bool finite(const RealJetBlocks& b) {
  return std::isfinite(b.value) && b.dx.allFinite() && b.du.allFinite() && b.xu.allFinite() &&
         b.uu.allFinite();
}

}  // namespace

RealJet2 packed_jet(const MetricField& metric, std::span<const double> x, std::span<const double> u,
                    const JetOptions& opts) {
  check_sample(metric, x, u);
  const int m = metric.real_dim();
  if (m > opts.max_real_dim) {
    throw UsageError(metric.name + ": real dimension " + std::to_string(m) + " exceeds the jet cap " +
                     std::to_string(opts.max_real_dim));
  }
  RealJet2 jet;
  allocate(jet.f, m);
  allocate(jet.f2, m);

  // Variables 0..m-1 are x, m..2m-1 are u.
  std::vector<HyperDual> xs(x.begin(), x.end());
  std::vector<HyperDual> us(u.begin(), u.end());
  auto seed = [&](int var, bool second, double on) {
    HyperDual& h = var < m ? xs[static_cast<std::size_t>(var)] : us[static_cast<std::size_t>(var - m)];
    (second ? h.d2 : h.d1) = on;
  };
  auto run = [&](int p, int q) {
    seed(p, false, 1.0);
    seed(q, true, 1.0);
    const HyperDual f = metric.dual(xs, us);
    seed(p, false, 0.0);
    seed(q, true, 0.0);
    if (!isfinite(f)) throw NumericsError(metric.name + ": non-finite derivative");
    return std::pair{f, f * f};
  };

  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) {
      const auto [f, f2] = run(b, m + a);
      jet.f.xu(a, b) = f.d12;
      jet.f2.xu(a, b) = f2.d12;
      jet.f.dx(b) = f.d1;
      jet.f2.dx(b) = f2.d1;
      jet.f.du(a) = f.d2;
      jet.f2.du(a) = f2.d2;
      jet.f.value = f.value;
      jet.f2.value = f2.value;
    }
  }
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const auto [f, f2] = run(m + a, m + b);
      jet.f.uu(a, b) = jet.f.uu(b, a) = f.d12;
      jet.f2.uu(a, b) = jet.f2.uu(b, a) = f2.d12;
    }
  }
  return jet;
}

RealJet2 real_jet(const MetricField& metric, const RealTangentSample& s, const JetOptions& opts) {
  if (metric.kind != MetricKind::Real) {
    throw UsageError(metric.name + ": real_jet expects a real metric (convert with to_real)");
  }
  return packed_jet(metric, s.x, s.u, opts);
}

ComplexJet2 complex_jet(const MetricField& metric, const ComplexTangentSample& s, const JetOptions& opts) {
  if (metric.kind != MetricKind::Complex) {
    throw UsageError(metric.name + ": complex_jet expects a complex metric");
  }
  const RealTangentSample r = pack(s);
  return wirtinger(packed_jet(metric, r.x, r.u, opts));
}

ComplexJetBlocks wirtinger(const RealJetBlocks& real) {
  const auto m = real.dx.size();
  if (m % 2 != 0) throw UsageError("Wirtinger assembly needs an even real dimension");
  const auto n = m / 2;
  const cd I(0.0, 1.0);
  ComplexJetBlocks c;
  c.value = real.value;
  c.dz.resize(n);
  c.dv.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    c.dz(j) = 0.5 * (real.dx(j) - I * real.dx(j + n));
    c.dv(j) = 0.5 * (real.du(j) - I * real.du(j + n));
  }
  c.dzbar = c.dz.conjugate();
  c.dvbar = c.dv.conjugate();

  // D(b, a) = ∂²/∂x^b∂u^a; primes denote the imaginary-part index (+n).
  auto D = [&](Eigen::Index b, Eigen::Index a) { return real.xu(a, b); };
  c.zv.resize(n, n);
  c.zbarv.resize(n, n);
  c.zvbar.resize(n, n);
  c.vvbar.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double xu = D(j, i), xu_ = D(j, i + n), x_u = D(j + n, i), x_u_ = D(j + n, i + n);
      c.zv(i, j) = 0.25 * cd(xu - x_u_, -(xu_ + x_u));
      c.zbarv(i, j) = 0.25 * cd(xu + x_u_, x_u - xu_);
      c.zvbar(i, j) = 0.25 * cd(xu + x_u_, xu_ - x_u);
    }
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      c.vvbar(a, b) = 0.25 * cd(real.uu(a, b) + real.uu(a + n, b + n), real.uu(a, b + n) - real.uu(a + n, b));
    }
  }
  return c;
}

ComplexJet2 wirtinger(const RealJet2& real) { return {wirtinger(real.f), wirtinger(real.f2)}; }

RealJet2 fd_packed_jet(const MetricField& metric, std::span<const double> x, std::span<const double> u,
                       const FdOptions& opts) {
  check_sample(metric, x, u);
  const int m = metric.real_dim();
  std::vector<double> point(x.begin(), x.end());
  point.insert(point.end(), u.begin(), u.end());
  std::vector<double> h(point.size());
  for (std::size_t k = 0; k < point.size(); ++k) h[k] = opts.step * (1.0 + std::abs(point[k]));

  auto f_at = [&](const std::vector<double>& p) {
    const std::span<const double> px(p.data(), static_cast<std::size_t>(m));
    const std::span<const double> pu(p.data() + m, static_cast<std::size_t>(m));
    if (!metric.contains(px)) throw DomainError(metric.name + ": finite-difference stencil leaves the domain");
    const double f = metric.value(px, pu);
    if (!std::isfinite(f)) throw NumericsError(metric.name + ": non-finite value in stencil");
    return f;
  };
  // Returns {d/dp, d²/dp dq} for both F and F² with step scale `s`.
  struct Est {
    double d1, d1sq, d12, d12sq;
  };
  auto estimate = [&](int p, int q, double s) {
    std::vector<double> pt = point;
    const double hp = h[static_cast<std::size_t>(p)] * s, hq = h[static_cast<std::size_t>(q)] * s;
    auto at = [&](double sp, double sq) {
      pt = point;
      pt[static_cast<std::size_t>(p)] += sp * hp;
      pt[static_cast<std::size_t>(q)] += sq * hq;
      return f_at(pt);
    };
    const double fpp = at(1, 1), fpm = at(1, -1), fmp = at(-1, 1), fmm = at(-1, -1);
    pt = point;
    pt[static_cast<std::size_t>(p)] += hp;
    const double fp = f_at(pt);
    pt[static_cast<std::size_t>(p)] -= 2 * hp;
    const double fm = f_at(pt);
    return Est{(fp - fm) / (2 * hp), (fp * fp - fm * fm) / (2 * hp),
               (fpp - fpm - fmp + fmm) / (4 * hp * hq),
               (fpp * fpp - fpm * fpm - fmp * fmp + fmm * fmm) / (4 * hp * hq)};
  };
  auto combined = [&](int p, int q) {
    const Est e = estimate(p, q, 1.0);
    if (!opts.richardson) return e;
    const Est half = estimate(p, q, 0.5);
    auto r = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };
    return Est{r(e.d1, half.d1), r(e.d1sq, half.d1sq), r(e.d12, half.d12), r(e.d12sq, half.d12sq)};
  };

  RealJet2 jet;
  allocate(jet.f, m);
  allocate(jet.f2, m);
  jet.f.value = f_at(point);
  jet.f2.value = jet.f.value * jet.f.value;
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) {
      const Est e = combined(b, m + a);
      jet.f.xu(a, b) = e.d12;
      jet.f2.xu(a, b) = e.d12sq;
    }
    const Est e = combined(b, b);
    jet.f.dx(b) = e.d1;
    jet.f2.dx(b) = e.d1sq;
  }
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const Est e = combined(m + a, m + b);
      jet.f.uu(a, b) = jet.f.uu(b, a) = e.d12;
      jet.f2.uu(a, b) = jet.f2.uu(b, a) = e.d12sq;
      if (a == b) {
        jet.f.du(a) = e.d1;
        jet.f2.du(a) = e.d1sq;
      }
    }
  }
  if (!finite(jet.f) || !finite(jet.f2)) throw NumericsError(metric.name + ": non-finite difference quotient");
  return jet;
}

RealJet2 fd_jet(const MetricField& metric, const RealTangentSample& s, const FdOptions& opts) {
  if (metric.kind != MetricKind::Real) {
    throw UsageError(metric.name + ": real fd_jet expects a real metric");
  }
  return fd_packed_jet(metric, s.x, s.u, opts);
}

ComplexJet2 fd_jet(const MetricField& metric, const ComplexTangentSample& s, const FdOptions& opts) {
  if (metric.kind != MetricKind::Complex) {
    throw UsageError(metric.name + ": complex fd_jet expects a complex metric");
  }
  const RealTangentSample r = pack(s);
  return wirtinger(fd_packed_jet(metric, r.x, r.u, opts));
}

namespace {

template <class M>
double block_discrepancy(const M& a, const M& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / (1.0 + a.cwiseAbs().maxCoeff());
}

double blocks_discrepancy(const RealJetBlocks& a, const RealJetBlocks& b) {
  return std::max({std::abs(a.value - b.value) / (1.0 + std::abs(a.value)), block_discrepancy(a.dx, b.dx),
                   block_discrepancy(a.du, b.du), block_discrepancy(a.xu, b.xu),
                   block_discrepancy(a.uu, b.uu)});
}

}  // namespace

double jet_discrepancy(const RealJet2& a, const RealJet2& b) {
  return std::max(blocks_discrepancy(a.f, b.f), blocks_discrepancy(a.f2, b.f2));
}

}  // namespace finsler
