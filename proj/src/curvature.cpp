#include "gm/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace gm {

namespace {

struct Derivatives {
  std::array<double, 4> g{};                           // g_mumu
  std::array<std::array<double, 4>, 4> d1{};           // d1[mu][rho]
  std::array<std::array<std::array<double, 4>, 4>, 4> d2{};  // d2[mu][rho][sig]
  double residual = 0.0;
};

// Richardson extrapolation of a sequence computed at h, h/2, h/4 with an
// error series in h^2; returns the order-6 value and tracks the residual.
double richardson(double a, double b, double c, double& residual) {
  const double r1 = (4.0 * b - a) / 3.0;
  const double r2 = (4.0 * c - b) / 3.0;
  const double out = (16.0 * r2 - r1) / 15.0;
  residual = std::max(residual, std::abs(out - r2));
  return out;
}

Derivatives metric_derivatives(const MetricField& metric, const Vector4& x,
                               double base) {
  Derivatives out;
  std::array<double, 4> h;
  for (int r = 0; r < 4; ++r) h[r] = base * std::max(1.0, std::abs(x[r]));

  auto eval = [&](int mu, const Vector4& p) {
    const double v = metric.components[size_t(mu)](p);
    if (!std::isfinite(v))
      throw std::runtime_error(
          "curvature_at: metric component not finite near the point");
    return v;
  };

  for (int mu = 0; mu < 4; ++mu) {
    out.g[size_t(mu)] = eval(mu, x);
    for (int r = 0; r < 4; ++r) {
      double c1[3], c2[3];
      for (int level = 0; level < 3; ++level) {
        const double hh = h[r] / double(1 << level);
        Vector4 xp = x, xm = x;
        xp[r] += hh;
        xm[r] -= hh;
        const double fp = eval(mu, xp), fm = eval(mu, xm);
        c1[level] = (fp - fm) / (2.0 * hh);
        c2[level] = (fp - 2.0 * out.g[size_t(mu)] + fm) / (hh * hh);
      }
      out.d1[size_t(mu)][size_t(r)] =
          richardson(c1[0], c1[1], c1[2], out.residual);
      out.d2[size_t(mu)][size_t(r)][size_t(r)] =
          richardson(c2[0], c2[1], c2[2], out.residual);
    }
    for (int r = 0; r < 4; ++r)
      for (int s = r + 1; s < 4; ++s) {
        double cm[3];
        for (int level = 0; level < 3; ++level) {
          const double hr = h[r] / double(1 << level);
          const double hs = h[s] / double(1 << level);
          Vector4 pp = x, pm = x, mp = x, mm = x;
          pp[r] += hr; pp[s] += hs;
          pm[r] += hr; pm[s] -= hs;
          mp[r] -= hr; mp[s] += hs;
          mm[r] -= hr; mm[s] -= hs;
          cm[level] = (eval(mu, pp) - eval(mu, pm) - eval(mu, mp) +
                       eval(mu, mm)) /
                      (4.0 * hr * hs);
        }
        const double v = richardson(cm[0], cm[1], cm[2], out.residual);
        out.d2[size_t(mu)][size_t(r)][size_t(s)] = v;
        out.d2[size_t(mu)][size_t(s)][size_t(r)] = v;
      }
  }
  return out;
}

}  // namespace

CurvatureReport curvature_at(const MetricField& metric, const Vector4& x,
                             double kappa, double h) {
  if (h == 0.0 || (h > 0.0 && !(x[0] + h != x[0])))
    throw std::invalid_argument("curvature_at: step underflow");
  const double base = h > 0.0 ? h : 1e-2;
  Derivatives d = metric_derivatives(metric, x, base);

  std::array<double, 4> inv;  // g^mumu
  for (int mu = 0; mu < 4; ++mu) {
    if (d.g[size_t(mu)] == 0.0)
      throw std::runtime_error("curvature_at: degenerate metric component");
    inv[size_t(mu)] = 1.0 / d.g[size_t(mu)];
  }

  // Diagonal-metric Christoffels and their analytic derivatives in terms of
  // the finite-difference tables.
  auto gamma = [&](int r, int m, int n) {
    double acc = 0.0;
    if (r == n) acc += d.d1[size_t(r)][size_t(m)];
    if (r == m) acc += d.d1[size_t(r)][size_t(n)];
    if (m == n) acc -= d.d1[size_t(m)][size_t(r)];
    return 0.5 * inv[size_t(r)] * acc;
  };
  auto dgamma = [&](int s, int r, int m, int n) {
    double acc = 0.0, dacc = 0.0;
    if (r == n) {
      acc += d.d1[size_t(r)][size_t(m)];
      dacc += d.d2[size_t(r)][size_t(m)][size_t(s)];
    }
    if (r == m) {
      acc += d.d1[size_t(r)][size_t(n)];
      dacc += d.d2[size_t(r)][size_t(n)][size_t(s)];
    }
    if (m == n) {
      acc -= d.d1[size_t(m)][size_t(r)];
      dacc -= d.d2[size_t(m)][size_t(r)][size_t(s)];
    }
    const double dinv =
        -inv[size_t(r)] * inv[size_t(r)] * d.d1[size_t(r)][size_t(s)];
    return 0.5 * (dinv * acc + inv[size_t(r)] * dacc);
  };

  CurvatureReport rep;
  rep.point = x;
  rep.step = base;
  rep.derivative_error = d.residual;
  for (int r = 0; r < 4; ++r)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        rep.christoffel[size_t(r)][size_t(m)][size_t(n)] = gamma(r, m, n);

  // R^rho_{sigma mu nu} = partial_nu Gamma^rho_{mu sigma}
  //                     - partial_mu Gamma^rho_{nu sigma}
  //                     + Gamma^rho_{nu lam} Gamma^lam_{mu sigma}
  //                     - Gamma^rho_{mu lam} Gamma^lam_{nu sigma},
  // contracted to R_{sigma nu} = R^lam_{sigma lam nu}.
  for (int s = 0; s < 4; ++s)
    for (int n = 0; n < 4; ++n) {
      double acc = 0.0;
      for (int l = 0; l < 4; ++l) {
        acc += dgamma(n, l, l, s) - dgamma(l, l, n, s);
        for (int k = 0; k < 4; ++k)
          acc += gamma(l, n, k) * gamma(k, l, s) -
                 gamma(l, l, k) * gamma(k, n, s);
      }
      rep.ricci(s, n) = acc;
    }

  rep.scalar = 0.0;
  for (int m = 0; m < 4; ++m) rep.scalar += inv[size_t(m)] * rep.ricci(m, m);

  rep.einstein = rep.ricci;
  for (int m = 0; m < 4; ++m)
    rep.einstein(m, m) -= 0.5 * d.g[size_t(m)] * rep.scalar;

  if (kappa == 0.0)
    throw std::invalid_argument("curvature_at: kappa must be nonzero");
  rep.stress_energy = rep.einstein / kappa;
  return rep;
}

StressEnergyScan stress_energy_scan(const MetricField& metric,
                                    const std::vector<Vector4>& points,
                                    double kappa) {
  StressEnergyScan scan;
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      scan.reports.push_back(curvature_at(metric, points[i], kappa));
    } catch (const std::exception& e) {
      scan.failures.emplace_back(i, e.what());
    }
  }
  return scan;
}

}  // namespace gm
