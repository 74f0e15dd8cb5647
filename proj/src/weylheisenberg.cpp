#include "gm/weylheisenberg.hpp"

#include <cmath>
#include <limits>

#include "gm/laguerre.hpp"
#include "gm/quadrature.hpp"

namespace gm {
namespace {

const Complex kI(0.0, 1.0);

/// Partial Fourier transform of the apodization in its frequency slot,
/// Pihat_w(b, y) = (2pi)^{-1/2} \int Pi(b, w) e^{-iwy} dw. Closed forms for
/// the Gaussian and from-probe families; quadrature otherwise (requires
/// Pi(b, .) integrable).
Complex pihat_w(const Apodization& pi, double b, double y) {
  switch (pi.provenance) {
    case Apodization::Provenance::Gaussian:
      return std::exp(-b * b / (2.0 * pi.sigma * pi.sigma)) * pi.tau *
             std::exp(-pi.tau * pi.tau * y * y / 2.0);
    case Apodization::Provenance::FromProbe: {
      const Probe& psi = *pi.probe;
      return std::sqrt(2.0 * M_PI) * std::conj(psi(-y - b / 2.0)) *
             psi(-y + b / 2.0);
    }
    case Apodization::Provenance::ConstantOne:
      throw std::logic_error("pihat_w: constant-one handled by dispatch");
    case Apodization::Provenance::Custom: {
      const double W = 40.0;
      return integrate(
                 [&](double w) {
                   return pi.eval(b, w) * std::exp(-kI * w * y);
                 },
                 -W, W, 1e-9)
                 .value /
             std::sqrt(2.0 * M_PI);
    }
  }
  throw std::logic_error("pihat_w: unknown provenance");
}

double gauss_density(double x, double var) {
  return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
}

std::function<Complex(double)> vhat_of(const PhaseSpaceFunction& f) {
  if (f.vhat) return f.vhat;
  auto v = f.v;
  return [v](double tau) {
    const double W = 60.0;
    return integrate(
               [&](double w) { return v(w) * std::exp(-kI * tau * w); }, -W,
               W, 1e-9)
               .value /
           std::sqrt(2.0 * M_PI);
  };
}

Grid1D default_kernel_grid() { return Grid1D::from_range(-8.0, 8.0, 257); }

}  // namespace

DensityOperator DensityOperator::from_matrix(Eigen::MatrixXcd m, bool warning) {
  if (m.rows() != m.cols() || m.rows() < 2)
    throw std::invalid_argument("DensityOperator: need a square matrix, N >= 2");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("DensityOperator: matrix not Hermitian");
  if (std::abs(m.trace() - Complex(1.0)) > 1e-10)
    throw std::invalid_argument("DensityOperator: trace must be 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("DensityOperator: negative eigenvalue");
  DensityOperator d;
  d.dim = int(m.rows());
  d.matrix = std::move(m);
  d.truncation_warning = warning;
  return d;
}

Apodization Apodization::gaussian(double sigma, double tau) {
  if (!(sigma > 0.0) || !(tau > 0.0))
    throw std::invalid_argument("Apodization: widths must be > 0");
  Apodization a;
  a.provenance = Provenance::Gaussian;
  a.sigma = sigma;
  a.tau = tau;
  a.eval = [sigma, tau](double b, double w) {
    return Complex(std::exp(-b * b / (2.0 * sigma * sigma)) *
                   std::exp(-w * w / (2.0 * tau * tau)));
  };
  return a;
}

Apodization Apodization::constant_one() {
  Apodization a;
  a.provenance = Provenance::ConstantOne;
  a.eval = [](double, double) { return Complex(1.0); };
  return a;
}

Apodization Apodization::custom(std::function<Complex(double, double)> f) {
  Apodization a;
  a.provenance = Provenance::Custom;
  a.eval = std::move(f);
  return a;
}

Eigen::MatrixXcd displacement_matrix(double b, double w,
                                     const FockTruncation& trunc) {
  const int N = trunc.N;
  const Complex z(b / std::sqrt(2.0), w / std::sqrt(2.0));
  const double x = std::norm(z);
  const double damp = std::exp(-x / 2.0);

  std::vector<double> lg(N + 1);
  for (int n = 0; n <= N; ++n) lg[n] = std::lgamma(double(n + 1));

  Eigen::MatrixXcd D(N, N);
  Complex zp(1.0, 0.0), zq(1.0, 0.0);  // z^a and (-conj z)^a
  for (int a = 0; a < N; ++a) {
    if (a > 0) {
      zp *= z;
      zq *= -std::conj(z);
    }
    // L_k^{(a)}(x) by the three-term recurrence along k.
    double Lkm1 = 0.0, Lk = 1.0;
    for (int k = 0; k + a < N; ++k) {
      if (k > 0) {
        const double Lnext =
            ((2 * (k - 1) + 1 + a - x) * Lk - (k - 1 + a) * Lkm1) / double(k);
        Lkm1 = Lk;
        Lk = Lnext;
      }
      const double ratio = std::exp(0.5 * (lg[k] - lg[k + a]));
      D(k + a, k) = ratio * damp * zp * Lk;
      D(k, k + a) = ratio * damp * zq * Lk;
    }
  }
  return D;
}

Complex symplectic_fourier(const std::function<Complex(double, double)>& F,
                           const PhaseSpacePoint& p, double radius,
                           double tol) {
  return integrate(
             [&](double bp) {
               Complex inner = integrate(
                                   [&](double wp) {
                                     return F(bp, wp) *
                                            std::exp(-kI * p.b * wp);
                                   },
                                   -radius, radius, tol / 10.0)
                                   .value;
               return std::exp(kI * bp * p.w) * inner;
             },
             -radius, radius, tol)
             .value /
         (2.0 * M_PI);
}

Apodization apodization_from_probe(const Probe& psi) {
  Apodization a;
  a.provenance = Apodization::Provenance::FromProbe;
  a.probe = psi;
  if (psi.kind == Probe::Kind::AnalyticGaussian) {
    const double s2 = psi.sigma * psi.sigma;
    a.eval = [s2](double b, double w) {
      return Complex(std::exp(-b * b / (4.0 * s2)) *
                     std::exp(-s2 * w * w / 4.0));
    };
  } else {
    Probe pr = psi;
    a.eval = [pr](double b, double w) {
      const double r = pr.support_radius() + std::abs(b);
      // <psi | D(-b,-w) psi> with (D(-b,-w) psi)(t) = e^{-iwb/2} e^{-iwt}
      // psi(t + b).
      return std::exp(-kI * w * b / 2.0) *
             integrate(
                 [&](double t) {
                   return std::conj(pr(t)) * std::exp(-kI * w * t) *
                          pr(t + b);
                 },
                 -r, r, 1e-10)
                 .value;
    };
  }
  return a;
}

double wigner_of_probe(const Probe& psi, const PhaseSpacePoint& p) {
  const double r = 2.0 * (psi.support_radius() + std::abs(p.b));
  Complex v = integrate(
                  [&](double t) {
                    return std::exp(-kI * p.w * t) *
                           std::conj(psi(p.b + t / 2.0)) * psi(p.b - t / 2.0);
                  },
                  -r, r, 1e-10)
                  .value;
  return v.real() / (2.0 * M_PI);
}

DensityOperator boltzmann_planck(double theta, const FockTruncation& trunc) {
  if (!(theta > 0.0))
    throw std::invalid_argument("boltzmann_planck: Theta must be > 0");
  const int N = trunc.N;
  const double q = std::exp(-1.0 / theta);
  Eigen::VectorXd diag(N);
  for (int n = 0; n < N; ++n) diag[n] = std::pow(q, double(n));
  diag *= (1.0 - q);
  const bool warn = std::exp(-double(N) / theta) > 1e-12;
  diag /= diag.sum();
  Eigen::MatrixXcd m = diag.cast<Complex>().asDiagonal();
  return DensityOperator::from_matrix(std::move(m), warn);
}

double laguerre_transform(const std::function<double(double)>& w, int n) {
  if (n < 0) throw std::invalid_argument("laguerre_transform: n >= 0");
  double acc = 0.0;
  double lo = 0.0, hi = 64.0;
  double prev_inc = std::numeric_limits<double>::infinity();
  for (int seg = 0; seg < 10; ++seg) {
    const double inc =
        integrate(
            [&](double u) {
              return Complex(std::exp(-u / 2.0) * laguerre(n, 0, u) * w(u));
            },
            lo, hi, 1e-12)
            .value.real();
    acc += inc;
    if (std::abs(inc) < 1e-13 * std::max(1.0, std::abs(acc))) return acc;
    if (seg > 2 && std::abs(inc) > prev_inc)
      throw QuadratureError("laguerre_transform: divergent tail",
                            {acc, std::abs(inc)});
    prev_inc = std::abs(inc);
    lo = hi;
    hi *= 2.0;
  }
  throw QuadratureError("laguerre_transform: tail did not settle",
                        {acc, prev_inc});
}

Q0Result q0_from_apodization(const Apodization& pi, const FockTruncation& trunc,
                             double radius) {
  const int N = trunc.N;
  double R = radius > 0.0 ? radius : 0.6 * std::sqrt(2.0 * N);

  // Composite Gauss-Legendre 15 tensor rule; panels narrow enough to
  // resolve the Laguerre oscillations of the displacement entries.
  static const double nodes[8] = {0.0,
                                  0.2011940939974345,
                                  0.3941513470775634,
                                  0.5709721726085388,
                                  0.7244177313601701,
                                  0.8482065834104272,
                                  0.9372733924007060,
                                  0.9879925180204854};
  static const double wts[8] = {0.2025782419255613, 0.1984314853271116,
                                0.1861610000155622, 0.1662692058169939,
                                0.1395706779261543, 0.1071592204671719,
                                0.0703660474881081, 0.0307532419961173};
  const int panels = std::max(8, int(std::ceil(2.0 * R / 0.5)));
  const double pw = 2.0 * R / panels;
  std::vector<double> xs, ws;
  for (int p = 0; p < panels; ++p) {
    const double c = -R + (p + 0.5) * pw, h = 0.5 * pw;
    xs.push_back(c);
    ws.push_back(h * wts[0]);
    for (int k = 1; k < 8; ++k) {
      xs.push_back(c - h * nodes[k]);
      ws.push_back(h * wts[k]);
      xs.push_back(c + h * nodes[k]);
      ws.push_back(h * wts[k]);
    }
  }

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  for (size_t ib = 0; ib < xs.size(); ++ib)
    for (size_t iw = 0; iw < xs.size(); ++iw) {
      const Complex c =
          pi.eval(xs[ib], xs[iw]) * ws[ib] * ws[iw] / (2.0 * M_PI);
      if (std::abs(c) < 1e-18) continue;
      M += c * displacement_matrix(xs[ib], xs[iw], trunc);
    }

  Q0Result out;
  out.hermiticity_defect = (M - M.adjoint()).cwiseAbs().maxCoeff();
  out.matrix = 0.5 * (M + M.adjoint());
  out.trace = out.matrix.trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.matrix,
                                                     Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.positive = out.min_eigenvalue >= -1e-8;
  return out;
}

DensityOperator q0_from_laplace_weight(const LaplaceWeight& ell,
                                       const FockTruncation& trunc) {
  const int N = trunc.N;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
  bool warn = false;
  auto add = [&](double t, double mass) {
    if (!(t > 0.5))
      throw std::invalid_argument(
          "q0_from_laplace_weight: support must lie in (1/2, inf)");
    if (mass < 0.0)
      throw std::invalid_argument("q0_from_laplace_weight: weight must be >= 0");
    const double q = (t - 0.5) / (t + 0.5);
    double p = mass * (1.0 - q);
    for (int n = 0; n < N; ++n) {
      diag[n] += p;
      p *= q;
    }
    if (mass * std::pow(q, double(N)) > 1e-12) warn = true;
  };

  for (const auto& atom : ell.atoms) add(atom.t, atom.mass);
  if (ell.density && ell.density_hi > ell.density_lo) {
    for (int n = 0; n < N; ++n) {
      diag[n] += integrate(
                     [&](double t) {
                       const double m = ell.density(t);
                       if (m < 0.0)
                         throw std::invalid_argument(
                             "q0_from_laplace_weight: weight must be >= 0");
                       const double q = (t - 0.5) / (t + 0.5);
                       return Complex(m * (1.0 - q) * std::pow(q, double(n)));
                     },
                     ell.density_lo, ell.density_hi, 1e-12)
                     .value.real();
    }
  }

  const double total = diag.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("q0_from_laplace_weight: weight not normalizable");
  diag /= total;
  Eigen::MatrixXcd m = diag.cast<Complex>().asDiagonal();
  return DensityOperator::from_matrix(std::move(m), warn);
}

OperatorKernel quantize_general(const PhaseSpaceFunction& f,
                                const Apodization& pi) {
  return quantize_general(f, pi, default_kernel_grid());
}

OperatorKernel quantize_general(const PhaseSpaceFunction& f,
                                const Apodization& pi, const Grid1D& grid) {
  using P = Apodization::Provenance;
  if (pi.provenance == P::FromProbe) return quantize(f, *pi.probe, grid);

  switch (f.kind) {
    case PhaseSpaceFunction::Kind::TimeOnly: {
      if (pi.provenance == P::ConstantOne)
        return OperatorKernel::make_multiplier(f.u);
      if (pi.provenance == P::Gaussian) {
        const double var = 1.0 / (pi.tau * pi.tau);
        if (f.u_poly) {
          Poly1 m = gauss_smooth(*f.u_poly, var);
          return OperatorKernel::make_multiplier(
              [m](double t) { return Complex(m(t)); });
        }
        auto u = f.u;
        return OperatorKernel::make_multiplier([u, var](double t) {
          const double r = 10.0 * std::sqrt(var);
          return integrate(
                     [&](double b) { return u(b) * gauss_density(b - t, var); },
                     t - r, t + r, 1e-10)
              .value;
        });
      }
      // Custom: m(t) = (2pi)^{-1/2} \int u(b) Pihat_w(0, b - t) db.
      auto u = f.u;
      Apodization api = pi;
      return OperatorKernel::make_multiplier([u, api](double t) {
        const double R = 40.0;
        return integrate(
                   [&](double b) {
                     return u(b) * pihat_w(api, 0.0, b - t);
                   },
                   t - R, t + R, 1e-8)
                   .value /
               std::sqrt(2.0 * M_PI);
      });
    }
    case PhaseSpaceFunction::Kind::FrequencyOnly: {
      if (pi.provenance == P::ConstantOne)
        return OperatorKernel::make_convolver(f.v, f.v_poly);
      if (pi.provenance == P::Gaussian) {
        const double var = 1.0 / (pi.sigma * pi.sigma);
        if (f.v_poly) {
          Poly1 M = gauss_smooth(*f.v_poly, var);
          return OperatorKernel::make_convolver(
              [M](double w) { return Complex(M(w)); }, M);
        }
        auto v = f.v;
        return OperatorKernel::make_convolver([v, var](double w) {
          const double r = 10.0 * std::sqrt(var);
          return integrate(
                     [&](double wp) {
                       return v(wp) * gauss_density(w - wp, var);
                     },
                     w - r, w + r, 1e-10)
              .value;
        });
      }
      // Custom: M = v * kappa with kappa(D) = (2pi)^{-1} \int Pi(tau, 0)
      // e^{-i D tau} dtau; requires Pi(., 0) integrable.
      auto v = f.v;
      Apodization api = pi;
      return OperatorKernel::make_convolver([v, api](double w) {
        const double T = 40.0, R = 40.0;
        auto kappa = [&](double d) {
          return integrate(
                     [&](double tau) {
                       return api.eval(tau, 0.0) * std::exp(-kI * d * tau);
                     },
                     -T, T, 1e-9)
                     .value /
                 (2.0 * M_PI);
        };
        return integrate(
                   [&](double wp) { return v(wp) * kappa(w - wp); }, w - R,
                   w + R, 1e-7)
            .value;
      });
    }
    case PhaseSpaceFunction::Kind::Separable: {
      if (!f.u || !f.v)
        throw std::invalid_argument(
            "quantize_general: separable symbol needs u, v");
      auto vhat = vhat_of(f);
      const int n = grid.count;
      Eigen::VectorXcd vh(2 * n - 1);
      for (int d = -(n - 1); d <= n - 1; ++d)
        vh[d + n - 1] = vhat(d * grid.step);
      Eigen::MatrixXcd K(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double t = grid.point(i), tp = grid.point(j);
          Complex ub;
          if (pi.provenance == P::ConstantOne) {
            ub = f.u((t + tp) / 2.0) * std::sqrt(2.0 * M_PI);
          } else {
            const double R = 40.0;
            ub = integrate(
                     [&](double b) {
                       return f.u(b) *
                              pihat_w(pi, t - tp, b - (t + tp) / 2.0);
                     },
                     (t + tp) / 2.0 - R, (t + tp) / 2.0 + R, 1e-9)
                     .value;
          }
          K(i, j) = vh[(j - i) + n - 1] * ub / (2.0 * M_PI);
        }
      return OperatorKernel::make_dense(grid, std::move(K));
    }
    case PhaseSpaceFunction::Kind::General: {
      auto fe = f.eval;
      Apodization api = pi;
      const double W = 40.0;  // symbol must be integrable in w
      const int n = grid.count;
      Eigen::MatrixXcd K(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double t = grid.point(i), tp = grid.point(j);
          auto fhat = [&](double b) {
            return integrate(
                       [&](double w) {
                         return fe(b, w) * std::exp(-kI * w * (tp - t));
                       },
                       -W, W, 1e-9)
                       .value /
                   std::sqrt(2.0 * M_PI);
          };
          const double R = 40.0;
          Complex acc;
          if (api.provenance == P::ConstantOne) {
            acc = std::sqrt(2.0 * M_PI) * fhat((t + tp) / 2.0);
          } else {
            acc = integrate(
                      [&](double b) {
                        return fhat(b) *
                               pihat_w(api, t - tp, b - (t + tp) / 2.0);
                      },
                      (t + tp) / 2.0 - R, (t + tp) / 2.0 + R, 1e-8)
                      .value;
          }
          K(i, j) = acc / (2.0 * M_PI);
        }
      return OperatorKernel::make_dense(grid, std::move(K));
    }
  }
  throw std::logic_error("quantize_general: unknown symbol kind");
}

}  // namespace gm
