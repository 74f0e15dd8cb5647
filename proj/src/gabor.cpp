#include "gm/gabor.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "gm/convolve.hpp"
#include "gm/quadrature.hpp"

namespace gm {
namespace {

const Complex kI(0.0, 1.0);

double gauss_density(double x, double var) {
  return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
}

bool is_gaussian(const Probe& psi) {
  return psi.kind == Probe::Kind::AnalyticGaussian;
}

/// \int u(y) N(x - y; var) dy by quadrature.
Complex smooth_against_gaussian(const std::function<Complex(double)>& u,
                                double var, double x) {
  const double r = 10.0 * std::sqrt(var);
  return integrate(
             [&](double y) { return u(y) * gauss_density(x - y, var); },
             x - r, x + r, 1e-10)
      .value;
}

/// Band-limited time kernel of a spectral multiplier M(w), sampled on a
/// uniform grid of the given step: c_k = (2pi)^{-1} \int M(w) g(w) e^{iw k h}
/// dw with g a flat-top taper below the grid Nyquist. Returns samples for
/// k in [-half, half].
Eigen::VectorXcd sample_spectral_kernel(
    const std::function<Complex(double)>& M, double step, int half) {
  int nfft = 1024;
  while (nfft < 8 * (2 * half + 1)) nfft <<= 1;
  const double wn = M_PI / step;
  std::vector<Complex> spec(nfft);
  for (int j = 0; j < nfft; ++j) {
    double w = 2.0 * M_PI * j / (nfft * step);
    if (j > nfft / 2) w -= 2.0 * wn;
    const double taper = std::exp(-std::pow(std::abs(w) / (0.85 * wn), 32.0));
    spec[j] = M(w) * taper;
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> time;
  fft.inv(time, spec);
  Eigen::VectorXcd c(2 * half + 1);
  for (int k = -half; k <= half; ++k)
    c[k + half] = time[(k + nfft) % nfft] / step;
  return c;
}

/// \int u(b) psi(t - b) conj(psi(t' - b)) db.
Complex probe_pair_integral(const std::function<Complex(double)>& u,
                            const Probe& psi, double t, double tp) {
  const double r = psi.support_radius();
  const double lo = std::min(t, tp) - r, hi = std::max(t, tp) + r;
  return integrate(
             [&](double b) {
               return u(b) * psi(t - b) * std::conj(psi(tp - b));
             },
             lo, hi, 1e-10)
      .value;
}

std::function<Complex(double)> vhat_or_quadrature(
    const PhaseSpaceFunction& f) {
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

Grid1D default_dense_grid(const Probe& psi) {
  const double r = is_gaussian(psi) ? 8.0 * psi.sigma : psi.support_radius();
  return Grid1D::from_range(-r, r, 257);
}

}  // namespace

PhaseSpaceFunction PhaseSpaceFunction::constant(Complex c) {
  PhaseSpaceFunction f;
  f.kind = Kind::TimeOnly;
  f.eval = [c](double, double) { return c; };
  f.u = [c](double) { return c; };
  if (c.imag() == 0.0) f.u_poly = Poly1({c.real()});
  return f;
}

PhaseSpaceFunction PhaseSpaceFunction::time_poly(Poly1 p) {
  PhaseSpaceFunction f;
  f.kind = Kind::TimeOnly;
  f.u_poly = p;
  f.u = [p](double b) { return Complex(p(b)); };
  f.eval = [p](double b, double) { return Complex(p(b)); };
  return f;
}

PhaseSpaceFunction PhaseSpaceFunction::freq_poly(Poly1 p) {
  PhaseSpaceFunction f;
  f.kind = Kind::FrequencyOnly;
  f.v_poly = p;
  f.v = [p](double w) { return Complex(p(w)); };
  f.eval = [p](double, double w) { return Complex(p(w)); };
  return f;
}

PhaseSpaceFunction PhaseSpaceFunction::time_function(
    std::function<Complex(double)> u) {
  PhaseSpaceFunction f;
  f.kind = Kind::TimeOnly;
  f.u = u;
  f.eval = [u](double b, double) { return u(b); };
  return f;
}

PhaseSpaceFunction PhaseSpaceFunction::freq_function(
    std::function<Complex(double)> v, std::function<Complex(double)> vhat) {
  PhaseSpaceFunction f;
  f.kind = Kind::FrequencyOnly;
  f.v = v;
  f.vhat = vhat;
  f.eval = [v](double, double w) { return v(w); };
  return f;
}

PhaseSpaceFunction PhaseSpaceFunction::separable(
    std::function<Complex(double)> u, std::function<Complex(double)> v,
    std::function<Complex(double)> vhat) {
  PhaseSpaceFunction f;
  f.kind = Kind::Separable;
  f.u = u;
  f.v = v;
  f.vhat = vhat;
  f.eval = [u, v](double b, double w) { return u(b) * v(w); };
  return f;
}

PhaseSpaceFunction PhaseSpaceFunction::general(
    std::function<Complex(double, double)> f0) {
  PhaseSpaceFunction f;
  f.kind = Kind::General;
  f.eval = std::move(f0);
  return f;
}

OperatorKernel OperatorKernel::make_multiplier(
    std::function<Complex(double)> m) {
  OperatorKernel k;
  k.kind = Kind::Multiplier;
  k.multiplier = std::move(m);
  return k;
}

OperatorKernel OperatorKernel::make_convolver(std::function<Complex(double)> M,
                                              std::optional<Poly1> poly) {
  OperatorKernel k;
  k.kind = Kind::Convolver;
  k.spectral = std::move(M);
  k.spectral_poly = std::move(poly);
  return k;
}

OperatorKernel OperatorKernel::make_dense(Grid1D grid, Eigen::MatrixXcd K) {
  if (K.rows() != grid.count || K.cols() != grid.count)
    throw std::invalid_argument("OperatorKernel: matrix does not match grid");
  OperatorKernel k;
  k.kind = Kind::Dense;
  k.grid = grid;
  k.matrix = std::move(K);
  return k;
}

GaborCoefficients gabor_transform(const SampledFunction& s, const Probe& psi,
                                  const Grid1D& bgrid, const Grid1D& wgrid) {
  const int nt = s.grid.count, nb = bgrid.count, nw = wgrid.count;
  const double h = s.grid.step;

  // E(j, k) = h * exp(-i w_j t_k), so S.row(i) = E * windowed samples.
  Eigen::MatrixXcd E(nw, nt);
  for (int j = 0; j < nw; ++j)
    for (int k = 0; k < nt; ++k)
      E(j, k) = h * std::exp(-kI * wgrid.point(j) * s.grid.point(k));

  GaborCoefficients out;
  out.bgrid = bgrid;
  out.wgrid = wgrid;
  out.S.resize(nb, nw);
  Eigen::VectorXcd win(nt);
  for (int i = 0; i < nb; ++i) {
    const double b = bgrid.point(i);
    for (int k = 0; k < nt; ++k)
      win[k] = std::conj(psi(s.grid.point(k) - b)) * s.values[k];
    out.S.row(i) = (E * win).transpose();
  }

  const double energy = s.norm2();
  const double smass =
      out.S.squaredNorm() * bgrid.step * wgrid.step / (2.0 * M_PI);
  out.plancherel_ratio = energy > 0.0 ? smass / energy : 1.0;
  out.coarse_grid_warning = std::abs(out.plancherel_ratio - 1.0) > 0.05;
  return out;
}

SampledFunction gabor_reconstruct(const Eigen::MatrixXcd& S, const Probe& psi,
                                  const Grid1D& bgrid, const Grid1D& wgrid,
                                  const Grid1D& tgrid) {
  const int nb = bgrid.count, nw = wgrid.count, nt = tgrid.count;
  if (S.rows() != nb || S.cols() != nw)
    throw std::invalid_argument("gabor_reconstruct: S shape mismatch");

  Eigen::MatrixXcd E(nw, nt);
  for (int j = 0; j < nw; ++j)
    for (int k = 0; k < nt; ++k)
      E(j, k) = std::exp(kI * wgrid.point(j) * tgrid.point(k));
  Eigen::MatrixXcd G = S * E;  // G(i, k) = sum_j S(i,j) e^{i w_j t_k}

  const double weight = bgrid.step * wgrid.step / (2.0 * M_PI);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nt);
  for (int i = 0; i < nb; ++i) {
    const double b = bgrid.point(i);
    for (int k = 0; k < nt; ++k)
      v[k] += weight * G(i, k) * psi(tgrid.point(k) - b);
  }
  return SampledFunction(tgrid, std::move(v));
}

OperatorKernel quantize(const PhaseSpaceFunction& f, const Probe& psi) {
  return quantize(f, psi, default_dense_grid(psi));
}

OperatorKernel quantize(const PhaseSpaceFunction& f, const Probe& psi,
                        const Grid1D& grid) {
  switch (f.kind) {
    case PhaseSpaceFunction::Kind::TimeOnly: {
      if (f.u_poly && is_gaussian(psi)) {
        Poly1 m = gauss_smooth(*f.u_poly, psi.var_time);
        return OperatorKernel::make_multiplier(
            [m](double t) { return Complex(m(t)); });
      }
      auto u = f.u;
      Probe p = psi;
      return OperatorKernel::make_multiplier([u, p](double t) {
        const double r = p.support_radius();
        return integrate(
                   [&](double b) { return u(b) * std::norm(p(t - b)); },
                   t - r, t + r, 1e-10)
            .value;
      });
    }
    case PhaseSpaceFunction::Kind::FrequencyOnly: {
      if (f.v_poly && is_gaussian(psi)) {
        Poly1 M = gauss_smooth(*f.v_poly, psi.var_freq);
        return OperatorKernel::make_convolver(
            [M](double w) { return Complex(M(w)); }, M);
      }
      auto v = f.v;
      Probe p = psi;
      return OperatorKernel::make_convolver([v, p](double w) {
        const double r = 10.0 * std::sqrt(std::max(p.var_freq, 1.0));
        return integrate(
                   [&](double wp) {
                     return v(wp) * std::norm(p.spectrum(w - wp));
                   },
                   w - r, w + r, 1e-10)
            .value;
      });
    }
    case PhaseSpaceFunction::Kind::Separable: {
      if (!f.u || !f.v)
        throw std::invalid_argument("quantize: separable symbol needs u, v");
      auto vhat = vhat_or_quadrature(f);
      const int n = grid.count;
      // vhat depends only on t' - t; cache the 2n-1 offsets.
      Eigen::VectorXcd vh(2 * n - 1);
      for (int d = -(n - 1); d <= n - 1; ++d)
        vh[d + n - 1] = vhat(d * grid.step);
      Eigen::MatrixXcd K(n, n);
      const double norm = 1.0 / std::sqrt(2.0 * M_PI);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          K(i, j) = norm * vh[(j - i) + n - 1] *
                    probe_pair_integral(f.u, psi, grid.point(i), grid.point(j));
      return OperatorKernel::make_dense(grid, std::move(K));
    }
    case PhaseSpaceFunction::Kind::General: {
      auto fe = f.eval;
      Probe p = psi;
      const double W = 40.0;  // symbol must be integrable in w
      const int n = grid.count;
      Eigen::MatrixXcd K(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double t = grid.point(i), tp = grid.point(j);
          const double r = p.support_radius();
          const double lo = std::min(t, tp) - r, hi = std::max(t, tp) + r;
          K(i, j) =
              integrate(
                  [&](double b) {
                    const Complex win = p(t - b) * std::conj(p(tp - b));
                    if (win == Complex(0.0)) return Complex(0.0);
                    return win * integrate(
                                     [&](double w) {
                                       return fe(b, w) *
                                              std::exp(kI * w * (t - tp));
                                     },
                                     -W, W, 1e-9)
                                     .value;
                  },
                  lo, hi, 1e-8)
                  .value /
              (2.0 * M_PI);
        }
      return OperatorKernel::make_dense(grid, std::move(K));
    }
  }
  throw std::logic_error("quantize: unknown symbol kind");
}

SampledFunction apply(const OperatorKernel& k, const SampledFunction& s) {
  switch (k.kind) {
    case OperatorKernel::Kind::Multiplier: {
      Eigen::VectorXcd v(s.grid.count);
      for (int i = 0; i < s.grid.count; ++i)
        v[i] = k.multiplier(s.grid.point(i)) * s.values[i];
      return SampledFunction(s.grid, std::move(v));
    }
    case OperatorKernel::Kind::Convolver: {
      const int ns = s.grid.count;
      const int half = ns - 1;
      Eigen::VectorXcd c = sample_spectral_kernel(k.spectral, s.grid.step, half);
      SampledFunction cker(Grid1D(-half * s.grid.step, s.grid.step, 2 * half + 1),
                           std::move(c));
      SampledFunction full = convolve(cker, s);
      Eigen::VectorXcd v = full.values.segment(half, ns);
      return SampledFunction(s.grid, std::move(v));
    }
    case OperatorKernel::Kind::Dense: {
      if (std::abs(s.grid.start - k.grid.start) > 1e-12 ||
          std::abs(s.grid.step - k.grid.step) > 1e-12 ||
          s.grid.count != k.grid.count)
        throw std::invalid_argument("apply: dense kernel grid mismatch");
      return SampledFunction(s.grid, k.grid.step * (k.matrix * s.values));
    }
  }
  throw std::logic_error("apply: unknown kernel kind");
}

Eigen::MatrixXcd densify(const OperatorKernel& k, const Grid1D& grid) {
  const int n = grid.count;
  switch (k.kind) {
    case OperatorKernel::Kind::Multiplier: {
      Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        K(i, i) = k.multiplier(grid.point(i)) / grid.step;
      return K;
    }
    case OperatorKernel::Kind::Convolver: {
      Eigen::VectorXcd c = sample_spectral_kernel(k.spectral, grid.step, n - 1);
      Eigen::MatrixXcd K(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) K(i, j) = c[(i - j) + n - 1];
      return K;
    }
    case OperatorKernel::Kind::Dense: {
      if (std::abs(grid.start - k.grid.start) > 1e-12 ||
          std::abs(grid.step - k.grid.step) > 1e-12 || grid.count != k.grid.count)
        throw std::invalid_argument("densify: dense kernel grid mismatch");
      return k.matrix;
    }
  }
  throw std::logic_error("densify: unknown kernel kind");
}

std::function<Complex(double)> autocorrelation(const Probe& psi) {
  if (is_gaussian(psi)) {
    const double s2 = psi.sigma * psi.sigma;
    return [s2](double t) { return Complex(std::exp(-t * t / (4.0 * s2))); };
  }
  Probe p = psi;
  return [p](double t) {
    const double lo = p.samples.grid.start, hi = p.samples.grid.back();
    return integrate(
               [&](double tp) { return p(tp) * std::conj(p(tp - t)); }, lo,
               hi, 1e-8)
        .value;
  };
}

Complex overlap(const Probe& psi, const PhaseSpacePoint& p,
                const PhaseSpacePoint& q) {
  const double dw = q.w - p.w;
  if (is_gaussian(psi)) {
    const double s2 = psi.sigma * psi.sigma;
    const double db = p.b - q.b;
    return std::exp(-kI * dw * (p.b + q.b) / 2.0) *
           std::exp(-db * db / (4.0 * s2)) * std::exp(-s2 * dw * dw / 4.0);
  }
  const double lo = std::min(p.b, q.b) - psi.support_radius();
  const double hi = std::max(p.b, q.b) + psi.support_radius();
  return integrate(
             [&](double t) {
               return std::exp(-kI * dw * t) * std::conj(psi(t - q.b)) *
                      psi(t - p.b);
             },
             lo, hi, 1e-10)
      .value;
}

Complex portrait(const PhaseSpaceFunction& f, const Probe& psi,
                 const PhaseSpacePoint& p) {
  if (f.kind == PhaseSpaceFunction::Kind::TimeOnly) {
    if (f.u_poly && is_gaussian(psi)) {
      const double s2 = psi.sigma * psi.sigma;
      return Complex(gauss_smooth(*f.u_poly, s2)(p.b));
    }
    if (is_gaussian(psi))
      return smooth_against_gaussian(f.u, psi.sigma * psi.sigma, p.b);
    // General probe: smooth u against the autocorrelation of |psi|^2.
    Probe pr = psi;
    const double r = pr.support_radius();
    auto weight = [pr, r](double x) {
      return integrate(
                 [&](double t) {
                   return Complex(std::norm(pr(t)) * std::norm(pr(t - x)));
                 },
                 -r, r + std::abs(x), 1e-9)
          .value.real();
    };
    auto u = f.u;
    return integrate(
               [&](double bp) { return u(bp) * weight(p.b - bp); },
               p.b - 2.0 * r, p.b + 2.0 * r, 1e-8)
        .value;
  }
  if (!is_gaussian(psi))
    throw std::invalid_argument(
        "portrait: frequency-dependent symbols need the Gaussian probe");
  const double s2 = psi.sigma * psi.sigma;
  switch (f.kind) {
    case PhaseSpaceFunction::Kind::FrequencyOnly:
      if (f.v_poly) return Complex(gauss_smooth(*f.v_poly, 1.0 / s2)(p.w));
      return smooth_against_gaussian(f.v, 1.0 / s2, p.w);
    case PhaseSpaceFunction::Kind::Separable: {
      Complex ub = f.u ? smooth_against_gaussian(f.u, s2, p.b) : Complex(1.0);
      Complex vw =
          f.v ? smooth_against_gaussian(f.v, 1.0 / s2, p.w) : Complex(1.0);
      return ub * vw;
    }
    case PhaseSpaceFunction::Kind::General: {
      auto fe = f.eval;
      const double rb = 10.0 * psi.sigma, rw = 10.0 / psi.sigma;
      return integrate(
                 [&](double bp) {
                   return gauss_density(p.b - bp, s2) *
                          integrate(
                              [&](double wp) {
                                return fe(bp, wp) *
                                       gauss_density(p.w - wp, 1.0 / s2);
                              },
                              p.w - rw, p.w + rw, 1e-9)
                              .value;
                 },
                 p.b - rb, p.b + rb, 1e-8)
          .value;
    }
    default:
      break;
  }
  throw std::logic_error("portrait: unknown symbol kind");
}

}  // namespace gm
