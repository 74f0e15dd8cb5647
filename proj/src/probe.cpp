#include "gm/probe.hpp"

#include <cmath>

#include "gm/quadrature.hpp"

namespace gm {

Probe Probe::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("Probe: sigma must be > 0");
  Probe p;
  p.kind = Kind::AnalyticGaussian;
  p.sigma = sigma;
  p.mean_time = 0.0;
  p.mean_freq = 0.0;
  p.var_time = 0.5 * sigma * sigma;
  p.var_freq = 0.5 / (sigma * sigma);
  return p;
}

Probe Probe::from_samples(SampledFunction s) {
  const double n2 = s.norm2();
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw std::invalid_argument("Probe: samples must have finite nonzero norm");
  s.values /= std::sqrt(n2);

  Probe p;
  p.kind = Kind::Sampled;
  const double h = s.grid.step;
  const int n = s.grid.count;

  double mt = 0.0;
  for (int i = 0; i < n; ++i) mt += s.grid.point(i) * std::norm(s.values[i]) * h;
  double vt = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = s.grid.point(i) - mt;
    vt += d * d * std::norm(s.values[i]) * h;
  }

  // Frequency moments from the discrete derivative:
  // <W> = Im \int conj(psi) psi', <W^2> = \int |psi'|^2.
  Eigen::VectorXcd der(n);
  der[0] = (s.values[1] - s.values[0]) / h;
  der[n - 1] = (s.values[n - 1] - s.values[n - 2]) / h;
  for (int i = 1; i + 1 < n; ++i)
    der[i] = (s.values[i + 1] - s.values[i - 1]) / (2.0 * h);
  double mw = 0.0, w2 = 0.0;
  for (int i = 0; i < n; ++i) {
    mw += std::imag(std::conj(s.values[i]) * der[i]) * h;
    w2 += std::norm(der[i]) * h;
  }

  p.samples = std::move(s);
  p.mean_time = mt;
  p.var_time = vt;
  p.mean_freq = mw;
  p.var_freq = w2 - mw * mw;
  return p;
}

Complex Probe::operator()(double t) const {
  if (kind == Kind::AnalyticGaussian) {
    return Complex(std::pow(M_PI, -0.25) / std::sqrt(sigma) *
                   std::exp(-t * t / (2.0 * sigma * sigma)));
  }
  const Grid1D& g = samples.grid;
  const double x = (t - g.start) / g.step;
  if (x < 0.0 || x > g.count - 1) return Complex(0.0);
  const int i = std::min(int(x), g.count - 2);
  const double frac = x - i;
  return (1.0 - frac) * samples.values[i] + frac * samples.values[i + 1];
}

Complex Probe::spectrum(double w) const {
  if (kind == Kind::AnalyticGaussian) {
    return Complex(std::pow(M_PI, -0.25) * std::sqrt(sigma) *
                   std::exp(-sigma * sigma * w * w / 2.0));
  }
  const double h = samples.grid.step;
  Complex acc(0.0);
  for (int i = 0; i < samples.grid.count; ++i) {
    const double t = samples.grid.point(i);
    acc += std::exp(Complex(0.0, -w * t)) * samples.values[i];
  }
  return acc * h / std::sqrt(2.0 * M_PI);
}

double Probe::support_radius() const {
  if (kind == Kind::AnalyticGaussian) return 8.0 * sigma;
  return std::max(std::abs(samples.grid.start), std::abs(samples.grid.back()));
}

}  // namespace gm
