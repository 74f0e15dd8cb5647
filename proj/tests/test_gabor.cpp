#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gm/gabor.hpp"
#include "gm/quadrature.hpp"

using namespace gm;

namespace {

const Complex I(0.0, 1.0);

double g1(double t) { return std::pow(M_PI, -0.25) * std::exp(-t * t / 2.0); }

// Closed-form Gabor transform of s(t) = e^{-t^2/2} cos(w0 t) against the
// width-1 Gaussian probe: each plane-wave half contributes
// (1/2) pi^{1/4} e^{-b^2/4} e^{i(w0 - w)b/2} e^{-(w0 - w)^2/4}.
Complex cosine_transform(double b, double w, double w0) {
  auto half = [&](double s) {
    const double d = s * w0 - w;
    return 0.5 * std::pow(M_PI, 0.25) * std::exp(-b * b / 4.0) *
           std::exp(I * d * b / 2.0) * std::exp(-d * d / 4.0);
  };
  return half(1.0) + half(-1.0);
}

SampledFunction plane_wave(const Grid1D& g, double w0) {
  return SampledFunction::sample(
      g, [&](double t) { return std::exp(I * w0 * t); });
}

}  // namespace

TEST_CASE("probe: Gaussian moments re-verified by quadrature") {
  const double sigma = 1.7;
  Probe psi = Probe::gaussian(sigma);
  auto mom = [&](int k) {
    return integrate(
               [&](double t) {
                 return std::pow(t, k) * std::norm(psi(t));
               },
               -10 * sigma, 10 * sigma, 1e-12)
        .value.real();
  };
  CHECK(std::abs(mom(0) - 1.0) < 1e-10);
  CHECK(std::abs(mom(1)) < 1e-10);
  CHECK(std::abs(mom(2) - sigma * sigma / 2.0) < 1e-10);
  CHECK(psi.var_time == doctest::Approx(sigma * sigma / 2.0));
  CHECK(psi.var_freq == doctest::Approx(0.5 / (sigma * sigma)));
  // Frequency variance against the spectrum.
  double w2 = integrate(
                  [&](double w) {
                    return w * w * std::norm(psi.spectrum(w));
                  },
                  -12 / sigma, 12 / sigma, 1e-12)
                  .value.real();
  CHECK(std::abs(w2 - 0.5 / (sigma * sigma)) < 1e-10);
}

TEST_CASE("probe: sampled probes are renormalized") {
  Grid1D g(-8.0, 0.01, 1601);
  auto raw = SampledFunction::sample(
      g, [](double t) { return 3.2 * std::exp(-t * t / 2.0); });
  Probe psi = Probe::from_samples(raw);
  CHECK(std::abs(psi.samples.norm2() - 1.0) < 1e-12);
  // Interpolated evaluation close to the underlying Gaussian.
  for (double t : {-1.3, 0.0, 0.4, 2.1})
    CHECK(std::abs(psi(t) - g1(t)) < 1e-4);
  CHECK(std::abs(psi.mean_time) < 1e-6);
  CHECK(std::abs(psi.var_time - 0.5) < 1e-4);
  CHECK(std::abs(psi.var_freq - 0.5) < 1e-3);
}

TEST_CASE("gabor_transform: Gaussian probe against itself") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D tg(-8.0, 0.05, 321);
  auto s = SampledFunction::sample(tg, [](double t) { return g1(t); });
  Grid1D bg = Grid1D::from_range(-5, 5, 41), wg = Grid1D::from_range(-5, 5, 41);
  auto res = gabor_transform(s, psi, bg, wg);

  CHECK(std::abs(res.S(20, 20) - Complex(1.0)) < 1e-8);
  for (int i = 0; i < bg.count; i += 5)
    for (int j = 0; j < wg.count; j += 5) {
      const double b = bg.point(i), w = wg.point(j);
      const double expect = std::exp(-b * b / 4.0) * std::exp(-w * w / 4.0);
      CHECK(std::abs(std::abs(res.S(i, j)) - expect) < 1e-8);
    }
  CHECK(std::abs(res.plancherel_ratio - 1.0) < 1e-6);
  CHECK_FALSE(res.coarse_grid_warning);
}

TEST_CASE("gabor_transform: energy conservation on a chirp") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D tg(-10.0, 0.04, 501);
  auto s = SampledFunction::sample(tg, [](double t) {
    return std::exp(-t * t / 4.0) * std::cos(2.5 * t + 0.8 * t * t);
  });
  Grid1D bg = Grid1D::from_range(-8, 8, 65);
  Grid1D wg = Grid1D::from_range(-14, 14, 113);
  auto res = gabor_transform(s, psi, bg, wg);
  CHECK(std::abs(res.plancherel_ratio - 1.0) < 1e-3);
}

TEST_CASE("gabor_transform: coarse grids raise the warning flag") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D tg(-8.0, 0.05, 321);
  auto s = SampledFunction::sample(tg, [](double t) { return g1(t); });
  auto res = gabor_transform(s, psi, Grid1D::from_range(-1, 1, 5),
                             Grid1D::from_range(-1, 1, 5));
  CHECK(res.coarse_grid_warning);
}

TEST_CASE("gabor_reconstruct: round trip on the Gaussian") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D tg(-6.0, 0.05, 241);
  auto s = SampledFunction::sample(tg, [](double t) { return g1(t); });
  Grid1D bg = Grid1D::from_range(-5, 5, 41), wg = Grid1D::from_range(-5, 5, 41);
  auto res = gabor_transform(s, psi, bg, wg);
  auto r = gabor_reconstruct(res.S, psi, bg, wg, tg);
  CHECK(std::sqrt((r.values - s.values).squaredNorm() / s.values.squaredNorm()) <
        1e-3);
}

TEST_CASE("gabor_reconstruct: zero coefficients give the zero signal") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D bg = Grid1D::from_range(-2, 2, 9), wg = Grid1D::from_range(-2, 2, 9);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(9, 9);
  auto r = gabor_reconstruct(S, psi, bg, wg, Grid1D(-3.0, 0.1, 61));
  CHECK(r.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gabor_reconstruct: modulated Gaussian, quadrature oracle") {
  Probe psi = Probe::gaussian(1.0);
  const double w0 = 3.0;
  Grid1D tg(-6.0, 0.05, 241);
  auto s = SampledFunction::sample(
      tg, [&](double t) { return std::exp(-t * t / 2.0) * std::cos(w0 * t); });
  Grid1D bg = Grid1D::from_range(-6, 6, 49);
  Grid1D wg = Grid1D::from_range(-8, 8, 65);
  auto res = gabor_transform(s, psi, bg, wg);
  auto r = gabor_reconstruct(res.S, psi, bg, wg, tg);
  CHECK(std::sqrt((r.values - s.values).squaredNorm() / s.values.squaredNorm()) <
        1e-3);

  // Independent oracle: the double reconstruction integral evaluated by
  // nested adaptive quadrature with the closed-form transform.
  for (double t : {-1.2, -0.3, 0.0, 0.7, 1.5}) {
    Complex oracle =
        integrate(
            [&](double b) {
              Complex inner =
                  integrate(
                      [&](double w) {
                        return cosine_transform(b, w, w0) *
                               std::exp(I * w * t);
                      },
                      -12.0, 12.0, 1e-9)
                      .value;
              return inner * g1(t - b);
            },
            -8.0, 8.0, 1e-8)
            .value /
        (2.0 * M_PI);
    const double st = std::exp(-t * t / 2.0) * std::cos(w0 * t);
    CHECK(std::abs(oracle - Complex(st)) < 1e-6);
    const int idx = int(std::lround((t - tg.start) / tg.step));
    CHECK(std::abs(r.values[idx] - oracle) < 1e-3);
  }
}

TEST_CASE("quantize: constant symbol is the identity") {
  Probe psi = Probe::gaussian(0.9);
  auto k = quantize(PhaseSpaceFunction::constant(1.0), psi);
  REQUIRE(k.kind == OperatorKernel::Kind::Multiplier);
  for (double t : {-2.0, 0.0, 1.3})
    CHECK(std::abs(k.multiplier(t) - Complex(1.0)) < 1e-12);
}

TEST_CASE("quantize: b^2 gains half the squared width") {
  const double sigma = 0.8;
  Probe psi = Probe::gaussian(sigma);
  auto k = quantize(PhaseSpaceFunction::time_poly(Poly1::monomial(2)), psi);
  REQUIRE(k.kind == OperatorKernel::Kind::Multiplier);
  for (double t : {-1.5, 0.0, 0.4, 2.0})
    CHECK(std::abs(k.multiplier(t) - Complex(t * t + sigma * sigma / 2.0)) <
          1e-12);

  // Same symbol through the quadrature path (sampled probe) agrees.
  Grid1D g(-8.0, 0.005, 3201);
  Probe sp = Probe::from_samples(SampledFunction::sample(
      g, [&](double t) { return std::exp(-t * t / (2 * sigma * sigma)); }));
  auto kq = quantize(PhaseSpaceFunction::time_poly(Poly1::monomial(2)), sp);
  for (double t : {-1.0, 0.3})
    CHECK(std::abs(kq.multiplier(t) - Complex(t * t + sigma * sigma / 2.0)) <
          1e-4);
}

TEST_CASE("quantize: frequency symbol acts on plane waves") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D tg(-20.0, 0.05, 801);

  auto kw = quantize(PhaseSpaceFunction::freq_poly(Poly1::monomial(1)), psi);
  REQUIRE(kw.kind == OperatorKernel::Kind::Convolver);
  const double w0 = 2.0;
  auto s = plane_wave(tg, w0);
  auto out = apply(kw, s);
  for (int i = 0; i < tg.count; ++i) {
    if (std::abs(tg.point(i)) > 10.0) continue;
    CHECK(std::abs(out.values[i] - w0 * s.values[i]) < 1e-6);
  }

  auto kw2 = quantize(PhaseSpaceFunction::freq_poly(Poly1::monomial(2)), psi);
  REQUIRE(kw2.spectral_poly.has_value());
  CHECK(std::abs((*kw2.spectral_poly)(1.3) - (1.3 * 1.3 + 0.5)) < 1e-12);
  const double w1 = 1.5;
  auto s1 = plane_wave(tg, w1);
  auto out2 = apply(kw2, s1);
  for (int i = 0; i < tg.count; ++i) {
    if (std::abs(tg.point(i)) > 10.0) continue;
    CHECK(std::abs(out2.values[i] - (w1 * w1 + 0.5) * s1.values[i]) < 1e-6);
  }
}

TEST_CASE("quantize: w^2 shift follows the frequency variance, not sigma^2/2") {
  const double sigma = 2.0;
  Probe psi = Probe::gaussian(sigma);
  auto k = quantize(PhaseSpaceFunction::freq_poly(Poly1::monomial(2)), psi);
  REQUIRE(k.spectral_poly.has_value());
  CHECK(std::abs((*k.spectral_poly)(0.0) - 1.0 / (2.0 * sigma * sigma)) <
        1e-12);
}

TEST_CASE("apply: multiplier on the Gaussian at the origin") {
  Probe psi = Probe::gaussian(1.0);
  auto k = quantize(PhaseSpaceFunction::time_poly(Poly1::monomial(2)), psi);
  Grid1D tg(-6.0, 0.05, 241);
  auto s = SampledFunction::sample(tg, [](double t) { return g1(t); });
  auto out = apply(k, s);
  const int i0 = 120;  // t = 0
  CHECK(std::abs(out.values[i0] - 0.5 * g1(0.0)) < 1e-12);
}

TEST_CASE("apply: dense kernel of f = b multiplies by t") {
  Probe psi = Probe::gaussian(1.0);
  auto k = quantize(PhaseSpaceFunction::time_poly(Poly1::monomial(1)), psi);
  Grid1D tg(-6.0, 0.05, 241);
  Eigen::MatrixXcd K = densify(k, tg);
  auto s = SampledFunction::sample(tg, [](double t) { return g1(t); });
  Eigen::VectorXcd out = tg.step * (K * s.values);
  for (int i = 0; i < tg.count; ++i)
    CHECK(std::abs(out[i] - Complex(tg.point(i) * g1(tg.point(i)))) < 1e-10);

  // Oracle: (A_b s)(t) = (2pi)^{-1} iint b S(b,w) psi_{b,w}(t) db dw with the
  // closed-form transform of the Gaussian, S(b,w) = e^{-iwb/2-b^2/4-w^2/4}.
  for (double t : {-1.0, 0.0, 0.6, 1.4}) {
    Complex oracle =
        integrate(
            [&](double b) {
              Complex inner =
                  integrate(
                      [&](double w) {
                        Complex S = std::exp(-I * w * b / 2.0 -
                                             b * b / 4.0 - w * w / 4.0);
                        return S * std::exp(I * w * t);
                      },
                      -10.0, 10.0, 1e-9)
                      .value;
              return b * inner * g1(t - b);
            },
            -8.0, 8.0, 1e-8)
            .value /
        (2.0 * M_PI);
    CHECK(std::abs(oracle - Complex(t * g1(t))) < 1e-6);
  }
}

TEST_CASE("apply: convolver agrees with its densified matrix") {
  Probe psi = Probe::gaussian(1.0);
  auto k = quantize(PhaseSpaceFunction::freq_poly(Poly1::monomial(2)), psi);
  Grid1D tg(-8.0, 0.05, 321);
  auto s = SampledFunction::sample(
      tg, [](double t) { return std::exp(-t * t / 3.0) * std::cos(2 * t); });
  auto direct = apply(k, s);
  Eigen::VectorXcd via_matrix = tg.step * (densify(k, tg) * s.values);
  for (int i = 0; i < tg.count; ++i)
    CHECK(std::abs(direct.values[i] - via_matrix[i]) < 1e-8);
}

TEST_CASE("apply: rejects mismatched grids on dense kernels") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D g = Grid1D::from_range(-2, 2, 9);
  auto k = quantize(
      PhaseSpaceFunction::separable(
          [](double b) { return Complex(b); },
          [](double w) { return Complex(std::exp(-w * w / 2.0)); },
          [](double tau) { return Complex(std::exp(-tau * tau / 2.0)); }),
      psi, g);
  Grid1D other(-2.0, 0.5, 10);
  auto s = SampledFunction::sample(other, [](double t) { return g1(t); });
  CHECK_THROWS_AS((void)apply(k, s), std::invalid_argument);
}

TEST_CASE("autocorrelation: Gaussian closed form and Fourier oracle") {
  const double sigma = 1.3;
  Probe psi = Probe::gaussian(sigma);
  auto R = autocorrelation(psi);
  CHECK(std::abs(R(0.0) - Complex(1.0)) < 1e-12);
  for (double t : {-2.0, -0.5, 0.7, 1.9})
    CHECK(std::abs(R(t) - Complex(std::exp(-t * t / (4 * sigma * sigma)))) <
          1e-12);

  // R(t) = int |psihat(w)|^2 e^{iwt} dw.
  for (double t : {-1.1, 0.0, 0.4, 1.0, 2.3}) {
    Complex ft = integrate(
                     [&](double w) {
                       return std::norm(psi.spectrum(w)) * std::exp(I * w * t);
                     },
                     -12 / sigma, 12 / sigma, 1e-10)
                     .value;
    CHECK(std::abs(R(t) - ft) < 1e-8);
  }
}

TEST_CASE("autocorrelation: sampled probe symmetry") {
  Grid1D g(-8.0, 0.01, 1601);
  Probe psi = Probe::from_samples(SampledFunction::sample(g, [](double t) {
    return std::exp(-t * t / 2.0) * (1.0 + 0.3 * t);
  }));
  auto R = autocorrelation(psi);
  CHECK(std::abs(R(0.0) - Complex(1.0)) < 1e-4);
  for (double t : {0.3, 1.1})
    CHECK(std::abs(R(-t) - std::conj(R(t))) < 1e-6);
}

TEST_CASE("overlap: closed form for the Gaussian probe") {
  const double sigma = 1.2;
  Probe psi = Probe::gaussian(sigma);
  PhaseSpacePoint p{0.7, -1.1}, q{-0.4, 0.9};
  CHECK(std::abs(overlap(psi, p, p) - Complex(1.0)) < 1e-12);

  const double db = p.b - q.b, dw = q.w - p.w;
  const double mod = std::exp(-db * db / (4 * sigma * sigma)) *
                     std::exp(-sigma * sigma * dw * dw / 4);
  Complex expect =
      mod * std::exp(-I * dw * (p.b + q.b) / 2.0);
  CHECK(std::abs(overlap(psi, p, q) - expect) < 1e-12);

  // Quadrature path through a sampled copy of the same probe agrees.
  Grid1D g(-10.0, 0.01, 2001);
  Probe sp = Probe::from_samples(SampledFunction::sample(
      g, [&](double t) { return std::exp(-t * t / (2 * sigma * sigma)); }));
  CHECK(std::abs(overlap(sp, p, q) - expect) < 1e-4);
}

TEST_CASE("overlap: Cauchy-Schwarz bound on random pairs") {
  Probe psi = Probe::gaussian(0.7);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    PhaseSpacePoint p{u(rng), u(rng)}, q{u(rng), u(rng)};
    CHECK(std::abs(overlap(psi, p, q)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("portrait: polynomial closed forms") {
  const double sigma = 0.9;
  Probe psi = Probe::gaussian(sigma);
  auto at = [&](const PhaseSpaceFunction& f, double b, double w) {
    return portrait(f, psi, PhaseSpacePoint{b, w});
  };
  auto fb = PhaseSpaceFunction::time_poly(Poly1::monomial(1));
  auto fb2 = PhaseSpaceFunction::time_poly(Poly1::monomial(2));
  auto fw2 = PhaseSpaceFunction::freq_poly(Poly1::monomial(2));
  auto one = PhaseSpaceFunction::constant(1.0);
  for (double b : {-1.5, 0.0, 2.2}) {
    CHECK(std::abs(at(fb, b, 0.3) - Complex(b)) < 1e-12);
    CHECK(std::abs(at(fb2, b, 0.3) - Complex(b * b + sigma * sigma)) < 1e-12);
  }
  for (double w : {-2.0, 0.5})
    CHECK(std::abs(at(fw2, 0.1, w) -
                   Complex(w * w + 1.0 / (sigma * sigma))) < 1e-12);
  CHECK(std::abs(at(one, 1.0, -1.0) - Complex(1.0)) < 1e-12);
}

TEST_CASE("portrait: general path matches the Gaussian convolution") {
  const double sigma = 1.1;
  Probe psi = Probe::gaussian(sigma);
  // f(b,w) = e^{-b^2/2} e^{-w^2/2}; smoothing adds sigma^2 and 1/sigma^2 to
  // the respective variances and rescales the amplitudes accordingly.
  auto f = PhaseSpaceFunction::general([](double b, double w) {
    return Complex(std::exp(-b * b / 2.0) * std::exp(-w * w / 2.0));
  });
  const double vb = 1.0 + sigma * sigma, vw = 1.0 + 1.0 / (sigma * sigma);
  for (auto [b, w] : {std::pair{0.0, 0.0}, {1.0, -0.5}, {-0.7, 1.2}}) {
    const double expect = std::exp(-b * b / (2 * vb)) / std::sqrt(vb) *
                          std::exp(-w * w / (2 * vw)) / std::sqrt(vw);
    CHECK(std::abs(portrait(f, psi, PhaseSpacePoint{b, w}) - Complex(expect)) <
          1e-7);
  }
}

TEST_CASE("portrait: quantize-then-portrait on the general path") {
  // Portrait through a sampled probe, time-only symbol.
  Grid1D g(-8.0, 0.01, 1601);
  Probe sp = Probe::from_samples(SampledFunction::sample(
      g, [](double t) { return std::exp(-t * t / 2.0); }));
  auto fb2 = PhaseSpaceFunction::time_poly(Poly1::monomial(2));
  Complex v = portrait(fb2, sp, PhaseSpacePoint{1.2, 0.0});
  CHECK(std::abs(v - Complex(1.2 * 1.2 + 1.0)) < 1e-3);
}

TEST_CASE("separable kernel factorizes and is Hermitian for real symbols") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D g = Grid1D::from_range(-1.0, 1.0, 9);
  auto u = [](double b) { return Complex(b); };
  auto v = [](double w) { return Complex(std::exp(-w * w / 2.0)); };
  auto vhat = [](double tau) { return Complex(std::exp(-tau * tau / 2.0)); };
  auto ks = quantize(PhaseSpaceFunction::separable(u, v, vhat), psi, g);
  REQUIRE(ks.kind == OperatorKernel::Kind::Dense);

  // Factorized closed form for the Gaussian probe: the b-integral is
  // (t+t')/2 * e^{-(t-t')^2/4} / sqrt(2pi)-free Gaussian overlap.
  for (int i = 0; i < g.count; i += 2)
    for (int j = 0; j < g.count; j += 2) {
      const double t = g.point(i), tp = g.point(j);
      Complex bint = integrate(
                         [&](double b) {
                           return Complex(b * g1(t - b) * g1(tp - b));
                         },
                         -9.0, 9.0, 1e-11)
                         .value;
      Complex expect = vhat(tp - t) * bint / std::sqrt(2.0 * M_PI);
      CHECK(std::abs(ks.matrix(i, j) - expect) < 1e-8);
    }

  CHECK((ks.matrix - ks.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-8);

  // The general quadrature path reproduces the separable kernel.
  auto kg = quantize(PhaseSpaceFunction::general([&](double b, double w) {
                       return u(b) * v(w);
                     }),
                     psi, g);
  CHECK((ks.matrix - kg.matrix).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("commutator of quantized b and w is i on band-limited signals") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D tg(-15.0, 0.05, 601);
  Eigen::MatrixXcd T =
      densify(quantize(PhaseSpaceFunction::time_poly(Poly1::monomial(1)), psi),
              tg);
  Eigen::MatrixXcd W =
      densify(quantize(PhaseSpaceFunction::freq_poly(Poly1::monomial(1)), psi),
              tg);
  auto s = SampledFunction::sample(tg, [](double t) {
    return std::exp(-t * t / 8.0) * std::cos(2.0 * t);
  });
  Eigen::VectorXcd comm =
      tg.step * tg.step * (T * (W * s.values) - W * (T * s.values));
  for (int i = 0; i < tg.count; ++i) {
    if (std::abs(tg.point(i)) > 8.0) continue;
    CHECK(std::abs(comm[i] - I * s.values[i]) < 1e-4);
  }
}

TEST_CASE("translational covariance of quantization") {
  Probe psi = Probe::gaussian(1.0);
  Grid1D tg(-15.0, 0.05, 601);
  const double b0 = 0.5, w0 = 1.0;  // b0 is 10 grid steps
  const int shift = 10;
  auto s = SampledFunction::sample(tg, [](double t) {
    return std::exp(-t * t / 6.0) * std::cos(1.5 * t);
  });

  auto displace = [&](const SampledFunction& x, int n, double w) {
    // (U x)(t) = e^{iwt} x(t - n*step).
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(x.grid.count);
    for (int i = 0; i < x.grid.count; ++i) {
      const int j = i - n;
      if (j < 0 || j >= x.grid.count) continue;
      v[i] = std::exp(I * w * x.grid.point(i)) * x.values[j];
    }
    return SampledFunction(x.grid, std::move(v));
  };
  // displace(shift,w0) o displace(-shift,-w0) = e^{i w0 b0} id, so the
  // transported operator carries a compensating global phase.
  const Complex phase = std::exp(-I * w0 * b0);
  auto transport = [&](const OperatorKernel& k) {
    return [&, phase](const SampledFunction& x) {
      auto y = displace(apply(k, displace(x, -shift, -w0)), shift, w0);
      y.values *= phase;
      return y;
    };
  };

  SUBCASE("time symbol") {
    // f(b) = (b - b0)^2 shifted from b^2.
    auto shifted = quantize(
        PhaseSpaceFunction::time_poly(Poly1({b0 * b0, -2.0 * b0, 1.0})), psi);
    auto base = quantize(PhaseSpaceFunction::time_poly(Poly1::monomial(2)), psi);
    auto lhs = apply(shifted, s);
    auto rhs = transport(base)(s);
    for (int i = 0; i < tg.count; ++i) {
      if (std::abs(tg.point(i)) > 8.0) continue;
      CHECK(std::abs(lhs.values[i] - rhs.values[i]) < 1e-6);
    }
  }
  SUBCASE("frequency symbol") {
    // f(w) = w - w0 shifted from w.
    auto shifted =
        quantize(PhaseSpaceFunction::freq_poly(Poly1({-w0, 1.0})), psi);
    auto base = quantize(PhaseSpaceFunction::freq_poly(Poly1::monomial(1)), psi);
    auto lhs = apply(shifted, s);
    auto rhs = transport(base)(s);
    for (int i = 0; i < tg.count; ++i) {
      if (std::abs(tg.point(i)) > 8.0) continue;
      CHECK(std::abs(lhs.values[i] - rhs.values[i]) < 1e-6);
    }
  }
}

TEST_CASE("classical limits: portrait bias shrinks in the right direction") {
  auto fb2 = PhaseSpaceFunction::time_poly(Poly1::monomial(2));
  auto fw2 = PhaseSpaceFunction::freq_poly(Poly1::monomial(2));
  const PhaseSpacePoint p{1.3, 0.8};

  double prev = 1e300;
  for (double sigma : {1.0, 0.5, 0.25}) {
    double bias =
        std::abs(portrait(fb2, Probe::gaussian(sigma), p) -
                 Complex(p.b * p.b));
    CHECK(bias < prev);
    prev = bias;
  }
  prev = 1e300;
  for (double sigma : {1.0, 2.0, 4.0}) {
    double bias =
        std::abs(portrait(fw2, Probe::gaussian(sigma), p) -
                 Complex(p.w * p.w));
    CHECK(bias < prev);
    prev = bias;
  }
}
