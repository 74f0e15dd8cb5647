#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gm/grid.hpp"
#include "gm/phase4d.hpp"
#include "gm/quadrature.hpp"

using namespace gm;

namespace {

std::vector<Vector4> sample_points() {
  return {Vector4(0.0, 0.0, 0.0, 0.0), Vector4(1.0, -0.5, 2.0, 0.3),
          Vector4(-2.0, 1.5, -1.0, 2.5), Vector4(0.5, 3.0, 0.1, -1.2)};
}

MultiPoly4 rho2() {
  MultiPoly4 p;
  p.add({0, 2, 0, 0}, 1.0).add({0, 0, 2, 0}, 1.0);
  return p;
}

MultiPoly4 r2() {
  MultiPoly4 p = rho2();
  p.add({0, 0, 0, 2}, 1.0);
  return p;
}

}  // namespace

TEST_CASE("Probe4: Gaussian moments and normalization") {
  Probe4 g = Probe4::gaussian(Vector4(0.5, 1.0, 1.0, 2.0));
  Vector4 m = g.second_moments();
  CHECK(m[0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m[3] == doctest::Approx(2.0).epsilon(1e-12));

  // Density integrates to one along each separable slot.
  for (int mu : {0, 1, 3}) {
    double s = g.sigma[mu];
    double mass = integrate(
                      [&](double x) {
                        return Complex(std::exp(-x * x / (s * s)) /
                                       (s * std::sqrt(M_PI)));
                      },
                      -10.0 * s, 10.0 * s, 1e-11)
                      .value.real();
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  }

  CHECK_THROWS_AS((void)Probe4::gaussian(Vector4(1.0, 0.0, 1.0, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("Probe4: isotropic density normalization and moments") {
  Probe4 p = Probe4::isotropic(
      [](double t, double r) { return std::exp(-t * t - r * r); }, 5.0, 5.0);
  // This density is the squared width-1 separable Gaussian.
  double mass = integrate(
                    [&](double t) {
                      return integrate(
                                 [&](double r) {
                                   return Complex(
                                       4.0 * M_PI * r * r *
                                       p.density(Vector4(t, r, 0.0, 0.0)));
                                 },
                                 0.0, 5.0, 1e-10)
                          .value;
                    },
                    -5.0, 5.0, 1e-9)
                    .value.real();
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

  Vector4 m = p.second_moments();
  CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(m[2] == doctest::Approx(m[3]).epsilon(1e-12));
}

TEST_CASE("quantize_field: closed-form moment shifts") {
  Probe4 g = Probe4::gaussian(Vector4(0.7, 1.2, 1.2, 1.2));
  const double s2 = 1.2 * 1.2;

  Field4 one = Field4::polynomial(MultiPoly4::constant(1.0));
  Field4 q1 = quantize_field(one, g);
  for (const Vector4& x : sample_points())
    CHECK(q1(x) == doctest::Approx(1.0).epsilon(1e-14));

  Field4 qr = quantize_field(Field4::polynomial(rho2()), g);
  for (const Vector4& x : sample_points())
    CHECK(qr(x) == doctest::Approx(x[1] * x[1] + x[2] * x[2] + s2)
                       .epsilon(1e-13));

  Field4 qs = quantize_field(Field4::polynomial(r2()), g);
  for (const Vector4& x : sample_points())
    CHECK(qs(x) ==
          doctest::Approx(x.tail<3>().squaredNorm() + 1.5 * s2).epsilon(1e-13));

  // Mixed and time terms: cross terms pass through, squares shift per axis.
  MultiPoly4 mixed;
  mixed.add({2, 0, 0, 0}, 1.0).add({0, 1, 1, 0}, 3.0);
  Field4 qm = quantize_field(Field4::polynomial(mixed), g);
  for (const Vector4& x : sample_points())
    CHECK(qm(x) == doctest::Approx(x[0] * x[0] + 0.5 * 0.7 * 0.7 +
                                   3.0 * x[1] * x[2])
                       .epsilon(1e-13));
}

TEST_CASE("portrait_field: doubled shifts and linearity") {
  const double a = 1.3, s1 = 0.9;
  Probe4 g = Probe4::gaussian(Vector4(0.7, s1, 1.1, 1.1));

  Field4 acc = portrait_field(
      Field4::polynomial(MultiPoly4::monomial({0, 2, 0, 0}, a * a)), g);
  for (const Vector4& x : sample_points())
    CHECK(acc(x) ==
          doctest::Approx(a * a * (x[1] * x[1] + s1 * s1)).epsilon(1e-13));

  Probe4 iso = Probe4::gaussian(Vector4(0.7, 1.1, 1.1, 1.1));
  Field4 pr = portrait_field(Field4::polynomial(rho2()), iso);
  Field4 ps = portrait_field(Field4::polynomial(r2()), iso);
  for (const Vector4& x : sample_points()) {
    CHECK(pr(x) == doctest::Approx(x[1] * x[1] + x[2] * x[2] + 2.0 * 1.21)
                       .epsilon(1e-13));
    CHECK(ps(x) == doctest::Approx(x.tail<3>().squaredNorm() + 3.0 * 1.21)
                       .epsilon(1e-13));
  }

  // Linear fields are fixed points for centered probes.
  for (int mu = 0; mu < 4; ++mu) {
    std::array<int, 4> e{0, 0, 0, 0};
    e[mu] = 1;
    Field4 lin = portrait_field(Field4::polynomial(MultiPoly4::monomial(e)), g);
    for (const Vector4& x : sample_points())
      CHECK(lin(x) == doctest::Approx(x[mu]).epsilon(1e-14));
  }
}

TEST_CASE("portrait_field equals quantize_field twice for Gaussian probes") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Probe4 g = Probe4::gaussian(Vector4(0.6, 1.0, 1.4, 0.9));
  for (int trial = 0; trial < 4; ++trial) {
    MultiPoly4 p;
    for (int m = 0; m < 4; ++m) {
      std::array<int, 4> e2{0, 0, 0, 0};
      e2[m] = 2;
      p.add(e2, u(rng));
      std::array<int, 4> e1{0, 0, 0, 0};
      e1[m] = 1;
      p.add(e1, u(rng));
    }
    p.add({1, 1, 0, 0}, u(rng)).add({0, 0, 1, 1}, u(rng));
    Field4 f = Field4::polynomial(p);
    Field4 twice = quantize_field(quantize_field(f, g), g);
    Field4 port = portrait_field(f, g);
    for (const Vector4& x : sample_points())
      CHECK(port(x) == doctest::Approx(twice(x)).epsilon(1e-13));
  }
}

TEST_CASE("quantize_field: quadrature path matches closed forms") {
  Probe4 g = Probe4::gaussian(Vector4(0.8, 1.0, 1.3, 0.9));
  Vector4 v = g.second_moments();

  // Gaussian field: the convolution is Gaussian with added variances.
  const double a2 = 4.0;
  Field4 bump = Field4::general([a2](const Vector4& x) {
    return std::exp(-x.squaredNorm() / (2.0 * a2));
  });
  Field4 qb = quantize_field(bump, g);
  for (const Vector4& x : sample_points()) {
    double expect = 1.0;
    for (int m = 0; m < 4; ++m)
      expect *= std::sqrt(a2 / (a2 + v[m])) *
                std::exp(-x[m] * x[m] / (2.0 * (a2 + v[m])));
    CHECK(qb(x) == doctest::Approx(expect).epsilon(1e-8));
  }

  // Cubic monomial treated as a general field: x^3 -> x^3 + 3vx.
  Field4 cubic =
      Field4::general([](const Vector4& x) { return x[1] * x[1] * x[1]; });
  Field4 qc = quantize_field(cubic, g);
  for (const Vector4& x : sample_points())
    CHECK(qc(x) ==
          doctest::Approx(x[1] * x[1] * x[1] + 3.0 * v[1] * x[1]).epsilon(1e-10));

  // Portrait through quadrature doubles the shift.
  Field4 pc = portrait_field(cubic, g);
  for (const Vector4& x : sample_points())
    CHECK(pc(x) ==
          doctest::Approx(x[1] * x[1] * x[1] + 6.0 * v[1] * x[1]).epsilon(1e-10));
}

TEST_CASE("quantize_field: sampled isotropic probes") {
  // Same density as the width-1 separable Gaussian, so the shifts agree.
  Probe4 iso = Probe4::isotropic(
      [](double t, double r) { return std::exp(-t * t - r * r); }, 5.0, 5.0);
  Probe4 g = Probe4::gaussian(Vector4::Ones());

  Field4 qr_iso = quantize_field(Field4::polynomial(r2()), iso);
  Field4 qr_g = quantize_field(Field4::polynomial(r2()), g);
  for (const Vector4& x : sample_points())
    CHECK(qr_iso(x) == doctest::Approx(qr_g(x)).epsilon(1e-7));

  // Degree 3 falls back to quadrature against the sampled density.
  MultiPoly4 c3 = MultiPoly4::monomial({0, 3, 0, 0});
  Field4 qc = quantize_field(Field4::polynomial(c3), iso);
  for (const Vector4& x : sample_points())
    CHECK(qc(x) == doctest::Approx(x[1] * x[1] * x[1] + 1.5 * x[1])
                       .epsilon(1e-6));

  CHECK_THROWS_AS((void)portrait_field(Field4::polynomial(c3), iso),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)portrait_field(Field4::general([](const Vector4&) { return 1.0; }),
                           iso),
      std::invalid_argument);
}

TEST_CASE("angular average: transverse square gains two thirds of <r'^2>") {
  // r^2 sin^2(theta) is the squared distance to the third spatial axis.
  Probe4 iso = Probe4::isotropic(
      [](double t, double r) { return std::exp(-t * t) * (1.0 + r) * std::exp(-2.0 * r); },
      6.0, 14.0);
  const double r2m = 3.0 * iso.second_moments()[1];

  // Independent radial oracle for <r'^2>.
  auto radial = [](double r) { return (1.0 + r) * std::exp(-2.0 * r); };
  double num = integrate(
                   [&](double r) { return Complex(4.0 * M_PI * std::pow(r, 4) * radial(r)); },
                   0.0, 14.0, 1e-11)
                   .value.real();
  double den = integrate(
                   [&](double r) { return Complex(4.0 * M_PI * r * r * radial(r)); },
                   0.0, 14.0, 1e-11)
                   .value.real();
  CHECK(r2m == doctest::Approx(num / den).epsilon(1e-8));

  Field4 q = quantize_field(Field4::polynomial(rho2()), iso);
  for (const Vector4& x : sample_points())
    CHECK(q(x) - rho2()(x) ==
          doctest::Approx(2.0 / 3.0 * (num / den)).epsilon(1e-8));
}

TEST_CASE("quantize_field: divergent convolutions are reported") {
  Probe4 g = Probe4::gaussian(Vector4::Ones());
  Field4 bad = Field4::general([](const Vector4& x) {
    return x.squaredNorm() > 9.0 ? INFINITY : 1.0;
  });
  Field4 q = quantize_field(bad, g);
  CHECK_THROWS_AS((void)q(Vector4(0.0, 0.0, 0.0, 0.0)), std::runtime_error);
}

TEST_CASE("MultiPoly4: smoothing composes additively in the variance") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MultiPoly4 p;
  p.add({2, 1, 0, 0}, u(rng)).add({0, 0, 3, 1}, u(rng)).add({4, 0, 0, 0}, u(rng));
  Vector4 v(0.3, 0.7, 0.2, 0.5);
  MultiPoly4 once = p.smoothed(2.0 * v);
  MultiPoly4 twice = p.smoothed(v).smoothed(v);
  for (const Vector4& x : sample_points())
    CHECK(once(x) == doctest::Approx(twice(x)).epsilon(1e-12));
}
