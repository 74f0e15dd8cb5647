#include "gm/phase4d.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "gm/grid.hpp"
#include "gm/quadrature.hpp"

namespace gm {

namespace {

struct Rule {
  Eigen::VectorXd x, w;
};

// Golub-Welsch on the symmetric Jacobi matrix.
Rule gauss_rule(const Eigen::VectorXd& beta, double mass) {
  const int n = int(beta.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) J(k, k + 1) = J(k + 1, k) = beta[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  r.x = es.eigenvalues();
  r.w.resize(n);
  for (int i = 0; i < n; ++i)
    r.w[i] = mass * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  return r;
}

// Weight e^{-s^2} on the line.
Rule gauss_hermite(int n) {
  Eigen::VectorXd beta(n - 1);
  for (int k = 1; k < n; ++k) beta[k - 1] = std::sqrt(k / 2.0);
  return gauss_rule(beta, std::sqrt(M_PI));
}

// Weight 1 on [-1, 1].
Rule gauss_legendre(int n) {
  Eigen::VectorXd beta(n - 1);
  for (int k = 1; k < n; ++k) beta[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  return gauss_rule(beta, 2.0);
}

// Convolution of u with a centered separable Gaussian of the given per-axis
// variances, evaluated by tensorized Gauss-Hermite quadrature.
Field4 gaussian_convolution(const std::function<double(const Vector4&)>& u,
                            const Vector4& variance) {
  const Rule gh = gauss_hermite(24);
  Vector4 scale;
  for (int m = 0; m < 4; ++m) scale[m] = std::sqrt(2.0 * variance[m]);
  const int n = int(gh.x.size());
  return Field4::general([=](const Vector4& x) {
    double acc = 0.0;
    Vector4 y;
    for (int i = 0; i < n; ++i) {
      y[0] = x[0] - scale[0] * gh.x[i];
      for (int j = 0; j < n; ++j) {
        y[1] = x[1] - scale[1] * gh.x[j];
        for (int k = 0; k < n; ++k) {
          y[2] = x[2] - scale[2] * gh.x[k];
          double wk = gh.w[i] * gh.w[j] * gh.w[k];
          for (int l = 0; l < n; ++l) {
            y[3] = x[3] - scale[3] * gh.x[l];
            acc += wk * gh.w[l] * u(y);
          }
        }
      }
    }
    acc /= M_PI * M_PI;
    if (!std::isfinite(acc))
      throw std::runtime_error("quantize_field: divergent convolution");
    return acc;
  });
}

// Convolution with a sampled isotropic density, tensorized Gauss-Legendre
// over the probe's Cartesian bounding box.
Field4 isotropic_convolution(const std::function<double(const Vector4&)>& u,
                             const Probe4& psi) {
  const Rule gl = gauss_legendre(48);
  const int n = int(gl.x.size());
  const double T = psi.t_radius, R = psi.r_radius;
  return Field4::general([=](const Vector4& x) {
    double acc = 0.0;
    Vector4 y;
    for (int i = 0; i < n; ++i) {
      y[0] = T * gl.x[i];
      for (int j = 0; j < n; ++j) {
        y[1] = R * gl.x[j];
        for (int k = 0; k < n; ++k) {
          y[2] = R * gl.x[k];
          double wk = gl.w[i] * gl.w[j] * gl.w[k];
          for (int l = 0; l < n; ++l) {
            y[3] = R * gl.x[l];
            const double p = psi.density(y);
            if (p != 0.0) acc += wk * gl.w[l] * p * u(x - y);
          }
        }
      }
    }
    acc *= T * R * R * R;
    if (!std::isfinite(acc))
      throw std::runtime_error("quantize_field: divergent convolution");
    return acc;
  });
}

Field4 smooth_field(const Field4& u, const Probe4& psi, double factor,
                    bool portrait) {
  if (u.structure == Field4::Structure::Polynomial) {
    if (psi.kind == Probe4::Kind::SampledIsotropic && u.poly.degree() > 2 &&
        portrait)
      throw std::invalid_argument(
          "portrait_field: sampled probes support polynomial degree <= 2");
    if (psi.kind == Probe4::Kind::SeparableGaussian || u.poly.degree() <= 2)
      return Field4::polynomial(
          u.poly.smoothed(factor * psi.second_moments()));
    return isotropic_convolution(u.eval, psi);
  }
  if (psi.kind == Probe4::Kind::SeparableGaussian)
    return gaussian_convolution(u.eval, factor * psi.second_moments());
  if (portrait)
    throw std::invalid_argument(
        "portrait_field: sampled probes support polynomial fields only");
  return isotropic_convolution(u.eval, psi);
}

}  // namespace

Probe4 Probe4::gaussian(const Vector4& sigma) {
  for (int m = 0; m < 4; ++m)
    if (!(sigma[m] > 0.0))
      throw std::invalid_argument("Probe4: widths must be positive");
  Probe4 p;
  p.kind = Kind::SeparableGaussian;
  p.sigma = sigma;
  return p;
}

Probe4 Probe4::isotropic(std::function<double(double, double)> density,
                         double t_radius, double r_radius) {
  if (!(t_radius > 0.0) || !(r_radius > 0.0))
    throw std::invalid_argument("Probe4: support radii must be positive");
  Probe4 p;
  p.kind = Kind::SampledIsotropic;
  p.radial = std::move(density);
  p.t_radius = t_radius;
  p.r_radius = r_radius;
  const double mass =
      integrate(
          [&](double t) {
            return Complex(integrate(
                               [&](double r) {
                                 return Complex(4.0 * M_PI * r * r *
                                                p.radial(t, r));
                               },
                               0.0, r_radius, 1e-11)
                               .value.real());
          },
          -t_radius, t_radius, 1e-10)
          .value.real();
  if (!(mass > 0.0))
    throw std::invalid_argument("Probe4: density has no mass");
  p.norm = 1.0 / mass;
  return p;
}

double Probe4::density(const Vector4& x) const {
  if (kind == Kind::SeparableGaussian) {
    double d = 1.0;
    for (int m = 0; m < 4; ++m)
      d *= std::exp(-x[m] * x[m] / (sigma[m] * sigma[m])) /
           (sigma[m] * std::sqrt(M_PI));
    return d;
  }
  const double r = x.tail<3>().norm();
  if (std::abs(x[0]) > t_radius || r > r_radius) return 0.0;
  return norm * radial(x[0], r);
}

Vector4 Probe4::second_moments() const {
  if (kind == Kind::SeparableGaussian)
    return (sigma.array() * sigma.array() / 2.0).matrix();
  auto radial_moment = [&](auto&& f) {
    return norm * integrate(
                      [&](double t) {
                        return Complex(
                            integrate(
                                [&](double r) {
                                  return Complex(4.0 * M_PI * r * r *
                                                 radial(t, r) * f(t, r));
                                },
                                0.0, r_radius, 1e-11)
                                .value.real());
                      },
                      -t_radius, t_radius, 1e-10)
                      .value.real();
  };
  Vector4 m;
  m[0] = radial_moment([](double t, double) { return t * t; });
  const double r2 = radial_moment([](double, double r) { return r * r; });
  m[1] = m[2] = m[3] = r2 / 3.0;
  return m;
}

MultiPoly4 MultiPoly4::constant(double c) {
  return monomial({0, 0, 0, 0}, c);
}

MultiPoly4 MultiPoly4::monomial(const std::array<int, 4>& e, double c) {
  MultiPoly4 p;
  p.add(e, c);
  return p;
}

MultiPoly4& MultiPoly4::add(const std::array<int, 4>& e, double c) {
  terms.push_back({e, c});
  return *this;
}

double MultiPoly4::operator()(const Vector4& x) const {
  double acc = 0.0;
  for (const Term& t : terms) {
    double v = t.c;
    for (int m = 0; m < 4; ++m)
      for (int k = 0; k < t.e[m]; ++k) v *= x[m];
    acc += v;
  }
  return acc;
}

int MultiPoly4::degree() const {
  int d = 0;
  for (const Term& t : terms)
    d = std::max(d, t.e[0] + t.e[1] + t.e[2] + t.e[3]);
  return d;
}

MultiPoly4 MultiPoly4::smoothed(const Vector4& variance) const {
  std::map<std::array<int, 4>, double> acc;
  for (const Term& t : terms) {
    // Expand exp(v_mu d^2/2) slot by slot: x^n picks up
    // sum_k (v/2)^k n! / (k! (n-2k)!) x^{n-2k}.
    std::map<std::array<int, 4>, double> cur{{t.e, t.c}};
    for (int m = 0; m < 4; ++m) {
      std::map<std::array<int, 4>, double> next;
      for (const auto& [e, c] : cur) {
        const int n = e[m];
        double coef = c;
        for (int k = 0; 2 * k <= n; ++k) {
          if (k > 0)
            coef *= variance[m] / 2.0 * (n - 2 * k + 2) * (n - 2 * k + 1) /
                    double(k);
          std::array<int, 4> f = e;
          f[m] = n - 2 * k;
          next[f] += coef;
        }
      }
      cur = std::move(next);
    }
    for (const auto& [e, c] : cur) acc[e] += c;
  }
  MultiPoly4 out;
  for (const auto& [e, c] : acc)
    if (c != 0.0) out.add(e, c);
  return out;
}

Field4 Field4::polynomial(MultiPoly4 p) {
  Field4 f;
  f.structure = Structure::Polynomial;
  f.poly = std::move(p);
  f.eval = [q = f.poly](const Vector4& x) { return q(x); };
  return f;
}

Field4 Field4::general(std::function<double(const Vector4&)> fn) {
  Field4 f;
  f.structure = Structure::General;
  f.eval = std::move(fn);
  return f;
}

double Field4::operator()(const Vector4& x) const { return eval(x); }

Field4 quantize_field(const Field4& u, const Probe4& psi) {
  return smooth_field(u, psi, 1.0, false);
}

Field4 portrait_field(const Field4& u, const Probe4& psi) {
  return smooth_field(u, psi, 2.0, true);
}

}  // namespace gm
