#include "gm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gm/grid.hpp"
#include "gm/quadrature.hpp"

namespace gm {

namespace {

double require(const std::map<std::string, double>& params,
               const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("build_metric: missing parameter '" + key +
                                "'");
  return it->second;
}

}  // namespace

MetricField build_metric(const std::string& name,
                         const std::map<std::string, double>& params) {
  MetricField g;
  g.name = name;
  g.params = params;
  auto constant = [](double c) {
    return [c](const Vector4&) { return c; };
  };
  if (name == "minkowski-cartesian") {
    g.coordinates = MetricField::Coordinates::Cartesian;
    g.components = {constant(1.0), constant(-1.0), constant(-1.0),
                    constant(-1.0)};
  } else if (name == "minkowski-cylindrical") {
    g.coordinates = MetricField::Coordinates::Cylindrical;
    g.components = {constant(1.0), constant(-1.0),
                    [](const Vector4& x) { return -x[1] * x[1]; },
                    constant(-1.0)};
  } else if (name == "minkowski-spherical") {
    g.coordinates = MetricField::Coordinates::Spherical;
    g.components = {constant(1.0), constant(-1.0),
                    [](const Vector4& x) { return -x[1] * x[1]; },
                    [](const Vector4& x) {
                      const double s = std::sin(x[2]);
                      return -x[1] * x[1] * s * s;
                    }};
  } else if (name == "accelerated") {
    const double alpha = require(params, "alpha");
    g.coordinates = MetricField::Coordinates::Accelerated;
    g.components = {[alpha](const Vector4& x) {
                      return alpha * alpha * x[1] * x[1];
                    },
                    constant(-1.0), constant(-1.0), constant(-1.0)};
  } else if (name == "schwarzschild") {
    const double m = require(params, "m");
    g.coordinates = MetricField::Coordinates::Spherical;
    g.components = {[m](const Vector4& x) { return 1.0 - 2.0 * m / x[1]; },
                    [m](const Vector4& x) {
                      return -1.0 / (1.0 - 2.0 * m / x[1]);
                    },
                    [](const Vector4& x) { return -x[1] * x[1]; },
                    [](const Vector4& x) {
                      const double s = std::sin(x[2]);
                      return -x[1] * x[1] * s * s;
                    }};
  } else if (name == "de-sitter") {
    const double lambda = require(params, "lambda");
    g.coordinates = MetricField::Coordinates::Spherical;
    auto f = [lambda](double r) { return 1.0 - lambda * r * r / 3.0; };
    g.components = {[f](const Vector4& x) { return f(x[1]); },
                    [f](const Vector4& x) { return -1.0 / f(x[1]); },
                    [](const Vector4& x) { return -x[1] * x[1]; },
                    [](const Vector4& x) {
                      const double s = std::sin(x[2]);
                      return -x[1] * x[1] * s * s;
                    }};
  } else {
    throw std::invalid_argument("build_metric: unknown metric '" + name + "'");
  }
  return g;
}

MetricField regularize_gaussian(const MetricField& metric, const Vector4& sigma,
                                bool operator_symbol) {
  for (int mu = 0; mu < 4; ++mu)
    if (!(sigma[mu] > 0.0))
      throw std::invalid_argument("regularize_gaussian: widths must be positive");
  // Portrait adds sigma_mu^2 per squared Cartesian coordinate, the operator
  // symbol half of that; both are portraits of the underlying polynomials
  // computed in phase4d, expressed back in the original coordinates.
  Probe4 probe = Probe4::gaussian(sigma);
  auto shift_of = [&](MultiPoly4 p) {
    Field4 out = operator_symbol
                     ? quantize_field(Field4::polynomial(std::move(p)), probe)
                     : portrait_field(Field4::polynomial(std::move(p)), probe);
    return out;
  };

  MetricField g = metric;
  g.name = metric.name + (operator_symbol ? "-quantized" : "-portrait");
  if (metric.name == "minkowski-cylindrical") {
    if (sigma[1] != sigma[2])
      throw std::invalid_argument(
          "regularize_gaussian: cylindrical symmetry needs sigma1 == sigma2");
    MultiPoly4 rho2;
    rho2.add({0, 2, 0, 0}, 1.0).add({0, 0, 2, 0}, 1.0);
    Field4 smoothed = shift_of(rho2);
    g.components[2] = [smoothed](const Vector4& x) {
      return -smoothed(Vector4(0.0, x[1], 0.0, 0.0));
    };
  } else if (metric.name == "minkowski-spherical") {
    if (sigma[1] != sigma[2] || sigma[2] != sigma[3])
      throw std::invalid_argument(
          "regularize_gaussian: spherical symmetry needs equal spatial widths");
    MultiPoly4 r2;
    r2.add({0, 2, 0, 0}, 1.0).add({0, 0, 2, 0}, 1.0).add({0, 0, 0, 2}, 1.0);
    MultiPoly4 rho2;
    rho2.add({0, 2, 0, 0}, 1.0).add({0, 0, 2, 0}, 1.0);
    Field4 sm_r2 = shift_of(r2);
    Field4 sm_rho2 = shift_of(rho2);
    g.components[2] = [sm_r2](const Vector4& x) {
      return -sm_r2(Vector4(0.0, x[1], 0.0, 0.0));
    };
    g.components[3] = [sm_rho2](const Vector4& x) {
      // r^2 sin^2(theta) is the squared distance to the polar axis.
      const double s = std::sin(x[2]);
      return -sm_rho2(Vector4(0.0, x[1] * s, 0.0, 0.0));
    };
  } else if (metric.name == "accelerated") {
    const double alpha = metric.params.at("alpha");
    MultiPoly4 x12 = MultiPoly4::monomial({0, 2, 0, 0}, alpha * alpha);
    Field4 sm = shift_of(x12);
    g.components[0] = [sm](const Vector4& x) {
      return sm(Vector4(0.0, x[1], 0.0, 0.0));
    };
  } else if (metric.name == "minkowski-cartesian") {
    // Constant components are fixed points of the smoothing.
  } else {
    throw std::invalid_argument(
        "regularize_gaussian: '" + metric.name +
        "' is not polynomial; use schwarzschild_profiles");
  }
  return g;
}

double RadialProbability::expect(const std::function<double(double)>& f,
                                 std::vector<double> splits,
                                 double tol) const {
  splits.push_back(r_lo);
  splits.push_back(r_hi);
  std::sort(splits.begin(), splits.end());
  double acc = 0.0;
  for (size_t i = 0; i + 1 < splits.size(); ++i) {
    const double a = std::max(splits[i], r_lo);
    const double b = std::min(splits[i + 1], r_hi);
    if (b <= a) continue;
    acc += integrate_real([&](double r) { return weight(r) * f(r); }, a, b,
                          tol);
  }
  return acc;
}

double RadialProbability::cumulative(double r) const {
  if (r <= r_lo) return 0.0;
  const double b = std::min(r, r_hi);
  return integrate_real(weight, r_lo, b, 1e-10);
}

RadialProbability RadialProbability::gaussian_shell(double rc, double sr,
                                                    double st) {
  if (!(sr > 0.0) || !(st > 0.0))
    throw std::invalid_argument("gaussian_shell: widths must be positive");
  RadialProbability p;
  p.t_radius = 10.0 * st;
  p.r_lo = std::max(0.0, rc - 12.0 * sr);
  p.r_hi = rc + 12.0 * sr;
  auto shape = [rc, sr](double r) {
    return std::exp(-(r - rc) * (r - rc) / (2.0 * sr * sr));
  };
  const double mass = integrate_real(
      [&](double r) { return 4.0 * M_PI * r * r * shape(r); }, p.r_lo, p.r_hi,
      1e-12);
  if (!(mass > 0.0))
    throw std::invalid_argument("gaussian_shell: density has no mass");
  const double tnorm = st * std::sqrt(2.0 * M_PI);
  p.density = [shape, st, tnorm, mass](double t, double r) {
    return std::exp(-t * t / (2.0 * st * st)) / tnorm * shape(r) / mass;
  };
  p.weight = [shape, mass](double r) {
    return 4.0 * M_PI * r * r * shape(r) / mass;
  };
  p.mean_inverse_r = p.expect([](double r) { return 1.0 / r; });
  p.mean_r2 = p.expect([](double r) { return r * r; });
  return p;
}

RadialProbability RadialProbability::from_density(
    std::function<double(double, double)> pd, double t_radius,
    double r_radius) {
  if (!(t_radius > 0.0) || !(r_radius > 0.0))
    throw std::invalid_argument("from_density: support radii must be positive");
  RadialProbability p;
  p.t_radius = t_radius;
  p.r_lo = 0.0;
  p.r_hi = r_radius;
  auto marginal = [pd, t_radius](double r) {
    return 4.0 * M_PI * r * r *
           integrate_real([&](double t) { return pd(t, r); }, -t_radius,
                          t_radius, 1e-11);
  };
  const double mass = integrate_real(marginal, p.r_lo, p.r_hi, 1e-9);
  if (!(mass > 0.0))
    throw std::invalid_argument("from_density: density has no mass");
  p.density = [pd, mass](double t, double r) { return pd(t, r) / mass; };
  p.weight = [marginal, mass](double r) { return marginal(r) / mass; };
  p.mean_inverse_r = p.expect([](double r) { return 1.0 / r; });
  p.mean_r2 = p.expect([](double r) { return r * r; });
  return p;
}

double SchwarzschildProfiles::U(double r) const {
  const double below = probe.cumulative(r);
  const double tail = probe.expect(
      [r](double rp) { return rp > r ? 1.0 / rp : 0.0; }, {r});
  return 1.0 - (2.0 * m / r) * below - 2.0 * m * tail;
}

double SchwarzschildProfiles::L(double r) const {
  const double a = r - 2.0 * m;
  // Integrable log singularities sit at |r - 2m| and r + 2m; split panels
  // there and at the indicator boundary r. Deep subdivision can still round
  // a node onto a singular point; its value there is immaterial, so report 0.
  auto lg = [](double num, double den) {
    const double q = std::abs(num) / std::abs(den);
    return q > 0.0 && std::isfinite(q) ? std::log(q) : 0.0;
  };
  std::vector<double> splits{std::abs(a), r, r + 2.0 * m};
  auto inner = probe.expect(
      [&](double rp) {
        if (rp > r || rp <= 0.0) return 0.0;
        return lg(rp + a, rp - a) / rp;
      },
      splits);
  auto outer = probe.expect(
      [&](double rp) {
        if (rp <= r) return 0.0;
        return lg(rp + a, rp - r - 2.0 * m) / rp;
      },
      splits);
  return 2.0 * m * m / r * (inner + outer);
}

double SchwarzschildProfiles::V(double r) const {
  return 2.0 - U(r) + L(r);
}

double SchwarzschildProfiles::dU(double r) const {
  return 2.0 * m / (r * r) * probe.cumulative(r);
}

SchwarzschildProfiles schwarzschild_profiles(const RadialProbability& p,
                                             double m) {
  if (!(m > 0.0))
    throw std::invalid_argument("schwarzschild_profiles: need m > 0");
  if (!std::isfinite(p.mean_inverse_r))
    throw std::invalid_argument("schwarzschild_profiles: <1/r'> diverges");
  return SchwarzschildProfiles{p, m};
}

ProfileLimits profile_limits(const SchwarzschildProfiles& profiles) {
  const double m = profiles.m;
  const RadialProbability& p = profiles.probe;
  ProfileLimits out;
  out.U_min = 1.0 - 2.0 * m * p.mean_inverse_r;
  out.U_at_2m = profiles.U(2.0 * m);
  out.V_at_2m = profiles.V(2.0 * m);
  out.U_inf = profiles.U(1e3 * m);
  out.V_inf = profiles.V(1e3 * m);
  try {
    // <1/(r'(r'-2m))> = -pi H(u)(2m) with u(tau) = weight(tau)/tau.
    auto u = [&](double tau) {
      return (tau > p.r_lo && tau < p.r_hi) ? p.weight(tau) / tau : 0.0;
    };
    const double pv = -M_PI * hilbert_transform(u, 2.0 * m, 1e-8);
    out.V_at_0 = 1.0 + 2.0 * m * p.mean_inverse_r + 4.0 * m * m * pv;
  } catch (const QuadratureError&) {
    out.pv_ok = false;
    out.V_at_0 = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::optional<double> shifted_radius(const SchwarzschildProfiles& profiles) {
  const double m = profiles.m;
  const double u_min = 1.0 - 2.0 * m * profiles.probe.mean_inverse_r;
  if (u_min > 0.0) return std::nullopt;
  double lo = 1e-12 * m, hi = 2.0 * m;
  double flo = profiles.U(lo);
  double fhi = profiles.U(hi);
  if (!(flo <= 0.0) || !(fhi > 0.0))
    throw std::runtime_error(
        "shifted_radius: root not bracketed in (0, 2m), contradicting "
        "monotonicity");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * m; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = profiles.U(mid);
    if (std::abs(fm) <= 1e-11) return mid;
    (fm <= 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  if (std::abs(profiles.U(root)) > 1e-10)
    throw std::runtime_error("shifted_radius: residual above tolerance");
  return root;
}

}  // namespace gm
