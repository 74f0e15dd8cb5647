#ifndef GM_METRICS_HPP
#define GM_METRICS_HPP

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gm/phase4d.hpp"

namespace gm {

/// Diagonal metric field g_mumu(x) in one of the catalog coordinate systems.
/// The argument vector holds the coordinate tuple of that system: (t, x1,
/// x2, x3) Cartesian, (t, rho, theta, z) cylindrical, (t, r, theta, phi)
/// spherical.
struct MetricField {
  enum class Coordinates { Cartesian, Cylindrical, Spherical, Accelerated };

  std::string name;
  Coordinates coordinates = Coordinates::Cartesian;
  std::array<std::function<double(const Vector4&)>, 4> components;
  std::map<std::string, double> params;

  double operator()(int mu, const Vector4& x) const {
    return components[size_t(mu)](x);
  }
};

/// Catalog: "minkowski-cartesian", "minkowski-cylindrical",
/// "minkowski-spherical", "accelerated" (alpha), "schwarzschild" (m),
/// "de-sitter" (lambda). Throws std::invalid_argument naming any missing
/// parameter.
MetricField build_metric(const std::string& name,
                         const std::map<std::string, double>& params);

/// Component-wise semi-classical portrait of a polynomial catalog metric
/// under a separable Gaussian probe (operator_symbol = true gives the
/// multiplier symbol instead, with half the variance shift). Schwarzschild
/// and de Sitter must go through schwarzschild_profiles.
MetricField regularize_gaussian(const MetricField& metric, const Vector4& sigma,
                                bool operator_symbol = false);

/// Spatially isotropic probability density p(t, r) on space-time with the
/// measure 4 pi r^2 dr dt, reduced to its normalized radial marginal.
struct RadialProbability {
  std::function<double(double, double)> density;  // normalized p(t, r)
  std::function<double(double)> weight;           // radial marginal, unit mass
  double t_radius = 0.0;
  double r_lo = 0.0, r_hi = 0.0;
  double mean_inverse_r = 0.0;  // <1/r'>
  double mean_r2 = 0.0;         // <r'^2>

  /// <f(r')>, with optional interior quadrature panel splits.
  double expect(const std::function<double(double)>& f,
                std::vector<double> splits = {}, double tol = 1e-9) const;
  /// <1_{[0,r]}(r')>.
  double cumulative(double r) const;

  /// p(t, r) proportional to exp(-t^2/2 st^2) exp(-(r - rc)^2/2 sr^2),
  /// truncated to r >= 0 and renormalized.
  static RadialProbability gaussian_shell(double rc, double sr, double st);
  static RadialProbability from_density(
      std::function<double(double, double)> p, double t_radius,
      double r_radius);
};

/// Regularized Schwarzschild profiles for a mass m and probe marginal p:
///   U(r) = 1 - (2m/r) <1_{[0,r]}> - 2m <Y_r(r') / r'>,
///   V(r) = 2 - U(r) + L(r),
/// with L the logarithmic expectation; its integrable log singularities at
/// r' in {|r - 2m|, r + 2m} are handled by panel splits.
struct SchwarzschildProfiles {
  RadialProbability probe;
  double m = 1.0;

  double U(double r) const;
  double L(double r) const;
  double V(double r) const;
  double dU(double r) const;  // (2m/r^2) <1_{[0,r]}>
};

SchwarzschildProfiles schwarzschild_profiles(const RadialProbability& p,
                                             double m);

struct ProfileLimits {
  double U_min = 0.0;   // 1 - <2m/r'>
  double U_at_2m = 0.0;
  double V_at_2m = 0.0;
  double V_at_0 = 0.0;  // 1 + <2m/r'> + 4m^2 PV<1/(r'(r'-2m))>
  double U_inf = 0.0;   // sampled at r = 1e3 m
  double V_inf = 0.0;
  bool pv_ok = true;    // principal-value evaluation of V_at_0 converged
};

ProfileLimits profile_limits(const SchwarzschildProfiles& profiles);

/// Root of U in (0, 2m) when U_min <= 0; std::nullopt when the temporal
/// term is completely regularized.
std::optional<double> shifted_radius(const SchwarzschildProfiles& profiles);

}  // namespace gm

#endif
