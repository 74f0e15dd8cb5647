#ifndef GM_CURVATURE_HPP
#define GM_CURVATURE_HPP

#include <array>
#include <string>
#include <vector>

#include "gm/metrics.hpp"

namespace gm {

/// Curvature data of a diagonal metric at a point. Conventions: signature
/// +---, Riemann sign chosen so that R^rho_{sigma mu nu} =
/// partial_nu Gamma^rho_{mu sigma} - partial_mu Gamma^rho_{nu sigma} + ...,
/// Ricci R_{mu nu} = R^lambda_{mu lambda nu}, Einstein G = Ricci - g R / 2,
/// stress-energy T = G / kappa.
struct CurvatureReport {
  Vector4 point = Vector4::Zero();
  std::array<std::array<std::array<double, 4>, 4>, 4> christoffel{};
  Eigen::Matrix4d ricci = Eigen::Matrix4d::Zero();
  double scalar = 0.0;
  Eigen::Matrix4d einstein = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d stress_energy = Eigen::Matrix4d::Zero();
  double step = 0.0;            // base finite-difference step
  double derivative_error = 0.0;  // worst Richardson residual
};

/// Central finite differences with two Richardson levels on the metric
/// components; h < 0 selects the default 1e-2 max(1, |x_mu|) per axis.
CurvatureReport curvature_at(const MetricField& metric, const Vector4& x,
                             double kappa, double h = -1.0);

struct StressEnergyScan {
  std::vector<CurvatureReport> reports;  // successful points, in input order
  std::vector<std::pair<std::size_t, std::string>> failures;
};

StressEnergyScan stress_energy_scan(const MetricField& metric,
                                    const std::vector<Vector4>& points,
                                    double kappa);

}  // namespace gm

#endif
