#ifndef GM_PHASE4D_HPP
#define GM_PHASE4D_HPP

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace gm {

using Vector4 = Eigen::Vector4d;

/// Normalized probe density |psi(x)|^2 on space-time, either a product of
/// four 1-D Gaussians (width sigma_mu in each slot) or a sampled isotropic
/// density p(t, r) in time and spatial radius.
struct Probe4 {
  enum class Kind { SeparableGaussian, SampledIsotropic };

  Kind kind = Kind::SeparableGaussian;
  Vector4 sigma = Vector4::Ones();
  std::function<double(double, double)> radial;  // p(t, r), unnormalized
  double t_radius = 0.0, r_radius = 0.0;
  double norm = 1.0;

  static Probe4 gaussian(const Vector4& sigma);
  static Probe4 isotropic(std::function<double(double, double)> density,
                          double t_radius, double r_radius);

  /// |psi(x)|^2.
  double density(const Vector4& x) const;
  /// Per-axis variances of |psi|^2 (sigma_mu^2 / 2 for the Gaussian kind).
  Vector4 second_moments() const;
};

/// Real polynomial in the four space-time coordinates.
struct MultiPoly4 {
  struct Term {
    std::array<int, 4> e{0, 0, 0, 0};
    double c = 0.0;
  };
  std::vector<Term> terms;

  static MultiPoly4 constant(double c);
  static MultiPoly4 monomial(const std::array<int, 4>& e, double c = 1.0);
  MultiPoly4& add(const std::array<int, 4>& e, double c);

  double operator()(const Vector4& x) const;
  int degree() const;
  /// Convolution with a centered separable Gaussian of the given per-axis
  /// variances, i.e. exp(v_mu d^2/dx_mu^2 / 2) applied slot by slot.
  MultiPoly4 smoothed(const Vector4& variance) const;
};

/// Scalar field on space-time, optionally with polynomial structure that
/// enables closed-form smoothing.
struct Field4 {
  enum class Structure { Polynomial, General };

  Structure structure = Structure::General;
  MultiPoly4 poly;
  std::function<double(const Vector4&)> eval;

  static Field4 polynomial(MultiPoly4 p);
  static Field4 general(std::function<double(const Vector4&)> f);

  double operator()(const Vector4& x) const;
};

/// Multiplier symbol of the quantized field: (u * |psi|^2)(x). Polynomial
/// fields smooth in closed form (each squared coordinate gains the probe's
/// per-axis variance); general fields go through tensorized quadrature.
Field4 quantize_field(const Field4& u, const Probe4& psi);

/// Semi-classical portrait (u * R_{|psi|^2 |psi|^2})(x); for separable
/// Gaussians this is smoothing with doubled variances.
Field4 portrait_field(const Field4& u, const Probe4& psi);

}  // namespace gm

#endif
